#pragma once

#include "uiobank/index_set.hpp"
#include "uiobank/matrix_ops.hpp"

namespace uiobank {

// Discrete-time LTI plant x+ = A x + B (u + a_u), y = C x + a_y.
// Construction asserts the standing assumptions: B has full column rank,
// (A, B) is stabilizable, and (A, C) is detectable.
class PlantModel {
public:
    PlantModel(Mat a, Mat b, Mat c, const Tolerances& tol = {});

    const Mat& A() const { return a_; }
    const Mat& B() const { return b_; }
    const Mat& C() const { return c_; }

    int n() const { return static_cast<int>(a_.rows()); }
    int input_count() const { return static_cast<int>(b_.cols()); }
    int output_count() const { return static_cast<int>(c_.rows()); }

    // Row selection C^{J}: stacks the rows of C indexed by `sensors`.
    Mat c_rows(const IndexSet& sensors) const;
    // Column selection b_{J}: stacks the columns of B indexed by `actuators`.
    // An empty set yields an n x 0 matrix.
    Mat b_cols(const IndexSet& actuators) const;

    // Row selection of an output sample y^{J}.
    Vec select_outputs(const Vec& y, const IndexSet& sensors) const;

private:
    Mat a_, b_, c_;
};

} // namespace uiobank
