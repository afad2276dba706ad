#include "uiobank/plant.hpp"

namespace uiobank {

PlantModel::PlantModel(Mat a, Mat b, Mat c, const Tolerances& tol)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    tol.validate();
    if (a_.rows() == 0 || a_.rows() != a_.cols()) {
        fail(ErrorCode::invalid_input, "A must be square and non-empty");
    }
    if (b_.rows() != a_.rows() || b_.cols() == 0) {
        fail(ErrorCode::invalid_input, "B must have as many rows as A and at least one column");
    }
    if (c_.cols() != a_.rows() || c_.rows() == 0) {
        fail(ErrorCode::invalid_input, "C must have as many columns as A and at least one row");
    }
    if (!all_finite(a_) || !all_finite(b_) || !all_finite(c_)) {
        fail(ErrorCode::invalid_input, "plant matrices must be finite");
    }
    if (matrix_rank(b_, tol) != b_.cols()) {
        fail(ErrorCode::invalid_input, "B must have full column rank");
    }
    if (!is_stabilizable(a_, b_, tol)) {
        fail(ErrorCode::invalid_input, "(A, B) must be stabilizable");
    }
    if (!is_detectable(a_, c_, tol)) {
        fail(ErrorCode::invalid_input, "(A, C) must be detectable");
    }
}

Mat PlantModel::c_rows(const IndexSet& sensors) const {
    if (sensors.universe() != output_count()) {
        fail(ErrorCode::invalid_input, "sensor set universe does not match output count");
    }
    Mat out(sensors.size(), n());
    Eigen::Index r = 0;
    for (int i : sensors.indices()) out.row(r++) = c_.row(i - 1);
    return out;
}

Mat PlantModel::b_cols(const IndexSet& actuators) const {
    if (actuators.universe() != input_count()) {
        fail(ErrorCode::invalid_input, "actuator set universe does not match input count");
    }
    Mat out(n(), actuators.size());
    Eigen::Index col = 0;
    for (int i : actuators.indices()) out.col(col++) = b_.col(i - 1);
    return out;
}

Vec PlantModel::select_outputs(const Vec& y, const IndexSet& sensors) const {
    if (y.size() != output_count()) {
        fail(ErrorCode::invalid_input, "output sample has wrong length");
    }
    Vec out(sensors.size());
    Eigen::Index r = 0;
    for (int i : sensors.indices()) out(r++) = y(i - 1);
    return out;
}

} // namespace uiobank
