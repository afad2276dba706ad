#include "uiobank/matrix_ops.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace uiobank {

void Tolerances::validate() const {
    if (!(rank_tol > 0.0) || !(schur_margin > 0.0) || !(residual_tol > 0.0) || !(iter_tol > 0.0) ||
        iter_max <= 0) {
        fail(ErrorCode::invalid_input, "tolerances must be strictly positive");
    }
    if (!(schur_margin < 1.0)) {
        fail(ErrorCode::invalid_input, "schur_margin must be below 1");
    }
}

bool all_finite(const Mat& m) { return m.allFinite(); }

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

namespace {

void require_finite(const Mat& m, const char* what) {
    if (!all_finite(m)) {
        fail(ErrorCode::invalid_input, std::string(what) + " has non-finite entries");
    }
}

void require_square(const Mat& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        fail(ErrorCode::invalid_input, std::string(what) + " must be square and non-empty");
    }
}

Eigen::Index count_above_cutoff(const Eigen::VectorXd& singular_values, double rel_tol) {
    if (singular_values.size() == 0) return 0;
    const double cutoff = rel_tol * singular_values(0); // values are sorted descending
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
        if (singular_values(i) > cutoff) ++r;
    }
    return r;
}

// Complex-matrix rank used by the PBH tests.
Eigen::Index rank_complex(const Eigen::MatrixXcd& m, double rel_tol) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return count_above_cutoff(svd.singularValues(), rel_tol);
}

} // namespace

Eigen::Index matrix_rank(const Mat& m, const Tolerances& tol) {
    tol.validate();
    if (m.size() == 0) fail(ErrorCode::invalid_input, "rank of an empty matrix");
    require_finite(m, "matrix");
    Eigen::JacobiSVD<Mat> svd(m);
    return count_above_cutoff(svd.singularValues(), tol.rank_tol);
}

Mat pinv(const Mat& m, const Tolerances& tol) {
    tol.validate();
    if (m.size() == 0) fail(ErrorCode::invalid_input, "pseudoinverse of an empty matrix");
    require_finite(m, "matrix");
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = tol.rank_tol * (sv.size() > 0 ? sv(0) : 0.0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double spectral_radius(const Mat& m) {
    require_square(m, "matrix");
    require_finite(m, "matrix");
    Eigen::EigenSolver<Mat> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        fail(ErrorCode::no_convergence, "eigenvalue computation failed");
    }
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_schur(const Mat& m, const Tolerances& tol) {
    tol.validate();
    return spectral_radius(m) <= 1.0 - tol.schur_margin;
}

bool is_detectable(const Mat& a, const Mat& c, const Tolerances& tol) {
    tol.validate();
    require_square(a, "A");
    require_finite(a, "A");
    require_finite(c, "C");
    if (c.cols() != a.rows() || c.rows() == 0) {
        fail(ErrorCode::invalid_input, "C must have as many columns as A and at least one row");
    }
    const Eigen::Index n = a.rows();
    Eigen::EigenSolver<Mat> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        fail(ErrorCode::no_convergence, "eigenvalue computation failed");
    }
    const Eigen::VectorXcd lambdas = es.eigenvalues();

    Eigen::MatrixXcd pbh(n + c.rows(), n);
    for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
        if (std::abs(lambdas(i)) < 1.0 - tol.schur_margin) continue; // stable mode, nothing to observe
        pbh.topRows(n) = a.cast<std::complex<double>>();
        pbh.topRows(n).diagonal().array() -= lambdas(i);
        pbh.bottomRows(c.rows()) = c.cast<std::complex<double>>();
        if (rank_complex(pbh, tol.rank_tol) < n) return false;
    }
    return true;
}

bool is_stabilizable(const Mat& a, const Mat& b, const Tolerances& tol) {
    tol.validate();
    require_square(a, "A");
    require_finite(a, "A");
    require_finite(b, "B");
    if (b.rows() != a.rows()) {
        fail(ErrorCode::invalid_input, "B must have as many rows as A");
    }
    if (b.cols() == 0) {
        // No control authority at all: only a Schur A survives.
        return is_schur(a, tol);
    }
    return is_detectable(a.transpose(), b.transpose(), tol);
}

Mat stabilizing_state_gain(const Mat& a, const Mat& b, const Tolerances& tol) {
    tol.validate();
    require_square(a, "A");
    if (b.rows() != a.rows() || b.cols() == 0) {
        fail(ErrorCode::invalid_input, "B must be n x m with m >= 1");
    }
    if (!is_stabilizable(a, b, tol)) {
        fail(ErrorCode::design_infeasible, "(A, B) is not stabilizable");
    }

    const Eigen::Index n = a.rows();
    const Eigen::Index m = b.cols();
    const Mat q = Mat::Identity(n, n);
    const Mat r = Mat::Identity(m, m);

    // Value iteration of the Riccati recursion with identity weights.
    Mat p = q;
    bool converged = false;
    for (int it = 0; it < tol.iter_max; ++it) {
        const Mat bt_p = b.transpose() * p;
        const Mat gram = r + bt_p * b;                     // symmetric positive definite
        const Mat gain = gram.llt().solve(bt_p * a);       // (R + B'PB)^{-1} B'PA
        Mat next = a.transpose() * p * a - (a.transpose() * p * b) * gain + q;
        next = 0.5 * (next + next.transpose().eval());
        const double diff = max_abs(next - p);
        p = next;
        if (diff < tol.iter_tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        fail(ErrorCode::no_convergence, "Riccati iteration exceeded iter_max");
    }

    const Mat bt_p = b.transpose() * p;
    const Mat k = -((r + bt_p * b).llt().solve(bt_p * a));
    if (!is_schur(a + b * k, tol)) {
        fail(ErrorCode::no_convergence, "Riccati iterate did not yield a Schur closed loop");
    }
    return k;
}

Mat stabilizing_observer_gain(const Mat& a1, const Mat& c, const Tolerances& tol) {
    tol.validate();
    require_square(a1, "A1");
    if (c.cols() != a1.rows() || c.rows() == 0) {
        fail(ErrorCode::invalid_input, "C must have as many columns as A1 and at least one row");
    }
    if (!is_detectable(a1, c, tol)) {
        fail(ErrorCode::design_infeasible, "(C, A1) is not detectable");
    }
    // Dual problem: A1' + C' Kd Schur  =>  K1 = -Kd' gives A1 - K1 C Schur.
    const Mat kd = stabilizing_state_gain(a1.transpose(), c.transpose(), tol);
    return -kd.transpose();
}

Mat dlyap(const Mat& m, const Mat& q) {
    require_square(m, "M");
    require_square(q, "Q");
    if (q.rows() != m.rows()) fail(ErrorCode::invalid_input, "M and Q sizes differ");
    const Eigen::Index n = m.rows();

    // vec(M' X M) = (M' (x) M') vec(X) with column-major vec.
    Mat kron(n * n, n * n);
    const Mat mt = m.transpose();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            kron.block(i * n, j * n, n, n) = mt(i, j) * mt;

    Mat lhs = Mat::Identity(n * n, n * n) - kron;
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(q.data(), n * n);
    Eigen::VectorXd x = lhs.partialPivLu().solve(rhs);
    Mat out = Eigen::Map<const Mat>(x.data(), n, n);
    return 0.5 * (out + out.transpose().eval());
}

Vec symmetric_eigenvalues(const Mat& m) {
    require_square(m, "matrix");
    require_finite(m, "matrix");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()));
    if (es.info() != Eigen::Success) {
        fail(ErrorCode::no_convergence, "symmetric eigenvalue computation failed");
    }
    return es.eigenvalues();
}

} // namespace uiobank
