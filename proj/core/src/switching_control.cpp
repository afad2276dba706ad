#include "uiobank/switching_control.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace uiobank {

Mat design_static_gain(const PlantModel& plant, const Tolerances& tol) {
    return stabilizing_state_gain(plant.A(), plant.B(), tol);
}

int control_redundancy(const PlantModel& plant, const Tolerances& tol) {
    const int n_u = plant.input_count();
    // Largest q < n_u such that every subset with card >= n_u - q keeps
    // (A, b_J) stabilizable. Checked at every admissible cardinality.
    int best = 0;
    for (int q = 1; q < n_u; ++q) {
        bool ok = true;
        for (int card = n_u - q; card < n_u && ok; ++card) {
            for (const IndexSet& j : IndexSet::subsets_of_size(n_u, card)) {
                if (!is_stabilizable(plant.A(), plant.b_cols(j), tol)) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) break;
        best = q;
    }
    return best;
}

GainTable::GainTable(const PlantModel& plant, int bound, std::map<IndexSet, Mat> gains)
    : a_(plant.A()), b_(plant.B()), bound_(bound), gains_(std::move(gains)) {
    if (bound_ < 0 || bound_ >= plant.input_count()) {
        fail(ErrorCode::invalid_input, "gain-table bound must satisfy 0 <= bound < input count");
    }
    for (const auto& [j, k] : gains_) {
        if (j.universe() != plant.input_count() || k.rows() != j.size() || k.cols() != plant.n()) {
            fail(ErrorCode::invalid_input, "gain for {" + j.to_string() + "} has wrong dimensions");
        }
    }
}

bool GainTable::admissible(const IndexSet& on_set) const {
    return on_set.universe() == actuator_count() && on_set.size() >= actuator_count() - bound_ &&
           !on_set.empty();
}

const Mat& GainTable::gain(const IndexSet& on_set) const {
    auto it = gains_.find(on_set);
    if (it == gains_.end()) {
        fail(ErrorCode::invalid_input, "no gain stored for actuator set {" + on_set.to_string() + "}");
    }
    return it->second;
}

Mat GainTable::closed_loop(const IndexSet& on_set) const {
    const Mat& k = gain(on_set);
    Mat b_sel(b_.rows(), on_set.size());
    Eigen::Index col = 0;
    for (int i : on_set.indices()) b_sel.col(col++) = b_.col(i - 1);
    return a_ + b_sel * k;
}

GainTable design_switching_gains(const PlantModel& plant, int bound, const Tolerances& tol) {
    const int n_u = plant.input_count();
    if (bound < 0 || bound >= n_u) {
        fail(ErrorCode::invalid_input, "switching bound must satisfy 0 <= bound < input count");
    }
    std::map<IndexSet, Mat> gains;
    for (int card = std::max(1, n_u - bound); card <= n_u; ++card) {
        for (const IndexSet& j : IndexSet::subsets_of_size(n_u, card)) {
            const Mat b_sel = plant.b_cols(j);
            if (!is_stabilizable(plant.A(), b_sel, tol)) {
                fail(ErrorCode::design_infeasible,
                     "(A, b_J) not stabilizable for actuator set {" + j.to_string() + "}");
            }
            gains.emplace(j, stabilizing_state_gain(plant.A(), b_sel, tol));
        }
    }
    return GainTable(plant, bound, std::move(gains));
}

bool validate_certificate(const GainTable& table, const Mat& p, double margin,
                          const Tolerances& tol) {
    tol.validate();
    if (p.rows() != p.cols() || p.rows() == 0) {
        fail(ErrorCode::invalid_input, "certificate P must be square");
    }
    if (max_abs(p - p.transpose()) > tol.residual_tol * std::max(1.0, max_abs(p))) {
        fail(ErrorCode::invalid_input, "certificate P must be symmetric");
    }
    if (symmetric_eigenvalues(p)(0) <= 0.0) return false;
    for (const auto& [j, k] : table.gains()) {
        const Mat m = table.closed_loop(j);
        if (m.rows() != p.rows()) {
            fail(ErrorCode::invalid_input, "certificate P does not match the state dimension");
        }
        const Mat decrease = p - m.transpose() * p * m; // must be >= margin I
        if (symmetric_eigenvalues(decrease)(0) < margin) return false;
    }
    return true;
}

std::optional<LyapunovCertificate> search_certificate(const GainTable& table, const Tolerances& tol) {
    tol.validate();
    if (table.gains().empty()) return std::nullopt;

    const Eigen::Index n = table.gains().begin()->second.cols();
    std::vector<Mat> modes;
    modes.reserve(table.gains().size());
    for (const auto& [j, k] : table.gains()) {
        Mat m = table.closed_loop(j);
        if (!is_schur(m, tol)) return std::nullopt; // per-mode Lyapunov solutions need Schur modes
        modes.push_back(std::move(m));
    }

    auto certified = [&](const Mat& p) -> std::optional<LyapunovCertificate> {
        if (symmetric_eigenvalues(p)(0) <= 0.0) return std::nullopt;
        double worst = std::numeric_limits<double>::infinity();
        for (const Mat& m : modes) {
            worst = std::min(worst, symmetric_eigenvalues(p - m.transpose() * p * m)(0));
        }
        if (worst <= 0.0) return std::nullopt;
        const double margin = 0.999 * worst;
        if (margin <= 0.0) return std::nullopt;
        return LyapunovCertificate{p, margin};
    };

    auto averaged_solution = [&](const Mat& q) {
        Mat sum = Mat::Zero(n, n);
        for (const Mat& m : modes) sum += dlyap(m, q);
        Mat p = sum / static_cast<double>(modes.size());
        p *= static_cast<double>(n) / p.trace(); // normalize scale
        return p;
    };

    Mat p = averaged_solution(Mat::Identity(n, n));
    if (auto cert = certified(p)) return cert;
    for (int it = 0; it < tol.iter_max; ++it) {
        Mat next = averaged_solution(p);
        if (auto cert = certified(next)) return cert;
        if (max_abs(next - p) < tol.iter_tol) break; // stationary and still failing
        p = std::move(next);
    }
    return std::nullopt;
}

SupervisorCommand supervisor_step(const IndexSet& isolated_actuators, const GainTable& table,
                                  const Vec& xhat) {
    const int n_u = table.actuator_count();
    if (isolated_actuators.universe() != n_u) {
        fail(ErrorCode::invalid_input, "isolated set universe does not match the actuator count");
    }
    const IndexSet active = isolated_actuators.complement();
    if (active.size() < n_u - table.bound() || active.empty()) {
        fail(ErrorCode::unstabilizable_configuration,
             "too many isolated actuators: only {" + active.to_string() + "} left active");
    }
    const Mat& k = table.gain(active);
    if (xhat.size() != k.cols()) {
        fail(ErrorCode::invalid_input, "estimate has wrong length for the gain table");
    }
    const Vec reduced = k * xhat;
    Vec u = Vec::Zero(n_u);
    Eigen::Index r = 0;
    for (int i : active.indices()) u(i - 1) = reduced(r++);
    return {active, u};
}

} // namespace uiobank
