#include "uiobank/uio_design.hpp"

#include <cstdint>

namespace uiobank {

namespace {

// E = G pinv(C^J G) for the unknown-input columns G; empty G gives E = 0.
Mat decoupling_gain(const Mat& c_sel, const Mat& unknown_cols, const Tolerances& tol) {
    if (unknown_cols.cols() == 0) {
        return Mat::Zero(unknown_cols.rows(), c_sel.rows());
    }
    return unknown_cols * pinv(c_sel * unknown_cols, tol);
}

bool rank_condition(const Mat& c_sel, const Mat& unknown_cols, const Tolerances& tol) {
    if (unknown_cols.cols() == 0) return true;
    const Eigen::Index want = unknown_cols.cols();
    return matrix_rank(unknown_cols, tol) == want && matrix_rank(c_sel * unknown_cols, tol) == want;
}

bool feasible_for(const PlantModel& plant, const Mat& c_sel, const Mat& unknown_cols,
                  const Tolerances& tol) {
    if (!rank_condition(c_sel, unknown_cols, tol)) return false;
    const Mat e = decoupling_gain(c_sel, unknown_cols, tol);
    const Mat a1 = plant.A() - e * (c_sel * plant.A());
    return is_detectable(a1, c_sel, tol);
}

struct ObserverCore {
    Mat n, l, e;
};

ObserverCore build_core(const PlantModel& plant, const Mat& c_sel, const Mat& unknown_cols,
                        const Tolerances& tol) {
    const Mat e = decoupling_gain(c_sel, unknown_cols, tol);
    const Mat a1 = plant.A() - e * (c_sel * plant.A());
    const Mat k1 = stabilizing_observer_gain(a1, c_sel, tol);
    const Mat n = a1 - k1 * c_sel;
    const Mat l = k1 + n * e;
    return {n, l, e};
}

std::size_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::size_t r = 1;
    for (int i = 0; i < k; ++i) r = r * static_cast<std::size_t>(n - i) / static_cast<std::size_t>(i + 1);
    return r;
}

// True iff a partial observer is feasible for every actuator subset of
// cardinality in [1, max_act] (0 = no actuator requirement) and every sensor
// subset of cardinality in [min_card, n_y].
bool partial_feasible_all(const PlantModel& plant, int max_act, int min_card, const Tolerances& tol) {
    for (int sc = min_card; sc <= plant.output_count(); ++sc) {
        for (const IndexSet& js : IndexSet::subsets_of_size(plant.output_count(), sc)) {
            if (max_act == 0) {
                if (!partial_feasible(plant, IndexSet::empty_set(plant.input_count()), js, tol)) {
                    return false;
                }
                continue;
            }
            for (int ac = 1; ac <= max_act; ++ac) {
                for (const IndexSet& ju : IndexSet::subsets_of_size(plant.input_count(), ac)) {
                    if (!partial_feasible(plant, ju, js, tol)) return false;
                }
            }
        }
    }
    return true;
}

} // namespace

bool complete_feasible(const PlantModel& plant, const IndexSet& sensors, const Tolerances& tol) {
    if (sensors.empty()) fail(ErrorCode::invalid_input, "sensor subset must be non-empty");
    return feasible_for(plant, plant.c_rows(sensors), plant.B(), tol);
}

CompleteUioDesign design_complete(const PlantModel& plant, const IndexSet& sensors,
                                  const Tolerances& tol) {
    if (sensors.empty()) fail(ErrorCode::invalid_input, "sensor subset must be non-empty");
    const Mat c_sel = plant.c_rows(sensors);
    if (!rank_condition(c_sel, plant.B(), tol)) {
        fail(ErrorCode::design_infeasible,
             "rank(C^J B) = rank(B) = input count fails for sensors {" + sensors.to_string() + "}");
    }
    if (!feasible_for(plant, c_sel, plant.B(), tol)) {
        fail(ErrorCode::design_infeasible,
             "(C^J, A - E C^J A) is not detectable for sensors {" + sensors.to_string() + "}");
    }
    ObserverCore core = build_core(plant, c_sel, plant.B(), tol);
    return {sensors, std::move(core.n), std::move(core.l), std::move(core.e)};
}

bool partial_feasible(const PlantModel& plant, const IndexSet& actuators, const IndexSet& sensors,
                      const Tolerances& tol) {
    if (sensors.empty()) fail(ErrorCode::invalid_input, "sensor subset must be non-empty");
    return feasible_for(plant, plant.c_rows(sensors), plant.b_cols(actuators), tol);
}

PartialUioDesign design_partial(const PlantModel& plant, const IndexSet& actuators,
                                const IndexSet& sensors, const Tolerances& tol) {
    if (sensors.empty()) fail(ErrorCode::invalid_input, "sensor subset must be non-empty");
    const Mat c_sel = plant.c_rows(sensors);
    const Mat cols = plant.b_cols(actuators);
    if (!rank_condition(c_sel, cols, tol)) {
        fail(ErrorCode::design_infeasible, "rank(C^J b_J) = card(J) fails for actuators {" +
                                               actuators.to_string() + "}, sensors {" +
                                               sensors.to_string() + "}");
    }
    if (!feasible_for(plant, c_sel, cols, tol)) {
        fail(ErrorCode::design_infeasible, "(C^J, A - E C^J A) is not detectable for actuators {" +
                                               actuators.to_string() + "}, sensors {" +
                                               sensors.to_string() + "}");
    }
    ObserverCore core = build_core(plant, c_sel, cols, tol);
    const Mat t = Mat::Identity(plant.n(), plant.n()) - core.e * c_sel;
    return {actuators, sensors, std::move(core.n), std::move(core.l), std::move(core.e), t};
}

double design_residual(const PlantModel& plant, const CompleteUioDesign& design) {
    const Mat c_sel = plant.c_rows(design.sensors);
    const Mat i = Mat::Identity(plant.n(), plant.n());
    const Mat r1 =
        design.N * (i - design.E * c_sel) + design.L * c_sel + (design.E * c_sel - i) * plant.A();
    const Mat r2 = (design.E * c_sel - i) * plant.B();
    return std::max(max_abs(r1), max_abs(r2));
}

double design_residual(const PlantModel& plant, const PartialUioDesign& design) {
    const Mat c_sel = plant.c_rows(design.sensors);
    const Mat i = Mat::Identity(plant.n(), plant.n());
    const Mat r1 =
        design.N * (i - design.E * c_sel) + design.L * c_sel + (design.E * c_sel - i) * plant.A();
    const Mat r2 = (design.T + design.E * c_sel - i) * plant.B();
    const Mat r3 = (design.E * c_sel - i) * plant.b_cols(design.actuators);
    double r = std::max(max_abs(r1), max_abs(r2));
    if (r3.size() > 0) r = std::max(r, max_abs(r3));
    return r;
}

int complete_redundancy(const PlantModel& plant, const Tolerances& tol) {
    const int n_y = plant.output_count();
    // Smallest cardinality from which every subset (at every cardinality up
    // to n_y) admits a complete observer.
    int min_ok = n_y + 1;
    for (int card = n_y; card >= 1; --card) {
        bool all_ok = true;
        for (const IndexSet& j : IndexSet::subsets_of_size(n_y, card)) {
            if (!complete_feasible(plant, j, tol)) {
                all_ok = false;
                break;
            }
        }
        if (!all_ok) break;
        min_ok = card;
    }
    if (min_ok > n_y) return 0;
    return (n_y - min_ok) / 2;
}

PartialRedundancy partial_redundancy(const PlantModel& plant, const Tolerances& tol,
                                     PartialPriority priority) {
    const int n_u = plant.input_count();
    const int n_y = plant.output_count();
    const int q1_cap = (n_u - 1) / 2; // 2 q1 < n_u
    const int q2_cap = (n_y - 1) / 2; // n_y - 2 q2 > 0

    auto achievable = [&](int q1, int q2) {
        return partial_feasible_all(plant, 2 * q1, n_y - 2 * q2, tol);
    };

    PartialRedundancy out;
    if (priority == PartialPriority::actuators_first) {
        for (int q1 = q1_cap; q1 >= 0; --q1) {
            if (achievable(q1, 0)) {
                out.q1 = q1;
                break;
            }
        }
        for (int q2 = q2_cap; q2 >= 1; --q2) {
            if (achievable(out.q1, q2)) {
                out.q2 = q2;
                break;
            }
        }
    } else {
        for (int q2 = q2_cap; q2 >= 0; --q2) {
            if (achievable(0, q2)) {
                out.q2 = q2;
                break;
            }
        }
        for (int q1 = q1_cap; q1 >= 1; --q1) {
            if (achievable(q1, out.q2)) {
                out.q1 = q1;
                break;
            }
        }
    }
    return out;
}

CompleteBank enumerate_complete_bank(const PlantModel& plant, int q, const Tolerances& tol,
                                     std::size_t cap) {
    const int n_y = plant.output_count();
    if (q < 1 || n_y - 2 * q < 1) {
        fail(ErrorCode::invalid_input, "complete bank needs q >= 1 and n_y - 2q >= 1");
    }
    const std::size_t total = binomial(n_y, n_y - q) + binomial(n_y, n_y - 2 * q);
    if (total > cap) {
        fail(ErrorCode::design_infeasible, "bank of " + std::to_string(total) +
                                               " designs exceeds cap of " + std::to_string(cap));
    }
    CompleteBank bank;
    bank.q = q;
    for (const IndexSet& j : IndexSet::subsets_of_size(n_y, n_y - q)) {
        bank.candidates.push_back(design_complete(plant, j, tol));
    }
    for (const IndexSet& s : IndexSet::subsets_of_size(n_y, n_y - 2 * q)) {
        bank.references.push_back(design_complete(plant, s, tol));
    }
    return bank;
}

PartialBank enumerate_partial_bank(const PlantModel& plant, int q1, int q2, const Tolerances& tol,
                                   std::size_t cap) {
    const int n_u = plant.input_count();
    const int n_y = plant.output_count();
    if (q1 < 1 || 2 * q1 >= n_u) {
        fail(ErrorCode::invalid_input, "partial bank needs 1 <= q1 with 2 q1 < input count");
    }
    if (q2 < 1 || n_y - 2 * q2 < 1) {
        fail(ErrorCode::invalid_input, "partial bank needs 1 <= q2 with n_y - 2 q2 >= 1");
    }
    const std::size_t total = binomial(n_u, q1) * binomial(n_y, n_y - q2) +
                              binomial(n_u, 2 * q1) * binomial(n_y, n_y - 2 * q2);
    if (total > cap) {
        fail(ErrorCode::design_infeasible, "bank of " + std::to_string(total) +
                                               " designs exceeds cap of " + std::to_string(cap));
    }
    PartialBank bank;
    bank.q1 = q1;
    bank.q2 = q2;
    for (const IndexSet& ju : IndexSet::subsets_of_size(n_u, q1)) {
        for (const IndexSet& js : IndexSet::subsets_of_size(n_y, n_y - q2)) {
            bank.candidates.push_back(design_partial(plant, ju, js, tol));
        }
    }
    for (const IndexSet& su : IndexSet::subsets_of_size(n_u, 2 * q1)) {
        for (const IndexSet& ss : IndexSet::subsets_of_size(n_y, n_y - 2 * q2)) {
            bank.references.push_back(design_partial(plant, su, ss, tol));
        }
    }
    return bank;
}

} // namespace uiobank
