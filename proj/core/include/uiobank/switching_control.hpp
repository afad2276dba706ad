#pragma once

#include <map>
#include <optional>

#include "uiobank/plant.hpp"

namespace uiobank {

// Static estimate-feedback gain: K with A + B K Schur.
Mat design_static_gain(const PlantModel& plant, const Tolerances& tol = {});

// Largest number of actuators whose loss keeps the plant stabilizable:
// the biggest q such that (A, b_J) is stabilizable for every subset J with
// card(J) >= input_count - q (0 < q < input_count); 0 if even one removal
// can break stabilizability.
int control_redundancy(const PlantModel& plant, const Tolerances& tol = {});

// Per-subset feedback gains for every admissible actuator configuration
// (card(J) >= input_count - bound). Individually Schur closed loops only;
// switched stability needs a separate certificate.
class GainTable {
public:
    GainTable(const PlantModel& plant, int bound, std::map<IndexSet, Mat> gains);

    int bound() const { return bound_; }
    int actuator_count() const { return static_cast<int>(b_.cols()); }
    bool admissible(const IndexSet& on_set) const;
    const Mat& gain(const IndexSet& on_set) const; // card(on_set) x n
    Mat closed_loop(const IndexSet& on_set) const; // A + b_J K_J
    const std::map<IndexSet, Mat>& gains() const { return gains_; }

private:
    Mat a_, b_;
    int bound_ = 0;
    std::map<IndexSet, Mat> gains_;
};

// Builds the table with one Riccati gain per admissible subset. Throws
// design_infeasible naming the first subset that cannot be stabilized.
GainTable design_switching_gains(const PlantModel& plant, int bound, const Tolerances& tol = {});

// Common quadratic Lyapunov certificate: P > 0 and, for every admissible
// closed loop M, M' P M - P <= -margin I. A valid certificate makes the
// switched loop exponentially stable under arbitrary admissible switching,
// hence ISS with respect to the estimation-error input.
struct LyapunovCertificate {
    Mat P;
    double margin = 0.0;
};

bool validate_certificate(const GainTable& table, const Mat& p, double margin,
                          const Tolerances& tol = {});

// Heuristic search: start from the average of the per-mode discrete
// Lyapunov solutions and iterate the trace-normalized averaging until the
// validator passes or iter_max is hit. Absence of a certificate is a
// regular outcome, not an error.
std::optional<LyapunovCertificate> search_certificate(const GainTable& table,
                                                      const Tolerances& tol = {});

// Supervisor decision for one step: keep the complement of the isolated
// actuators active, feed them the matching gain, command exactly zero on
// the switched-off channels.
struct SupervisorCommand {
    IndexSet active; // switched-on actuators
    Vec input;       // full-length input vector
};

// Throws unstabilizable_configuration when too many actuators are isolated
// for the table's bound.
SupervisorCommand supervisor_step(const IndexSet& isolated_actuators, const GainTable& table,
                                  const Vec& xhat);

} // namespace uiobank
