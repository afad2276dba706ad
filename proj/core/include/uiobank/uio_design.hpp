#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "uiobank/plant.hpp"

namespace uiobank {

// Observer decoupled from the whole actuation channel. The runtime form is
//   z+ = N z + L y^{J},   xhat = z + E y^{J},
// and the error obeys e+ = N e regardless of inputs and actuator attacks
// whenever the sensors in `sensors` are attack-free.
struct CompleteUioDesign {
    IndexSet sensors; // J_s
    Mat N, L, E;
};

// Observer decoupled only from the actuator columns in `actuators`; the
// remaining actuation enters as known input through T B:
//   z+ = N z + T B u + L y^{J},   xhat = z + E y^{J}.
struct PartialUioDesign {
    IndexSet actuators; // J_u, the suspected columns (may be empty: plain
                        // Luenberger degeneration with E = 0, T = I)
    IndexSet sensors;   // J_s
    Mat N, L, E, T;
};

// Rank + detectability feasibility test for a complete observer on the
// given sensor subset.
bool complete_feasible(const PlantModel& plant, const IndexSet& sensors, const Tolerances& tol = {});

// Constructs the complete observer. Parametrization: E = B pinv(C^J B),
// A1 = (I - E C^J) A, K1 the stabilizing observer gain for (A1, C^J),
// N = A1 - K1 C^J, L = K1 + N E. Throws design_infeasible naming the
// violated condition.
CompleteUioDesign design_complete(const PlantModel& plant, const IndexSet& sensors,
                                  const Tolerances& tol = {});

// Feasibility of the partial observer for the actuator/sensor subset pair.
bool partial_feasible(const PlantModel& plant, const IndexSet& actuators, const IndexSet& sensors,
                      const Tolerances& tol = {});

// Constructs the partial observer with E = b_J pinv(C^J b_J) and
// T = I - E C^J, which satisfies (T + E C^J - I) B = 0 identically.
PartialUioDesign design_partial(const PlantModel& plant, const IndexSet& actuators,
                                const IndexSet& sensors, const Tolerances& tol = {});

// Max-abs residual of the design equations; the invariant for every
// synthesized design is residual <= tol.residual_tol.
double design_residual(const PlantModel& plant, const CompleteUioDesign& design);
double design_residual(const PlantModel& plant, const PartialUioDesign& design);

// Largest q such that a complete observer is feasible for every sensor
// subset of every cardinality >= n_y - 2q (and n_y - 2q > 0); 0 if none.
int complete_redundancy(const PlantModel& plant, const Tolerances& tol = {});

enum class PartialPriority {
    actuators_first, // maximize q1, then q2 (default)
    sensors_first,   // maximize q2, then q1
};

struct PartialRedundancy {
    int q1 = 0; // tolerable attacked actuators
    int q2 = 0; // tolerable attacked sensors
};

// Largest (q1, q2) under the chosen priority such that a partial observer
// is feasible for every pair with card(J_u) <= 2 q1 < n_u and
// card(J_s) >= n_y - 2 q2 > 0. Exhaustive over all admissible cardinalities.
PartialRedundancy partial_redundancy(const PlantModel& plant, const Tolerances& tol = {},
                                     PartialPriority priority = PartialPriority::actuators_first);

inline constexpr std::size_t kDefaultBankCap = 10000;

// A synthesized complete bank: candidate observers on sensor subsets of
// cardinality n_y - q and reference observers on subsets of n_y - 2q.
struct CompleteBank {
    int q = 0;
    std::vector<CompleteUioDesign> candidates;
    std::vector<CompleteUioDesign> references;
    std::size_t size() const { return candidates.size() + references.size(); }
};

// A synthesized partial bank: candidates on (card q1, card n_y - q2) pairs,
// references on (card 2 q1, card n_y - 2 q2) pairs.
struct PartialBank {
    int q1 = 0;
    int q2 = 0;
    std::vector<PartialUioDesign> candidates;
    std::vector<PartialUioDesign> references;
    std::size_t size() const { return candidates.size() + references.size(); }
};

// Enumerate and design the full banks. Throws design_infeasible when any
// member is infeasible (naming the subset) or when the bank would exceed
// `cap` designs.
CompleteBank enumerate_complete_bank(const PlantModel& plant, int q, const Tolerances& tol = {},
                                     std::size_t cap = kDefaultBankCap);
PartialBank enumerate_partial_bank(const PlantModel& plant, int q1, int q2, const Tolerances& tol = {},
                                   std::size_t cap = kDefaultBankCap);

} // namespace uiobank
