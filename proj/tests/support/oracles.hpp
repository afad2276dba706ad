#pragma once

// Independent reference implementations used only by tests. They must not
// share code paths with the library routines they check: eigenvalues come
// from the characteristic polynomial instead of a matrix eigensolver, and
// the redundancy indices from direct double loops over subsets.

#include <complex>
#include <optional>
#include <vector>

#include "uiobank/plant.hpp"
#include "uiobank/uio_design.hpp"

namespace uiobank::oracle {

// Characteristic polynomial coefficients of det(lambda I - M) via the
// Faddeev-LeVerrier recursion: c[0] = 1 leading coefficient.
std::vector<double> characteristic_polynomial(const Mat& m);

// All polynomial roots by Durand-Kerner iteration.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs);

std::vector<std::complex<double>> eigenvalues_by_charpoly(const Mat& m);
double spectral_radius_by_charpoly(const Mat& m);

// Direct double-loop reimplementations of the redundancy indices, calling
// only the rank / detectability / stabilizability primitives.
int brute_complete_redundancy(const PlantModel& plant, const Tolerances& tol = {});
PartialRedundancy brute_partial_redundancy(const PlantModel& plant, const Tolerances& tol = {},
                                           PartialPriority priority = PartialPriority::actuators_first);
int brute_control_redundancy(const PlantModel& plant, const Tolerances& tol = {});

// Seeded random plants with valid invariants (rejection sampling).
PlantModel random_plant(std::uint64_t seed, int n, int inputs, int outputs);

// Random plant admitting a complete bank (q >= 1) or a partial bank
// (q1, q2 >= 1); nullopt when the attempt budget runs out.
std::optional<PlantModel> random_complete_feasible_plant(std::uint64_t seed, int max_tries = 200);
std::optional<PlantModel> random_partial_feasible_plant(std::uint64_t seed, int max_tries = 200);

} // namespace uiobank::oracle
