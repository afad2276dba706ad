#pragma once

#include <Eigen/Dense>

#include "uiobank/errors.hpp"

namespace uiobank {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Numerical knobs shared by every rank / stability / design routine.
// All cutoffs are explicit so that feasibility verdicts are reproducible.
struct Tolerances {
    double rank_tol = 1e-9;     // relative singular-value cutoff for rank decisions
    double schur_margin = 1e-6; // spectral radius must stay <= 1 - schur_margin
    double residual_tol = 1e-8; // max-abs residual accepted for design equations
    double iter_tol = 1e-12;    // Riccati fixed-point stopping threshold
    int iter_max = 10000;       // Riccati / certificate iteration cap

    // Throws invalid_input unless all knobs are strictly positive and
    // schur_margin < 1.
    void validate() const;
};

bool all_finite(const Mat& m);
double max_abs(const Mat& m);

// Numerical rank: number of singular values above rank_tol times the largest
// singular value. Deterministic for a given matrix and tolerance.
Eigen::Index matrix_rank(const Mat& m, const Tolerances& tol = {});

// Moore-Penrose pseudoinverse via SVD with the same relative cutoff as
// matrix_rank. pinv of an all-zero matrix is the zero matrix transposed.
Mat pinv(const Mat& m, const Tolerances& tol = {});

// Largest eigenvalue magnitude of a square matrix.
double spectral_radius(const Mat& m);

// True iff spectral_radius(m) <= 1 - schur_margin.
bool is_schur(const Mat& m, const Tolerances& tol = {});

// PBH detectability test: every eigenvalue of `a` with magnitude
// >= 1 - schur_margin must keep [a - lambda I; c] at full column rank.
bool is_detectable(const Mat& a, const Mat& c, const Tolerances& tol = {});

// PBH stabilizability test, the dual of is_detectable.
bool is_stabilizable(const Mat& a, const Mat& b, const Tolerances& tol = {});

// State-feedback gain K with A + B K Schur, obtained by fixed-point
// iteration of the discrete Riccati equation with identity weights.
// Throws design_infeasible when (A, B) is not stabilizable and
// no_convergence when the iteration exceeds iter_max.
Mat stabilizing_state_gain(const Mat& a, const Mat& b, const Tolerances& tol = {});

// Observer gain K1 with A1 - K1 C Schur (dual of stabilizing_state_gain).
// Throws design_infeasible when (C, A1) is not detectable.
Mat stabilizing_observer_gain(const Mat& a1, const Mat& c, const Tolerances& tol = {});

// Solves the discrete Lyapunov equation X = M' X M + Q for square M.
Mat dlyap(const Mat& m, const Mat& q);

// Eigenvalues of a symmetric matrix, ascending. The input is symmetrized
// before solving to absorb round-off.
Vec symmetric_eigenvalues(const Mat& m);

} // namespace uiobank
