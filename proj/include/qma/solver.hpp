#pragma once

// Solver for (Omega + d dJ phi)^n = A e^F Omega^n on the discrete torus with
// the normalizing constant A of the holomorphic-trivialization identity:
// linear spectral inversion at n = 1 and damped Newton over a continuity path
// F_t = t F at n = 2, each linear solve by flat-Laplacian-preconditioned
// GMRES, q-positivity monitored at every grid point.

#include "qma/grid.hpp"

#include <string>
#include <vector>

namespace qma {

struct SolveConfig {
    int continuity_steps = 10;
    double newton_tol = 1e-11;   // per-step target for the sup log-density residual
    double stall_accept = 1e-9;  // accept a step stalled at its discretization floor
    double residual_tol = 1e-8;  // success contract on max |density - A e^F|
    int max_newton_iters = 40;
    double damping = 1.0;
    double linear_tol = 1e-12;
    int max_linear_iters = 600;
    int positivity_halvings = 25;
};

struct SolveReport {
    ScalarField phi;
    double A = 1.0;
    double residual = 0.0;              // max |density - A e^F|
    double min_rel_eigenvalue = 0.0;    // q-positivity margin over the grid
    double path_min_eigenvalue = 0.0;   // worst margin along the accepted path
    std::vector<int> newton_iters;      // per continuity step
    std::vector<std::vector<double>> residual_history;  // per step, sup |log residual|
    double wall_seconds = 0.0;
    bool success = false;
    std::string message;
};

/// A = Int Omega^n ^ Omegabar^n / Int e^F Omega^n ^ Omegabar^n = 1 / mean(e^F).
double normalization_constant(const ScalarField& F);

/// n = 1: the density is affine in phi, so the equation is a Poisson problem
/// for the flat quaternionic Laplacian, inverted spectrally.
SolveReport solve_linear_n1(const ScalarField& F, const SolveConfig& cfg = {});

/// Directional derivative of log ma_density at phi in the direction psi:
/// n * (d dJ psi ^ Omega_phi^{n-1}) / Omega_phi^n.  Requires Omega_phi > 0.
ScalarField linearized_operator(const ScalarField& phi, const ScalarField& psi);

/// Inverse of the flat quaternionic Laplacian (1/4 Delta) on mean-zero fields.
ScalarField quaternionic_laplacian_inverse(const ScalarField& rhs);

SolveReport solve_qma(const ScalarField& F, const SolveConfig& cfg = {});

/// JSON document with the report scalars (phi itself goes to the field file).
std::string solve_report_json(const SolveReport& report, bool include_wall_time = false);

}  // namespace qma
