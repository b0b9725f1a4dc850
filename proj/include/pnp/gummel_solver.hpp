#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <vector>

#include "pnp/grid.hpp"
#include "pnp/nernst_planck_operator.hpp"
#include "pnp/poisson_operator.hpp"
#include "pnp/problem.hpp"

namespace pnp {

/// Node values of the potential, its gradient, both concentrations and their gradients.
struct FieldState {
    VectorXd phi;
    VectorXd dphi;
    std::array<VectorXd, 2> c;
    std::array<VectorXd, 2> dc;
};

struct SolveReport {
    bool converged = false;
    bool diverged = false;  // a stage produced non-finite values; `iterations` is that step
    std::size_t iterations = 0;
    double residual_dphi = std::numeric_limits<double>::quiet_NaN();
    double residual_c = std::numeric_limits<double>::quiet_NaN();
    double wall_time = 0.0;  // seconds
    std::size_t positivity_violations = 0;  // (step, species) pairs with a negative node value
};

/// l2 norms of the relaxed updates of one Gummel step.
struct StepNorms {
    double dphi = 0.0;
    double c = 0.0;  // max over species
};

struct GummelStep {
    FieldState state;
    StepNorms norms;
    std::array<bool, 2> negative{false, false};
};

/// Constant initial guess: uniform slope between the formal boundary
/// potentials and half the total concentration of each species.
[[nodiscard]] FieldState initial_state(const SinglePnpProblem& problem, const Grid<double>& grid);

/// One relaxed Gummel step: potential stage, then both concentration stages
/// using the relaxed gradient. Throws DivergenceError on non-finite values.
[[nodiscard]] GummelStep gummel_step(const SinglePnpProblem& problem, const Grid<double>& grid,
                                     const FieldState& state, std::size_t step_index = 0);

struct SolveResult {
    FieldState state;
    SolveReport report;
    PotentialBoundary potential_boundary;
    std::array<ConcentrationBoundary, 2> concentration_boundary;
};

/// Iterates to the stopping tolerance, then reconstructs the potential and
/// concentration gradients. Running out of iterations or diverging is reported
/// through `report`, not thrown.
[[nodiscard]] SolveResult solve(const SinglePnpProblem& problem, const Grid<double>& grid);

/// Post-processing applied to a converged iterate: one unrelaxed potential
/// stage, fresh concentration boundary values written into the endpoints, and
/// gradients and potential from Green's representation.
[[nodiscard]] SolveResult reconstruct(const SinglePnpProblem& problem, const Grid<double>& grid,
                                      const FieldState& converged);

struct ConvergenceRow {
    Eigen::Index n = 0;
    bool converged = false;
    bool diverged = false;
    std::size_t iterations = 0;
    double error = std::numeric_limits<double>::quiet_NaN();  // ||Phi_2N - Phi_N|| on the coarse nodes
    double rate = std::numeric_limits<double>::quiet_NaN();   // against the previous row
};

struct ConvergenceReport {
    PointFamily family = PointFamily::uniform;
    std::vector<ConvergenceRow> rows;
};

/// Discrete norm used for grid-refinement errors: max over the coarse nodes.
[[nodiscard]] double refinement_norm(const VectorXd& diff);

/// Error between Phi_fine (2N intervals) and Phi_coarse (N intervals) on the
/// shared coarse nodes.
[[nodiscard]] double refinement_error(const VectorXd& phi_coarse, const VectorXd& phi_fine);

/// p = -log2(e_fine / e_coarse); NaN when either error is zero or undefined.
[[nodiscard]] double convergence_rate(double e_coarse, double e_fine);

/// Solves on every N of `n_list` (which must double each step) and on twice the
/// last N, reporting the refinement error and rate per row.
[[nodiscard]] ConvergenceReport convergence_study(const SinglePnpProblem& problem, PointFamily family,
                                                  const std::vector<Eigen::Index>& n_list);

}  // namespace pnp
