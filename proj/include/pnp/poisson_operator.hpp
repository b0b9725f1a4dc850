#pragma once

#include <array>

#include "pnp/grid.hpp"
#include "pnp/problem.hpp"

namespace pnp {

/// phi(+1), phi'(+1), phi(-1), phi'(-1).
struct PotentialBoundary {
    double phi_p1 = 0.0;
    double dphi_p1 = 0.0;
    double phi_m1 = 0.0;
    double dphi_m1 = 0.0;
};

/// Zeroth and first trapezoid moments of a concentration.
struct Moments {
    double a_hat = 0.0;
    double b = 0.0;
};

[[nodiscard]] Moments concentration_moments(const Grid<double>& grid, const VectorXd& c);

/// Solves the 4x4 system made of the two Robin conditions, the integrated
/// Gauss law and the first-moment relation. The moments are those of the
/// current concentration iterate, not the prescribed totals.
[[nodiscard]] PotentialBoundary solve_potential_boundary(const SinglePnpProblem& problem,
                                                         const std::array<Moments, 2>& moments);

// Trapezoid integral of the charge density z1 c1 + z2 c2 over each subinterval,
// scaled by chi2 / epsilon.
[[nodiscard]] VectorXd charge_sources(const SinglePnpProblem& problem, const Grid<double>& grid,
                                      const VectorXd& c1, const VectorXd& c2);

[[nodiscard]] VectorXd potential_gradient_interior(const SinglePnpProblem& problem,
                                                   const Grid<double>& grid, const VectorXd& c1,
                                                   const VectorXd& c2, const PotentialBoundary& bdry);

[[nodiscard]] VectorXd potential_interior(const SinglePnpProblem& problem, const Grid<double>& grid,
                                          const VectorXd& c1, const VectorXd& c2,
                                          const PotentialBoundary& bdry);

struct PoissonResult {
    PotentialBoundary boundary;
    VectorXd dphi;
};

/// The full P map: moments, boundary solve, interior gradient.
[[nodiscard]] PoissonResult apply_poisson(const SinglePnpProblem& problem, const Grid<double>& grid,
                                          const VectorXd& c1, const VectorXd& c2);

}  // namespace pnp
