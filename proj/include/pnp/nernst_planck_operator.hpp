#pragma once

#include "pnp/grid.hpp"
#include "pnp/problem.hpp"

namespace pnp {

/// c(+1), c(-1) and the no-flux slopes c'(+1), c'(-1).
struct ConcentrationBoundary {
    double c_p1 = 0.0;
    double c_m1 = 0.0;
    double dc_p1 = 0.0;
    double dc_m1 = 0.0;

    // Negative boundary values are allowed mid-iteration and only reported.
    [[nodiscard]] bool negative() const noexcept { return c_p1 < 0.0 || c_m1 < 0.0; }
};

/// Boundary concentrations from the integrated zero-flux relation and the
/// total-concentration constraint; slopes from the no-flux condition using the
/// endpoint values of `dphi`.
[[nodiscard]] ConcentrationBoundary solve_concentration_boundary(const IonSpecies& species,
                                                                 const Grid<double>& grid,
                                                                 const VectorXd& c,
                                                                 const VectorXd& dphi, double chi1);

// Increments of the drift product c*phi' across each subinterval, scaled by
// `drift` (chi1 * z in the single-domain problem). Exact integral of (drift c phi')'.
[[nodiscard]] VectorXd drift_sources(const Grid<double>& grid, const VectorXd& c,
                                     const VectorXd& dphi, double drift);

[[nodiscard]] VectorXd concentration_interior(const IonSpecies& species, const Grid<double>& grid,
                                              const VectorXd& c, const VectorXd& dphi,
                                              const ConcentrationBoundary& bdry, double chi1);

[[nodiscard]] VectorXd concentration_gradient_interior(const IonSpecies& species,
                                                       const Grid<double>& grid, const VectorXd& c,
                                                       const VectorXd& dphi,
                                                       const ConcentrationBoundary& bdry,
                                                       double chi1);

struct NernstPlanckResult {
    ConcentrationBoundary boundary;
    VectorXd c;
};

/// The full NP map for one species.
[[nodiscard]] NernstPlanckResult apply_nernst_planck(const IonSpecies& species,
                                                     const Grid<double>& grid, const VectorXd& c,
                                                     const VectorXd& dphi, double chi1);

}  // namespace pnp
