#include "pnp/nernst_planck_operator.hpp"

#include "pnp/greens_kernel.hpp"

namespace pnp {

ConcentrationBoundary solve_concentration_boundary(const IonSpecies& species, const Grid<double>& grid,
                                                   const VectorXd& c, const VectorXd& dphi,
                                                   double chi1) {
    grid.check_conformal(c, "solve_concentration_boundary (c)");
    grid.check_conformal(dphi, "solve_concentration_boundary (dphi)");
    const VectorXd flux_product = c.cwiseProduct(dphi);
    const double s0 = trapezoid_sum(grid, flux_product);
    const double s1 = trapezoid_sum(grid, grid.x().cwiseProduct(flux_product));
    const double drift = chi1 * species.z;

    // Half-sum / half-difference of
    //   c(1) - c(-1) = -drift s0,   c(1) + c(-1) = a - drift s1.
    const double sum = species.a - drift * s1;
    const double diff = -drift * s0;
    ConcentrationBoundary b;
    b.c_p1 = (sum + diff) / 2.0;
    b.c_m1 = (sum - diff) / 2.0;
    b.dc_p1 = -drift * b.c_p1 * dphi[dphi.size() - 1];
    b.dc_m1 = -drift * b.c_m1 * dphi[0];
    return b;
}

VectorXd drift_sources(const Grid<double>& grid, const VectorXd& c, const VectorXd& dphi,
                       double drift) {
    grid.check_conformal(c, "drift_sources (c)");
    grid.check_conformal(dphi, "drift_sources (dphi)");
    const VectorXd p = c.cwiseProduct(dphi);
    const Eigen::Index n = grid.intervals();
    return drift * (p.tail(n) - p.head(n));
}

namespace {

BracketData<double> concentration_bracket(const Grid<double>& grid, const ConcentrationBoundary& b) {
    return {b.c_m1, b.c_p1, b.dc_m1, b.dc_p1, grid.left(), grid.right()};
}

}  // namespace

VectorXd concentration_interior(const IonSpecies& species, const Grid<double>& grid, const VectorXd& c,
                                const VectorXd& dphi, const ConcentrationBoundary& bdry,
                                double chi1) {
    return represent_value(grid, concentration_bracket(grid, bdry),
                           drift_sources(grid, c, dphi, chi1 * species.z));
}

VectorXd concentration_gradient_interior(const IonSpecies& species, const Grid<double>& grid,
                                         const VectorXd& c, const VectorXd& dphi,
                                         const ConcentrationBoundary& bdry, double chi1) {
    return represent_gradient(grid, concentration_bracket(grid, bdry),
                              drift_sources(grid, c, dphi, chi1 * species.z));
}

NernstPlanckResult apply_nernst_planck(const IonSpecies& species, const Grid<double>& grid,
                                       const VectorXd& c, const VectorXd& dphi, double chi1) {
    NernstPlanckResult out;
    out.boundary = solve_concentration_boundary(species, grid, c, dphi, chi1);
    VectorXd with_boundary = c;
    with_boundary[0] = out.boundary.c_m1;
    with_boundary[c.size() - 1] = out.boundary.c_p1;
    out.c = concentration_interior(species, grid, with_boundary, dphi, out.boundary, chi1);
    return out;
}

}  // namespace pnp
