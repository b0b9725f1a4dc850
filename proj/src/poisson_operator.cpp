#include "pnp/poisson_operator.hpp"

#include <cmath>
#include <sstream>

#include "pnp/errors.hpp"
#include "pnp/greens_kernel.hpp"

namespace pnp {

Moments concentration_moments(const Grid<double>& grid, const VectorXd& c) {
    grid.check_conformal(c, "concentration_moments");
    return {trapezoid_sum(grid, c), trapezoid_sum(grid, grid.x().cwiseProduct(c))};
}

PotentialBoundary solve_potential_boundary(const SinglePnpProblem& problem,
                                           const std::array<Moments, 2>& moments) {
    const double eta = problem.eta;
    const double scale = problem.charge_scale();
    double za = 0.0;
    double zb = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        za += problem.species[i].z * moments[i].a_hat;
        zb += problem.species[i].z * moments[i].b;
    }

    // Unknowns (phi(1), phi'(1), phi(-1), phi'(-1)).
    Eigen::Matrix4d m;
    m << 1.0, eta, 0.0, 0.0,
         0.0, 0.0, 1.0, -eta,
         0.0, 1.0, 0.0, -1.0,
         1.0, -1.0, -1.0, -1.0;
    const Eigen::Vector4d rhs(problem.phi_plus, problem.phi_minus, -scale * za, scale * zb);

    const Eigen::PartialPivLU<Eigen::Matrix4d> lu(m);
    if (!(std::abs(lu.determinant()) > 1e-13)) {
        std::ostringstream msg;
        msg << "potential boundary system is singular for eta = " << eta;
        throw LinearSolveError(msg.str());
    }
    const Eigen::Vector4d sol = lu.solve(rhs);
    return {sol[0], sol[1], sol[2], sol[3]};
}

VectorXd charge_sources(const SinglePnpProblem& problem, const Grid<double>& grid, const VectorXd& c1,
                        const VectorXd& c2) {
    grid.check_conformal(c1, "charge_sources (c1)");
    grid.check_conformal(c2, "charge_sources (c2)");
    const VectorXd rho = problem.species[0].z * c1 + problem.species[1].z * c2;
    const Eigen::Index n = grid.intervals();
    return problem.charge_scale() *
           ((rho.head(n) + rho.tail(n)) / 2.0).cwiseProduct(grid.h());
}

namespace {

BracketData<double> potential_bracket(const Grid<double>& grid, const PotentialBoundary& b) {
    return {b.phi_m1, b.phi_p1, b.dphi_m1, b.dphi_p1, grid.left(), grid.right()};
}

}  // namespace

VectorXd potential_gradient_interior(const SinglePnpProblem& problem, const Grid<double>& grid,
                                     const VectorXd& c1, const VectorXd& c2,
                                     const PotentialBoundary& bdry) {
    return represent_gradient(grid, potential_bracket(grid, bdry),
                              charge_sources(problem, grid, c1, c2));
}

VectorXd potential_interior(const SinglePnpProblem& problem, const Grid<double>& grid,
                            const VectorXd& c1, const VectorXd& c2, const PotentialBoundary& bdry) {
    return represent_value(grid, potential_bracket(grid, bdry), charge_sources(problem, grid, c1, c2));
}

PoissonResult apply_poisson(const SinglePnpProblem& problem, const Grid<double>& grid,
                            const VectorXd& c1, const VectorXd& c2) {
    const std::array<Moments, 2> moments{concentration_moments(grid, c1),
                                         concentration_moments(grid, c2)};
    PoissonResult out;
    out.boundary = solve_potential_boundary(problem, moments);
    out.dphi = potential_gradient_interior(problem, grid, c1, c2, out.boundary);
    return out;
}

}  // namespace pnp
