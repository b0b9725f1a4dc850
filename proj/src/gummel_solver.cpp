#include "pnp/gummel_solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "pnp/errors.hpp"

namespace pnp {

namespace {

void require_finite(const VectorXd& v, const char* stage, std::size_t step) {
    if (!v.allFinite()) throw DivergenceError(std::string("non-finite values in ") + stage, step);
}

}  // namespace

FieldState initial_state(const SinglePnpProblem& problem, const Grid<double>& grid) {
    const Eigen::Index size = grid.size();
    FieldState s;
    s.phi = VectorXd::Zero(size);
    s.dphi = VectorXd::Constant(size, (problem.phi_plus - problem.phi_minus) / 2.0);
    for (std::size_t i = 0; i < 2; ++i) {
        s.c[i] = VectorXd::Constant(size, problem.species[i].a / 2.0);
        s.dc[i] = VectorXd::Zero(size);
    }
    return s;
}

GummelStep gummel_step(const SinglePnpProblem& problem, const Grid<double>& grid,
                       const FieldState& state, std::size_t step_index) {
    const double omega = problem.omega;
    GummelStep out;
    out.state = state;

    const PoissonResult p = apply_poisson(problem, grid, state.c[0], state.c[1]);
    require_finite(p.dphi, "potential stage", step_index);
    out.state.dphi = omega * p.dphi + (1.0 - omega) * state.dphi;
    out.norms.dphi = (out.state.dphi - state.dphi).norm();

    for (std::size_t i = 0; i < 2; ++i) {
        const NernstPlanckResult np =
            apply_nernst_planck(problem.species[i], grid, state.c[i], out.state.dphi, problem.chi1);
        require_finite(np.c, "concentration stage", step_index);
        out.state.c[i] = omega * np.c + (1.0 - omega) * state.c[i];
        out.negative[i] = np.c.minCoeff() < 0.0 || out.state.c[i].minCoeff() < 0.0;
        out.norms.c = std::max(out.norms.c, (out.state.c[i] - state.c[i]).norm());
    }
    return out;
}

SolveResult reconstruct(const SinglePnpProblem& problem, const Grid<double>& grid,
                        const FieldState& converged) {
    SolveResult out;
    FieldState& s = out.state;
    s = converged;

    const PoissonResult p = apply_poisson(problem, grid, s.c[0], s.c[1]);
    out.potential_boundary = p.boundary;
    s.dphi = p.dphi;
    s.phi = potential_interior(problem, grid, s.c[0], s.c[1], p.boundary);

    const Eigen::Index last = grid.size() - 1;
    for (std::size_t i = 0; i < 2; ++i) {
        const ConcentrationBoundary b =
            solve_concentration_boundary(problem.species[i], grid, s.c[i], s.dphi, problem.chi1);
        out.concentration_boundary[i] = b;
        s.c[i][0] = b.c_m1;
        s.c[i][last] = b.c_p1;
        s.dc[i] = concentration_gradient_interior(problem.species[i], grid, s.c[i], s.dphi, b,
                                                  problem.chi1);
    }
    return out;
}

SolveResult solve(const SinglePnpProblem& problem, const Grid<double>& grid) {
    problem.validate();
    const auto start = std::chrono::steady_clock::now();

    FieldState state = initial_state(problem, grid);
    SolveReport report;
    for (std::size_t n = 1; n <= problem.max_iter; ++n) {
        GummelStep step;
        try {
            step = gummel_step(problem, grid, state, n);
        } catch (const DivergenceError&) {
            report.iterations = n;
            report.diverged = true;
            break;
        }
        state = std::move(step.state);
        report.iterations = n;
        report.residual_dphi = step.norms.dphi;
        report.residual_c = step.norms.c;
        report.positivity_violations += std::size_t(step.negative[0]) + std::size_t(step.negative[1]);
        if (step.norms.dphi < problem.tol && step.norms.c < problem.tol) {
            report.converged = true;
            break;
        }
    }

    SolveResult out;
    if (report.converged) {
        out = reconstruct(problem, grid, state);
    } else {
        out.state = std::move(state);
    }
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.report = report;
    return out;
}

double refinement_norm(const VectorXd& diff) {
    return diff.lpNorm<Eigen::Infinity>();
}

double refinement_error(const VectorXd& phi_coarse, const VectorXd& phi_fine) {
    const Eigen::Index n = phi_coarse.size() - 1;
    if (phi_fine.size() != 2 * n + 1) {
        std::ostringstream msg;
        msg << "refinement_error: fine vector has " << phi_fine.size() << " nodes, expected "
            << 2 * n + 1;
        throw DimensionError(msg.str());
    }
    const VectorXd restricted = Eigen::Map<const VectorXd, 0, Eigen::InnerStride<2>>(
        phi_fine.data(), n + 1);
    return refinement_norm(restricted - phi_coarse);
}

double convergence_rate(double e_coarse, double e_fine) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !std::isfinite(e_coarse) || !std::isfinite(e_fine)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return -std::log2(e_fine / e_coarse);
}

ConvergenceReport convergence_study(const SinglePnpProblem& problem, PointFamily family,
                                    const std::vector<Eigen::Index>& n_list) {
    if (n_list.empty()) throw ConfigError("convergence_study: empty grid list");
    for (std::size_t r = 1; r < n_list.size(); ++r) {
        if (n_list[r] != 2 * n_list[r - 1]) {
            throw ConfigError("convergence_study: grid list must double at every step");
        }
    }

    std::vector<Eigen::Index> all = n_list;
    all.push_back(2 * n_list.back());
    std::vector<SolveResult> results;
    results.reserve(all.size());
    for (const Eigen::Index n : all) results.push_back(solve(problem, build_grid(family, n)));

    ConvergenceReport report;
    report.family = family;
    for (std::size_t r = 0; r < n_list.size(); ++r) {
        ConvergenceRow row;
        row.n = n_list[r];
        row.converged = results[r].report.converged;
        row.iterations = results[r].report.iterations;
        row.diverged = results[r].report.diverged;
        if (results[r].report.converged && results[r + 1].report.converged) {
            row.error = refinement_error(results[r].state.phi, results[r + 1].state.phi);
        }
        if (r > 0) row.rate = convergence_rate(report.rows[r - 1].error, row.error);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace pnp
