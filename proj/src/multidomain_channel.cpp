#include "pnp/multidomain_channel.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pnp/errors.hpp"
#include "pnp/greens_kernel.hpp"

namespace pnp {

double Subdomain::area() const noexcept { return std::numbers::pi * radius * radius; }

Eigen::Index ChannelGeometry::node_count() const {
    Eigen::Index n = 0;
    for (const Subdomain& s : subdomains) n += s.grid.size();
    return n;
}

namespace {

struct RegionRow {
    double left, right, epsilon, rho_n, D, mu;
};

// Channel subregions: buffer, nonpolar, central cavity, selectivity filter.
// rho_n is tabulated in e/nm^3 (rho_n A l reproduces the tabulated total
// charges) and converted to molar when the geometry is built.
constexpr std::array<RegionRow, 4> kChannelRegions{{
    {0.0, 0.2, 80.0, 80.0 / std::numbers::pi, 0.4, 16.0},
    {0.2, 1.3, 4.0, 0.0, 0.4, 16.0},
    {1.3, 2.3, 30.0, 2.0 / std::numbers::pi, 0.4, 16.0},
    {2.3, 3.5, 30.0, 5.0 / std::numbers::pi, 0.4, 16.0},
}};
constexpr double kChannelRadius = 0.5;
constexpr double kBathEpsilon = 80.0;
constexpr double kBathD = 1.5;
constexpr double kBathMu = 60.0;
constexpr double kDomainLeft = -5.0;
constexpr double kDomainRight = 8.5;

Subdomain make_subdomain(double left, double right, double radius, double epsilon, double rho_n,
                         double D, double mu, double h) {
    Subdomain s;
    s.left = left;
    s.right = right;
    s.radius = radius;
    s.epsilon = epsilon;
    s.rho_n = rho_n;
    s.D = {D, D};
    s.mu = {mu, mu};
    // The relative slack keeps exact multiples of h from rounding up.
    const auto n = Eigen::Index(std::ceil((right - left) / h * (1.0 - 1e-12)));
    s.grid = build_grid(PointFamily::uniform, std::max<Eigen::Index>(n, 2), left, right);
    return s;
}

void require_finite(const std::vector<VectorXd>& v, const char* stage, std::size_t step) {
    for (const VectorXd& x : v) {
        if (!x.allFinite()) throw DivergenceError(std::string("non-finite values in ") + stage, step);
    }
}

double squared_update(const std::vector<VectorXd>& next, const std::vector<VectorXd>& prev) {
    double s = 0.0;
    for (std::size_t m = 0; m < next.size(); ++m) s += (next[m] - prev[m]).squaredNorm();
    return s;
}

std::vector<VectorXd> relax(const std::vector<VectorXd>& target, const std::vector<VectorXd>& prev,
                            double omega) {
    std::vector<VectorXd> out(target.size());
    for (std::size_t m = 0; m < target.size(); ++m) out[m] = omega * target[m] + (1.0 - omega) * prev[m];
    return out;
}

double relative_jump(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace

ChannelGeometry build_channel(const ChannelOptions& options) {
    if (!(options.h > 0.0)) throw ConfigError("channel: h must be positive");
    if (options.bath_steps < 1) throw ConfigError("channel: bath_steps must be at least 1");
    if (!(options.c_bath > 0.0)) throw ConfigError("channel: c_bath must be positive");
    if (!(options.bath_radius > 0.0)) throw ConfigError("channel: bath_radius must be positive");

    ChannelGeometry geo;
    geo.bath_steps = options.bath_steps;
    geo.c_left = options.c_bath;
    geo.c_right = options.c_bath;
    geo.phi_left = 0.0;
    geo.phi_right = -options.v_app;

    const double mouth_left = kChannelRegions.front().left;
    const double mouth_right = kChannelRegions.back().right;
    const int steps = options.bath_steps;

    // Radius is linear from bath_radius at the outer end to the channel radius at the mouth.
    auto bath = [&](double outer, double mouth) {
        const double step = (mouth - outer) / steps;
        for (int k = 0; k < steps; ++k) {
            const double a = outer + k * step;
            const double b = (k + 1 == steps) ? mouth : outer + (k + 1) * step;
            const double t = (a + b) / 2.0;
            const double frac = (t - outer) / (mouth - outer);
            const double r = options.bath_radius + frac * (kChannelRadius - options.bath_radius);
            const double lo = std::min(a, b);
            const double hi = std::max(a, b);
            geo.subdomains.push_back(
                make_subdomain(lo, hi, r, kBathEpsilon, 0.0, kBathD, kBathMu, options.h));
        }
    };

    bath(kDomainLeft, mouth_left);
    for (const RegionRow& row : kChannelRegions) {
        geo.subdomains.push_back(make_subdomain(row.left, row.right, kChannelRadius, row.epsilon,
                                                options.rho_scale * row.rho_n / kMolarToPerCubicNm, row.D, row.mu,
                                                options.h));
    }
    // The exterior bath is generated from the outer end inwards, then reversed.
    const std::size_t before = geo.subdomains.size();
    bath(kDomainRight, mouth_right);
    std::reverse(geo.subdomains.begin() + std::ptrdiff_t(before), geo.subdomains.end());
    return geo;
}

std::vector<ContinuationStage> default_schedule() {
    return {{1.0, 0.9}, {10.0, 0.35}, {20.0, 0.22}, {40.0, 0.15}};
}

std::vector<ContinuationStage> reference_schedule() {
    return {{1.0, 0.9}, {10.0, 0.4}, {20.0, 0.26}, {40.0, 0.18}};
}

// ---------------------------------------------------------------------------
// Potential stage

struct ChannelPoisson::Impl {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

ChannelPoisson::~ChannelPoisson() = default;
ChannelPoisson::ChannelPoisson(ChannelPoisson&&) noexcept = default;
ChannelPoisson& ChannelPoisson::operator=(ChannelPoisson&&) noexcept = default;

// Unknowns per subdomain m: 4m + (phi_l, phi'_l, phi_r, phi'_r).
// Rows: two integrated relations per subdomain, then [phi] = 0 and
// [eps A phi'] = 0 per interface, then the two Dirichlet ends.
ChannelPoisson::ChannelPoisson(const ChannelGeometry& geometry)
    : geometry_(&geometry), impl_(std::make_unique<Impl>()) {
    const auto M = Eigen::Index(geometry.size());
    if (M == 0) throw ConfigError("channel: no subdomains");
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(std::size_t(12 * M));
    Eigen::Index row = 0;
    for (Eigen::Index m = 0; m < M; ++m) {
        const double L = geometry.subdomains[std::size_t(m)].length();
        const Eigen::Index o = 4 * m;
        t.emplace_back(row, o + 1, -1.0);
        t.emplace_back(row, o + 3, 1.0);
        ++row;
        t.emplace_back(row, o + 0, -1.0);
        t.emplace_back(row, o + 2, 1.0);
        t.emplace_back(row, o + 1, -L / 2.0);
        t.emplace_back(row, o + 3, -L / 2.0);
        ++row;
    }
    for (Eigen::Index m = 0; m + 1 < M; ++m) {
        const Subdomain& a = geometry.subdomains[std::size_t(m)];
        const Subdomain& b = geometry.subdomains[std::size_t(m + 1)];
        t.emplace_back(row, 4 * m + 2, 1.0);
        t.emplace_back(row, 4 * (m + 1) + 0, -1.0);
        ++row;
        t.emplace_back(row, 4 * m + 3, a.epsilon * a.area());
        t.emplace_back(row, 4 * (m + 1) + 1, -b.epsilon * b.area());
        ++row;
    }
    t.emplace_back(row++, 0, 1.0);
    t.emplace_back(row++, 4 * (M - 1) + 2, 1.0);

    Eigen::SparseMatrix<double> A(4 * M, 4 * M);
    A.setFromTriplets(t.begin(), t.end());
    impl_->lu.compute(A);
    if (impl_->lu.info() != Eigen::Success) {
        throw LinearSolveError("channel potential system is singular: " + impl_->lu.lastErrorMessage());
    }
}

std::vector<VectorXd> ChannelPoisson::sources(const std::array<std::vector<VectorXd>, 2>& c) const {
    const ChannelGeometry& geo = *geometry_;
    std::vector<VectorXd> out(geo.size());
    for (std::size_t m = 0; m < geo.size(); ++m) {
        const Subdomain& s = geo.subdomains[m];
        s.grid.check_conformal(c[0][m], "channel charge (c1)");
        s.grid.check_conformal(c[1][m], "channel charge (c2)");
        const VectorXd rho = geo.z[0] * c[0][m] + geo.z[1] * c[1][m];
        const Eigen::Index n = s.grid.intervals();
        const VectorXd mean = (rho.head(n) + rho.tail(n)) / 2.0 - VectorXd::Constant(n, s.rho_n);
        out[m] = (kPoissonCoefficient / s.epsilon) * mean.cwiseProduct(s.grid.h());
    }
    return out;
}

std::vector<SubdomainPotential> ChannelPoisson::boundary(const std::vector<VectorXd>& sources) const {
    const ChannelGeometry& geo = *geometry_;
    const auto M = Eigen::Index(geo.size());
    VectorXd rhs = VectorXd::Zero(4 * M);
    for (Eigen::Index m = 0; m < M; ++m) {
        const Subdomain& s = geo.subdomains[std::size_t(m)];
        const VectorXd& q = sources[std::size_t(m)];
        const double centre = (s.left + s.right) / 2.0;
        rhs[2 * m] = -q.sum();
        rhs[2 * m + 1] = (s.grid.mid().array() - centre).matrix().dot(q);
    }
    rhs[4 * M - 2] = geo.phi_left;
    rhs[4 * M - 1] = geo.phi_right;
    const VectorXd sol = impl_->lu.solve(rhs);
    if (!sol.allFinite()) throw LinearSolveError("channel potential system produced non-finite values");

    std::vector<SubdomainPotential> out(static_cast<std::size_t>(M));
    for (Eigen::Index m = 0; m < M; ++m) {
        out[std::size_t(m)] = {sol[4 * m], sol[4 * m + 1], sol[4 * m + 2], sol[4 * m + 3]};
    }
    return out;
}

namespace {

BracketData<double> potential_bracket(const Subdomain& s, const SubdomainPotential& b) {
    return {b.phi_l, b.phi_r, b.dphi_l, b.dphi_r, s.left, s.right};
}

}  // namespace

ChannelPoisson::Result ChannelPoisson::apply(const std::array<std::vector<VectorXd>, 2>& c) const {
    const ChannelGeometry& geo = *geometry_;
    const std::vector<VectorXd> q = sources(c);
    Result out;
    out.boundary = boundary(q);
    out.dphi.resize(geo.size());
    for (std::size_t m = 0; m < geo.size(); ++m) {
        const Subdomain& s = geo.subdomains[m];
        out.dphi[m] = represent_gradient(s.grid, potential_bracket(s, out.boundary[m]), q[m]);
    }
    return out;
}

std::vector<VectorXd> ChannelPoisson::potential(const std::array<std::vector<VectorXd>, 2>& c,
                                                const std::vector<SubdomainPotential>& bdry) const {
    const ChannelGeometry& geo = *geometry_;
    const std::vector<VectorXd> q = sources(c);
    std::vector<VectorXd> out(geo.size());
    for (std::size_t m = 0; m < geo.size(); ++m) {
        const Subdomain& s = geo.subdomains[m];
        out[m] = represent_value(s.grid, potential_bracket(s, bdry[m]), q[m]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Concentration stage

ChannelFluxSolution solve_channel_flux(const ChannelGeometry& geometry, int z, std::size_t species,
                                       double beta, const std::vector<VectorXd>& c,
                                       const std::vector<VectorXd>& dphi) {
    const std::size_t M = geometry.size();
    // Per subdomain: c_r - c_l = J R_m - z beta S0_m, with R_m = L / (A D).
    std::vector<double> drift(M);
    double total_drift = 0.0;
    double total_resistance = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        const Subdomain& s = geometry.subdomains[m];
        s.grid.check_conformal(c[m], "channel flux (c)");
        s.grid.check_conformal(dphi[m], "channel flux (dphi)");
        drift[m] = z * beta * trapezoid_sum(s.grid, c[m].cwiseProduct(dphi[m]));
        total_drift += drift[m];
        total_resistance += s.length() / (s.area() * s.D[species]);
    }

    ChannelFluxSolution out;
    out.flux = (geometry.c_right - geometry.c_left + total_drift) / total_resistance;
    out.interface_c.resize(M + 1);
    out.interface_c[0] = geometry.c_left;
    for (std::size_t m = 0; m < M; ++m) {
        const Subdomain& s = geometry.subdomains[m];
        out.interface_c[m + 1] =
            out.interface_c[m] + out.flux * s.length() / (s.area() * s.D[species]) - drift[m];
    }
    out.interface_c[M] = geometry.c_right;
    return out;
}

namespace {

BracketData<double> concentration_bracket(const Subdomain& s, std::size_t species, int z, double beta,
                                          double flux, double c_l, double c_r, double dphi_l,
                                          double dphi_r) {
    const double j = flux / (s.area() * s.D[species]);
    return {c_l, c_r, j - z * beta * c_l * dphi_l, j - z * beta * c_r * dphi_r, s.left, s.right};
}

}  // namespace

NpStageResult np_stage(const ChannelGeometry& geometry, std::size_t species, double beta,
                       const std::vector<VectorXd>& c, const std::vector<VectorXd>& dphi) {
    const int z = geometry.z[species];
    NpStageResult out;
    out.boundary = solve_channel_flux(geometry, z, species, beta, c, dphi);
    out.c.resize(geometry.size());
    for (std::size_t m = 0; m < geometry.size(); ++m) {
        const Subdomain& s = geometry.subdomains[m];
        VectorXd with_boundary = c[m];
        const Eigen::Index last = with_boundary.size() - 1;
        with_boundary[0] = out.boundary.interface_c[m];
        with_boundary[last] = out.boundary.interface_c[m + 1];
        const BracketData<double> b =
            concentration_bracket(s, species, z, beta, out.boundary.flux, with_boundary[0],
                                  with_boundary[last], dphi[m][0], dphi[m][last]);
        const Eigen::Index n = s.grid.intervals();
        const VectorXd p = with_boundary.cwiseProduct(dphi[m]);
        out.c[m] = represent_value(s.grid, b, VectorXd(z * beta * (p.tail(n) - p.head(n))));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gummel iteration with continuation

ChannelState initial_channel_state(const ChannelGeometry& geometry) {
    ChannelState s;
    const double left = geometry.subdomains.front().left;
    const double right = geometry.subdomains.back().right;
    const double slope = (geometry.phi_right - geometry.phi_left) / (right - left);
    const double c_slope = (geometry.c_right - geometry.c_left) / (right - left);
    for (const Subdomain& d : geometry.subdomains) {
        const Eigen::Index n = d.grid.size();
        s.phi.push_back((geometry.phi_left + slope * (d.grid.x().array() - left)).matrix());
        s.dphi.push_back(VectorXd::Constant(n, slope));
        for (std::size_t i = 0; i < 2; ++i) {
            s.c[i].push_back((geometry.c_left + c_slope * (d.grid.x().array() - left)).matrix());
            s.dc[i].push_back(VectorXd::Zero(n));
        }
    }
    return s;
}

namespace {

// mu/D in V^-1 to mV^-1.
double beta_of(double ratio) { return ratio * 1e-3; }

void reconstruct_channel(const ChannelGeometry& geometry, const ChannelPoisson& poisson, double beta,
                         ChannelSolution& sol) {
    ChannelState& s = sol.state;
    const ChannelPoisson::Result p = poisson.apply(s.c);
    s.dphi = p.dphi;
    s.phi = poisson.potential(s.c, p.boundary);
    for (std::size_t i = 0; i < 2; ++i) {
        const int z = geometry.z[i];
        const ChannelFluxSolution f = solve_channel_flux(geometry, z, i, beta, s.c[i], s.dphi);
        sol.flux[i] = f.flux;
        for (std::size_t m = 0; m < geometry.size(); ++m) {
            const Subdomain& d = geometry.subdomains[m];
            VectorXd& c = s.c[i][m];
            const Eigen::Index last = c.size() - 1;
            c[0] = f.interface_c[m];
            c[last] = f.interface_c[m + 1];
            const BracketData<double> b = concentration_bracket(d, i, z, beta, f.flux, c[0], c[last],
                                                                s.dphi[m][0], s.dphi[m][last]);
            const Eigen::Index n = d.grid.intervals();
            const VectorXd prod = c.cwiseProduct(s.dphi[m]);
            s.dc[i][m] = represent_gradient(d.grid, b, VectorXd(z * beta * (prod.tail(n) - prod.head(n))));
        }
    }
}

}  // namespace

ChannelSolution solve_channel(const ChannelGeometry& geometry, const ChannelSolveOptions& options) {
    if (options.schedule.empty()) throw ConfigError("channel: empty continuation schedule");
    for (std::size_t k = 0; k < options.schedule.size(); ++k) {
        const ContinuationStage& st = options.schedule[k];
        if (!(st.omega > 0.0 && st.omega <= 1.0)) throw ConfigError("channel: omega must lie in (0, 1]");
        if (!(st.ratio > 0.0)) throw ConfigError("channel: mu/D ratio must be positive");
        if (k > 0 && !(st.ratio > options.schedule[k - 1].ratio)) {
            throw ConfigError("channel: continuation ratios must increase");
        }
    }
    const auto start = std::chrono::steady_clock::now();
    const ChannelPoisson poisson(geometry);

    ChannelSolution sol;
    sol.state = initial_channel_state(geometry);
    ChannelState& s = sol.state;
    std::size_t total = 0;

    for (std::size_t k = 0; k < options.schedule.size(); ++k) {
        const ContinuationStage& st = options.schedule[k];
        const double beta = beta_of(st.ratio);
        StageReport rep;
        rep.stage = st;
        for (std::size_t n = 1; n <= options.max_iter; ++n) {
            const ChannelPoisson::Result p = poisson.apply(s.c);
            require_finite(p.dphi, "channel potential stage", n);
            std::vector<VectorXd> dphi = relax(p.dphi, s.dphi, st.omega);
            const double ud = std::sqrt(squared_update(dphi, s.dphi));
            s.dphi = std::move(dphi);

            double uc = 0.0;
            for (std::size_t i = 0; i < 2; ++i) {
                const NpStageResult np = np_stage(geometry, i, beta, s.c[i], s.dphi);
                require_finite(np.c, "channel concentration stage", n);
                std::vector<VectorXd> c = relax(np.c, s.c[i], st.omega);
                uc = std::max(uc, std::sqrt(squared_update(c, s.c[i])));
                for (const VectorXd& v : c) {
                    if (v.minCoeff() < 0.0) {
                        ++sol.report.positivity_violations;
                        break;
                    }
                }
                s.c[i] = std::move(c);
            }
            rep.iterations = n;
            rep.residual_dphi = ud;
            rep.residual_c = uc;
            if (ud < options.tol && uc < options.tol) {
                rep.converged = true;
                break;
            }
        }
        total += rep.iterations;
        sol.stages.push_back(rep);
        if (!rep.converged) {
            std::ostringstream msg;
            msg << "channel continuation stage " << k << " (mu/D = " << st.ratio
                << ") did not converge in " << options.max_iter << " iterations";
            throw NonConvergenceError(msg.str(), k, rep.residual_dphi, rep.residual_c);
        }
    }

    const double beta = beta_of(options.schedule.back().ratio);
    reconstruct_channel(geometry, poisson, beta, sol);
    sol.report.converged = true;
    sol.report.iterations = total;
    sol.report.residual_dphi = sol.stages.back().residual_dphi;
    sol.report.residual_c = sol.stages.back().residual_c;
    for (std::size_t i = 0; i < 2; ++i) {
        sol.species_current[i] = -kCurrentPicoAmp * geometry.z[i] * sol.flux[i];
    }
    sol.current = sol.species_current[0] + sol.species_current[1];
    sol.report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return sol;
}

// ---------------------------------------------------------------------------
// Diagnostics

VectorXd nodal_current(const ChannelGeometry& geometry, const ChannelState& state, double beta) {
    VectorXd out(geometry.node_count());
    Eigen::Index offset = 0;
    for (std::size_t m = 0; m < geometry.size(); ++m) {
        const Subdomain& d = geometry.subdomains[m];
        VectorXd seg = VectorXd::Zero(d.grid.size());
        for (std::size_t i = 0; i < 2; ++i) {
            const int z = geometry.z[i];
            const VectorXd flux =
                d.area() * d.D[i] *
                (state.dc[i][m] + z * beta * state.c[i][m].cwiseProduct(state.dphi[m]));
            seg -= kCurrentPicoAmp * z * flux;
        }
        out.segment(offset, seg.size()) = seg;
        offset += seg.size();
    }
    return out;
}

CurrentReport compute_current(const ChannelGeometry& geometry, const ChannelSolution& solution,
                              double tolerance) {
    CurrentReport r;
    r.current = solution.current;
    r.species_current = solution.species_current;
    const double beta = solution.stages.empty() ? beta_of(40.0) : beta_of(solution.stages.back().stage.ratio);
    const VectorXd nodal = nodal_current(geometry, solution.state, beta);

    // Near zero bias the current is a small difference of large diffusion and
    // drift terms, so the spread is measured against those terms.
    double scale = std::abs(r.current);
    for (std::size_t m = 0; m < geometry.size(); ++m) {
        const Subdomain& d = geometry.subdomains[m];
        for (std::size_t i = 0; i < 2; ++i) {
            const VectorXd& c = solution.state.c[i][m];
            const VectorXd terms = d.area() * d.D[i] *
                                   (solution.state.dc[i][m].cwiseAbs() +
                                    beta * c.cwiseProduct(solution.state.dphi[m]).cwiseAbs());
            scale = std::max(scale, kCurrentPicoAmp * terms.maxCoeff());
        }
    }
    const double spread = (nodal.array() - r.current).abs().maxCoeff();
    r.constancy = scale > 0.0 ? spread / scale : spread;
    if (!(r.constancy <= tolerance)) {
        std::ostringstream msg;
        msg << "channel current varies across nodes: relative spread " << r.constancy;
        throw ConsistencyError(msg.str());
    }
    return r;
}

double InterfaceResiduals::max() const noexcept {
    return std::max({phi, displacement, c[0], c[1], flux[0], flux[1]});
}

InterfaceResiduals interface_residuals(const ChannelGeometry& geometry, const ChannelState& state,
                                       double beta) {
    InterfaceResiduals r;
    for (std::size_t m = 0; m + 1 < geometry.size(); ++m) {
        const Subdomain& a = geometry.subdomains[m];
        const Subdomain& b = geometry.subdomains[m + 1];
        const Eigen::Index la = a.grid.size() - 1;
        r.phi = std::max(r.phi, relative_jump(state.phi[m][la], state.phi[m + 1][0]));
        r.displacement = std::max(r.displacement,
                                  relative_jump(a.epsilon * a.area() * state.dphi[m][la],
                                                b.epsilon * b.area() * state.dphi[m + 1][0]));
        for (std::size_t i = 0; i < 2; ++i) {
            const int z = geometry.z[i];
            r.c[i] = std::max(r.c[i], relative_jump(state.c[i][m][la], state.c[i][m + 1][0]));
            const double fa = a.area() * a.D[i] *
                              (state.dc[i][m][la] + z * beta * state.c[i][m][la] * state.dphi[m][la]);
            const double fb = b.area() * b.D[i] *
                              (state.dc[i][m + 1][0] + z * beta * state.c[i][m + 1][0] * state.dphi[m + 1][0]);
            r.flux[i] = std::max(r.flux[i], relative_jump(fa, fb));
        }
    }
    return r;
}

IvCurve iv_sweep(const ChannelOptions& base, const std::vector<double>& voltages,
                 const ChannelSolveOptions& options) {
    IvCurve curve;
    for (const double v : voltages) {
        ChannelOptions o = base;
        o.v_app = v;
        IvPoint pt;
        pt.v_app = v;
        try {
            const ChannelGeometry geo = build_channel(o);
            const ChannelSolution sol = solve_channel(geo, options);
            pt.converged = true;
            pt.current = sol.current;
            pt.species_current = sol.species_current;
        } catch (const NonConvergenceError&) {
        } catch (const DivergenceError&) {
        }
        curve.points.push_back(pt);
    }

    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const IvPoint& p : curve.points) {
        if (!p.converged) continue;
        n += 1;
        sx += p.v_app;
        sy += p.current;
        sxx += p.v_app * p.v_app;
        sxy += p.v_app * p.current;
        syy += p.current * p.current;
    }
    const double det = n * sxx - sx * sx;
    if (n >= 2 && det > 0.0) {
        curve.slope = (n * sxy - sx * sy) / det;
        curve.intercept = (sy - curve.slope * sx) / n;
        const double ss_tot = syy - sy * sy / n;
        double ss_res = 0.0;
        for (const IvPoint& p : curve.points) {
            if (!p.converged) continue;
            const double e = p.current - (curve.slope * p.v_app + curve.intercept);
            ss_res += e * e;
            curve.max_deviation = std::max(curve.max_deviation, std::abs(e));
        }
        curve.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    }
    return curve;
}

}  // namespace pnp
