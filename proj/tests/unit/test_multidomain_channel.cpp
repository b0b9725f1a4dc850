#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pnp/multidomain_channel.hpp"

using pnp::PointFamily;
using pnp::VectorXd;

namespace {

pnp::Subdomain piece(double left, double right, double epsilon, Eigen::Index n, double radius = 1.0) {
    pnp::Subdomain s;
    s.left = left;
    s.right = right;
    s.radius = radius;
    s.epsilon = epsilon;
    s.D = {1.0, 1.0};
    s.grid = pnp::build_grid(PointFamily::uniform, n, left, right);
    return s;
}

std::array<std::vector<VectorXd>, 2> constant_c(const pnp::ChannelGeometry& geo, double value) {
    std::array<std::vector<VectorXd>, 2> c;
    for (const pnp::Subdomain& s : geo.subdomains) {
        for (auto& v : c) v.push_back(VectorXd::Constant(s.grid.size(), value));
    }
    return c;
}

struct Solved {
    pnp::ChannelGeometry geometry;
    pnp::ChannelSolution solution;
};

Solved solve_at(double v_app, double h = 0.01, int bath_steps = 20) {
    pnp::ChannelOptions o;
    o.v_app = v_app;
    o.h = h;
    o.bath_steps = bath_steps;
    Solved s{pnp::build_channel(o), {}};
    s.solution = pnp::solve_channel(s.geometry);
    return s;
}

}  // namespace

TEST_CASE("default channel geometry") {
    const pnp::ChannelGeometry geo = pnp::build_channel();
    REQUIRE(geo.size() == 44);
    CHECK(geo.subdomains.front().left == -5.0);
    CHECK(geo.subdomains.back().right == 8.5);
    for (std::size_t m = 0; m + 1 < geo.size(); ++m) {
        CHECK(geo.subdomains[m].right == geo.subdomains[m + 1].left);
    }
    for (const pnp::Subdomain& s : geo.subdomains) {
        CHECK(s.length() > 0.0);
        CHECK((s.grid.h().array() <= 0.01 * (1 + 1e-12)).all());
        CHECK(s.D[1] * 40.0 == doctest::Approx(s.mu[1]));
    }
    CHECK(geo.applied_voltage() == 100.0);
    CHECK(geo.c_left == 0.15);
    CHECK(geo.c_right == 0.15);
}

TEST_CASE("channel subregions and their fixed charge") {
    const pnp::ChannelGeometry geo = pnp::build_channel();
    const pnp::Subdomain* r = &geo.subdomains[20];
    const double left[] = {0.0, 0.2, 1.3, 2.3};
    const double eps[] = {80, 4, 30, 30};
    const double charge[] = {4.0, 0.0, 0.5, 1.5};  // elementary charges
    for (int k = 0; k < 4; ++k) {
        CHECK(r[k].left == left[k]);
        CHECK(r[k].radius == 0.5);
        CHECK(r[k].epsilon == eps[k]);
        const double q = r[k].rho_n * pnp::kMolarToPerCubicNm * r[k].area() * r[k].length();
        CHECK(q == doctest::Approx(charge[k]).epsilon(1e-12));
    }
    CHECK(r[0].area() == doctest::Approx(std::numbers::pi / 4));
}

TEST_CASE("bath radii follow the linear profile at step midpoints") {
    const pnp::ChannelGeometry geo = pnp::build_channel();
    const pnp::Subdomain& outer = geo.subdomains.front();
    const double mid = (outer.left + outer.right) / 2;
    CHECK(outer.radius == doctest::Approx(5.5 + (mid + 5.0) / 5.0 * (0.5 - 5.5)));
    for (std::size_t m = 1; m < 20; ++m) CHECK(geo.subdomains[m].radius < geo.subdomains[m - 1].radius);
    for (std::size_t m = 25; m < 44; ++m) CHECK(geo.subdomains[m].radius > geo.subdomains[m - 1].radius);
}

TEST_CASE("channel options are validated") {
    pnp::ChannelOptions o;
    o.h = 0.0;
    CHECK_THROWS_AS((void)pnp::build_channel(o), pnp::ConfigError);
    o = {};
    o.bath_steps = 0;
    CHECK_THROWS_AS((void)pnp::build_channel(o), pnp::ConfigError);
}

TEST_CASE("Laplace across uniform pieces is linear") {
    pnp::ChannelGeometry geo;
    geo.subdomains = {piece(0, 1, 10, 8), piece(1, 1.5, 10, 5), piece(1.5, 3, 10, 11)};
    geo.phi_left = 20.0;
    geo.phi_right = -40.0;
    const pnp::ChannelPoisson poisson(geo);
    const auto zero = constant_c(geo, 0.0);
    const pnp::ChannelPoisson::Result r = poisson.apply(zero);
    const std::vector<VectorXd> phi = poisson.potential(zero, r.boundary);
    for (std::size_t m = 0; m < geo.size(); ++m) {
        CHECK((r.dphi[m].array() + 20.0).abs().maxCoeff() <= 1e-10);
        const VectorXd exact = (20.0 - 20.0 * geo.subdomains[m].grid.x().array()).matrix();
        CHECK((phi[m] - exact).lpNorm<Eigen::Infinity>() <= 1e-10);
    }
}

TEST_CASE("two-layer capacitor keeps eps phi' continuous") {
    pnp::ChannelGeometry geo;
    geo.subdomains = {piece(0, 1, 2, 10), piece(1, 2, 1, 10)};
    geo.phi_left = 0.0;
    geo.phi_right = -90.0;
    const pnp::ChannelPoisson poisson(geo);
    const pnp::ChannelPoisson::Result r = poisson.apply(constant_c(geo, 0.0));
    CHECK((r.dphi[0].array() + 30.0).abs().maxCoeff() <= 1e-10);
    CHECK((r.dphi[1].array() + 60.0).abs().maxCoeff() <= 1e-10);
    CHECK(r.boundary[0].phi_r == doctest::Approx(-30.0));
    CHECK(r.boundary[1].phi_l == doctest::Approx(-30.0));
}

TEST_CASE("pure diffusion: constant and Fick profiles") {
    pnp::ChannelGeometry geo;
    geo.subdomains = {piece(0, 1, 80, 10, 2.0), piece(1, 3, 80, 20, 2.0)};
    const std::vector<VectorXd> no_field{VectorXd::Zero(11), VectorXd::Zero(21)};
    const auto c0 = constant_c(geo, 0.15);

    const pnp::NpStageResult flat = pnp::np_stage(geo, 1, 0.04, c0[1], no_field);
    CHECK(flat.boundary.flux == 0.0);
    for (const VectorXd& c : flat.c) CHECK((c.array() - 0.15).abs().maxCoeff() <= 1e-14);

    geo.c_right = 0.30;
    const pnp::NpStageResult fick = pnp::np_stage(geo, 1, 0.04, c0[1], no_field);
    const double A = geo.subdomains[0].area();
    CHECK(fick.boundary.flux == doctest::Approx(A * 1.0 * 0.15 / 3.0).epsilon(1e-13));
    for (std::size_t m = 0; m < 2; ++m) {
        const VectorXd exact = (0.15 + 0.05 * geo.subdomains[m].grid.x().array()).matrix();
        CHECK((fick.c[m] - exact).lpNorm<Eigen::Infinity>() <= 1e-14);
    }
}

TEST_CASE("full channel at 100 mV") {
    const Solved s = solve_at(100.0);
    const pnp::ChannelSolution& sol = s.solution;
    CHECK(sol.report.converged);
    REQUIRE(sol.stages.size() == 4);
    CHECK(sol.stages.back().stage.ratio == 40.0);
    CHECK(sol.current == doctest::Approx(19.39).epsilon(0.02));
    CHECK(sol.species_current[0] + sol.species_current[1] == doctest::Approx(sol.current).epsilon(1e-14));
    CHECK(sol.species_current[1] == doctest::Approx(19.1).epsilon(0.05));
    CHECK(std::abs(sol.species_current[0] - 0.3) <= 0.15);

    const pnp::CurrentReport cur = pnp::compute_current(s.geometry, sol);
    CHECK(cur.constancy <= 1e-10);
    const VectorXd nodal = pnp::nodal_current(s.geometry, sol.state, 0.04);
    CHECK(nodal.size() == s.geometry.node_count());
    CHECK((nodal.array() - sol.current).abs().maxCoeff() <= 1e-10 * std::abs(sol.current));

    CHECK(pnp::interface_residuals(s.geometry, sol.state, 0.04).max() <= 1e-10);
    for (std::size_t i = 0; i < 2; ++i) {
        for (const VectorXd& c : sol.state.c[i]) CHECK(c.minCoeff() >= 0.0);
    }
    CHECK(std::abs(sol.state.phi.front()[0]) <= 1e-12);
    CHECK(sol.state.phi.back()[sol.state.phi.back().size() - 1] == doctest::Approx(-100.0));
}

TEST_CASE("tampered gradients fail the current check") {
    Solved s = solve_at(100.0, 0.02);
    s.solution.state.dc[1][22][5] += 1e-3;
    CHECK_THROWS_AS((void)pnp::compute_current(s.geometry, s.solution), pnp::ConsistencyError);
}

TEST_CASE("current reverses with the applied voltage") {
    const double up = solve_at(50.0).solution.current;
    const double down = solve_at(-50.0).solution.current;
    CHECK(up > 0.0);
    CHECK(down < 0.0);
}

TEST_CASE("zero bias current vanishes under refinement") {
    const double coarse = solve_at(0.0, 0.005).solution.current;
    const double fine = solve_at(0.0, 0.0025).solution.current;
    CHECK(std::abs(fine) < 0.05);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("doubling the bath steps changes the current by under 1%") {
    const double a = solve_at(100.0, 0.01, 20).solution.current;
    const double b = solve_at(100.0, 0.01, 40).solution.current;
    CHECK(std::abs(b - a) < 0.01 * std::abs(a));
}

TEST_CASE("continuation schedule validation and failure reporting") {
    const pnp::ChannelGeometry geo = pnp::build_channel(pnp::ChannelOptions{20, 0.02});
    pnp::ChannelSolveOptions o;
    o.schedule = {{10.0, 0.5}, {1.0, 0.5}};
    CHECK_THROWS_AS((void)pnp::solve_channel(geo, o), pnp::ConfigError);
    o.schedule.clear();
    CHECK_THROWS_AS((void)pnp::solve_channel(geo, o), pnp::ConfigError);
    o.schedule = {{1.0, 0.9}, {40.0, 0.15}};
    o.max_iter = 5;
    try {
        (void)pnp::solve_channel(geo, o);
        FAIL("expected non-convergence");
    } catch (const pnp::NonConvergenceError& e) {
        CHECK(e.stage() == 0);
        CHECK(e.residual_dphi() > 0.0);
    }
}

TEST_CASE("current-voltage sweep") {
    const pnp::IvCurve iv = pnp::iv_sweep(pnp::ChannelOptions{20, 0.02}, {-50.0, 50.0, 100.0});
    REQUIRE(iv.points.size() == 3);
    for (const pnp::IvPoint& p : iv.points) CHECK(p.converged);
    CHECK(iv.points[0].current < 0.0);
    CHECK(iv.points[2].current > iv.points[1].current);
    CHECK(iv.slope > 0.0);
    CHECK(iv.r_squared > 0.99);
}
