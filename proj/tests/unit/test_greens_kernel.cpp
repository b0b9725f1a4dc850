#include <doctest.h>

#include <random>

#include "pnp/greens_kernel.hpp"

using pnp::PointFamily;
using pnp::VectorXd;

TEST_CASE("kernel values") {
    CHECK(pnp::g(0.3, 0.7) == doctest::Approx(-0.2));
    CHECK(pnp::g(0.4, 0.4) == 0.0);
    CHECK(pnp::g(-1.0, 1.0) == -1.0);
    CHECK(pnp::g_x(0.0, 1.0) == 0.5);
    CHECK(pnp::g_x(0.0, -1.0) == -0.5);
    CHECK(pnp::g_x(0.5, 0.25) == -0.5);
    CHECK(pnp::g_y(0.0, 1.0) == -0.5);
    CHECK(pnp::g_y(0.0, -1.0) == 0.5);
    CHECK(pnp::g_xy(0.0, 1.0) == 0.0);
    CHECK(pnp::g_xy(0.9, -1.0) == 0.0);
}

TEST_CASE("kernel symmetries") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int t = 0; t < 1000; ++t) {
        const double x = u(rng), y = u(rng);
        CHECK(pnp::g(x, y) == pnp::g(y, x));
        if (x != y) CHECK(pnp::g_x(x, y) + pnp::g_y(x, y) == 0.0);
    }
}

TEST_CASE("derivatives reject coincident points") {
    CHECK_THROWS_AS((void)pnp::g_x(0.2, 0.2), pnp::SingularEvaluationError);
    CHECK_THROWS_AS((void)pnp::g_y(-1.0, -1.0), pnp::SingularEvaluationError);
    CHECK_THROWS_AS((void)pnp::g_xy(1.0, 1.0), pnp::SingularEvaluationError);
}

TEST_CASE("bracket terms reproduce constants and linears") {
    const pnp::BracketData<double> one{1, 1, 0, 0, -1, 1};
    CHECK(pnp::bracket_value(one, 0.0) == doctest::Approx(1.0));
    CHECK(pnp::bracket_gradient(one, 0.0) == 0.0);
    const pnp::BracketData<double> lin{-1, 1, 1, 1, -1, 1};
    CHECK(pnp::bracket_value(lin, 0.5) == doctest::Approx(0.5));
    CHECK(pnp::bracket_gradient(lin, 0.5) == 1.0);
    const pnp::BracketData<double> slopes{0, 0, 2, 4, -1, 1};
    CHECK(pnp::bracket_gradient(slopes, -0.3) == 3.0);
}

TEST_CASE("bracket terms are interior only") {
    const pnp::BracketData<double> d{0, 0, 0, 0, -1, 1};
    CHECK_THROWS_AS((void)pnp::bracket_value(d, 1.0), pnp::DomainError);
    CHECK_THROWS_AS((void)pnp::bracket_gradient(d, -1.0), pnp::DomainError);
    CHECK_THROWS_AS((void)pnp::bracket_value(d, 1.5), pnp::DomainError);
}

TEST_CASE("bracket plus exact volume integral reproduces y^2") {
    // f = y^2: -int_{-1}^{1} g(x,y) f'' dy = int |x-y| dy = x^2 + 1.
    const pnp::BracketData<double> d{1, 1, -2, 2, -1, 1};
    for (double x : {-0.9, -0.25, 0.0, 0.6}) {
        CHECK(pnp::bracket_value(d, x) + (x * x + 1.0) == doctest::Approx(x * x).epsilon(1e-14));
    }
}

TEST_CASE("fast volume sums match direct sums") {
    std::mt19937 rng(11);
    std::normal_distribution<double> n01;
    for (PointFamily fam : {PointFamily::uniform, PointFamily::chebyshev}) {
        const auto g = pnp::build_grid(fam, 57, 0.3, 2.9);
        VectorXd q(g.intervals());
        for (Eigen::Index j = 0; j < q.size(); ++j) q[j] = n01(rng);
        const VectorXd fast = pnp::volume_sums(g, q);
        const VectorXd fast_grad = pnp::volume_gradient_sums(g, q);
        for (Eigen::Index k = 0; k < g.size(); ++k) {
            CHECK(std::abs(fast[k] - pnp::volume_sum_direct(g, g.x()[k], q)) <= 1e-13);
            CHECK(std::abs(fast_grad[k] - pnp::volume_gradient_sum_direct(g, g.x()[k], q)) <= 1e-13);
        }
    }
}

TEST_CASE("representation reproduces quadratics on any grid") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (PointFamily fam : {PointFamily::uniform, PointFamily::chebyshev}) {
        for (Eigen::Index n : {2, 9, 64, 257}) {
            const double lo = u(rng), hi = lo + 0.5 + std::abs(u(rng));
            const double a = u(rng), b = u(rng), c = u(rng);
            const auto g = pnp::build_grid(fam, n, lo, hi);
            auto f = [&](double x) { return a * x * x + b * x + c; };
            auto df = [&](double x) { return 2 * a * x + b; };
            const pnp::BracketData<double> d{f(lo), f(hi), df(lo), df(hi), lo, hi};
            const VectorXd src = -2 * a * g.h();
            const VectorXd val = pnp::represent_value(g, d, src);
            const VectorXd grad = pnp::represent_gradient(g, d, src);
            for (Eigen::Index k = 0; k < g.size(); ++k) {
                CHECK(std::abs(val[k] - f(g.x()[k])) <= 1e-12);
                CHECK(std::abs(grad[k] - df(g.x()[k])) <= 1e-12);
            }
        }
    }
}

TEST_CASE("volume sums check source length") {
    const auto g = pnp::build_grid(PointFamily::uniform, 8);
    CHECK_THROWS_AS((void)pnp::volume_sums(g, VectorXd::Zero(9)), pnp::DimensionError);
    CHECK_THROWS_AS((void)pnp::volume_gradient_sums(g, VectorXd::Zero(7)), pnp::DimensionError);
}
