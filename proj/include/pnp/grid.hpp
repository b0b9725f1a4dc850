#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

#include "pnp/errors.hpp"

namespace pnp {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using VectorXd = Vec<double>;

enum class PointFamily { uniform, chebyshev };

template <typename Scalar = double>
struct GridSpec {
    PointFamily family = PointFamily::uniform;
    Eigen::Index n = 2;  // number of subintervals
    Scalar left = Scalar(-1);
    Scalar right = Scalar(1);
};

/// Node set of a 1D interval together with the quantities every quadrature in
/// the solver needs: spacings, subinterval midpoints and composite trapezoid
/// weights. Immutable once built.
template <typename Scalar = double>
class Grid {
public:
    using Vector = Vec<Scalar>;

    Grid() = default;

    explicit Grid(const GridSpec<Scalar>& spec) : family_(spec.family) {
        if (spec.n < 2) {
            std::ostringstream msg;
            msg << "grid needs at least 2 subintervals, got " << spec.n;
            throw ConfigError(msg.str());
        }
        if (!(spec.left < spec.right) || !std::isfinite(double(spec.left)) ||
            !std::isfinite(double(spec.right))) {
            std::ostringstream msg;
            msg << "degenerate grid interval [" << spec.left << ", " << spec.right << "]";
            throw ConfigError(msg.str());
        }
        const Eigen::Index n = spec.n;
        const Scalar half_len = (spec.right - spec.left) / Scalar(2);
        const Scalar center = (spec.right + spec.left) / Scalar(2);

        x_.resize(n + 1);
        for (Eigen::Index k = 0; k <= n; ++k) {
            Scalar t;  // reference coordinate in [-1, 1]
            if (spec.family == PointFamily::uniform) {
                t = Scalar(2 * k - n) / Scalar(n);
            } else {
                // -cos(k pi / n) written as sin(pi (2k - n) / (2n)): exactly odd
                // about the midpoint and nested under doubling of n.
                t = std::sin(std::numbers::pi_v<Scalar> * Scalar(2 * k - n) / Scalar(2 * n));
            }
            x_[k] = center + half_len * t;
        }
        x_[0] = spec.left;
        x_[n] = spec.right;

        h_ = x_.tail(n) - x_.head(n);
        mid_ = (x_.tail(n) + x_.head(n)) / Scalar(2);

        w_.setZero(n + 1);
        w_.head(n) += h_ / Scalar(2);
        w_.tail(n) += h_ / Scalar(2);
    }

    [[nodiscard]] PointFamily family() const noexcept { return family_; }
    [[nodiscard]] Eigen::Index intervals() const noexcept { return h_.size(); }
    [[nodiscard]] Eigen::Index size() const noexcept { return x_.size(); }
    [[nodiscard]] Scalar left() const { return x_[0]; }
    [[nodiscard]] Scalar right() const { return x_[x_.size() - 1]; }
    [[nodiscard]] Scalar length() const { return right() - left(); }

    [[nodiscard]] const Vector& x() const noexcept { return x_; }
    [[nodiscard]] const Vector& h() const noexcept { return h_; }
    [[nodiscard]] const Vector& mid() const noexcept { return mid_; }
    [[nodiscard]] const Vector& w() const noexcept { return w_; }

    void check_conformal(const Vector& values, const char* what) const {
        if (values.size() != size()) {
            std::ostringstream msg;
            msg << what << ": expected " << size() << " node values, got " << values.size();
            throw DimensionError(msg.str());
        }
    }

private:
    PointFamily family_ = PointFamily::uniform;
    Vector x_;
    Vector h_;
    Vector mid_;
    Vector w_;
};

template <typename Scalar>
[[nodiscard]] Grid<Scalar> build_grid(const GridSpec<Scalar>& spec) {
    return Grid<Scalar>(spec);
}

[[nodiscard]] inline Grid<double> build_grid(PointFamily family, Eigen::Index n,
                                             double left = -1.0, double right = 1.0) {
    return Grid<double>(GridSpec<double>{family, n, left, right});
}

/// Composite trapezoid rule on the grid nodes.
template <typename Scalar, typename Derived>
[[nodiscard]] Scalar trapezoid_sum(const Grid<Scalar>& grid, const Eigen::MatrixBase<Derived>& values) {
    if (values.size() != grid.size()) {
        std::ostringstream msg;
        msg << "trapezoid_sum: expected " << grid.size() << " node values, got " << values.size();
        throw DimensionError(msg.str());
    }
    return grid.w().dot(values);
}

}  // namespace pnp
