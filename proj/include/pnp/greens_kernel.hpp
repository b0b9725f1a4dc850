#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "pnp/errors.hpp"
#include "pnp/grid.hpp"

namespace pnp {

// Free-space Laplace Green's function on the line and its derivatives.
//
// The derivatives are only defined off the diagonal. Evaluation points in the
// solver are nodes and source points are endpoints or subinterval midpoints,
// so a coincidence is a programming error and is rejected with exact equality.

template <typename Scalar>
[[nodiscard]] constexpr Scalar g(Scalar x, Scalar y) noexcept {
    return -(x > y ? x - y : y - x) / Scalar(2);
}

namespace detail {
template <typename Scalar>
void require_distinct(Scalar x, Scalar y, const char* name) {
    if (x == y) {
        std::ostringstream msg;
        msg << name << " evaluated at coincident points x = y = " << x;
        throw SingularEvaluationError(msg.str());
    }
}
}  // namespace detail

template <typename Scalar>
[[nodiscard]] Scalar g_x(Scalar x, Scalar y) {
    detail::require_distinct(x, y, "g_x");
    return x > y ? Scalar(-0.5) : Scalar(0.5);
}

template <typename Scalar>
[[nodiscard]] Scalar g_y(Scalar x, Scalar y) {
    detail::require_distinct(x, y, "g_y");
    return x > y ? Scalar(0.5) : Scalar(-0.5);
}

template <typename Scalar>
[[nodiscard]] Scalar g_xy(Scalar x, Scalar y) {
    detail::require_distinct(x, y, "g_xy");
    return Scalar(0);
}

/// Endpoint data entering the boundary term of Green's representation
/// f(x) = [g f' - g_y f](left..right) - \int g f''.
template <typename Scalar = double>
struct BracketData {
    Scalar f_left = 0;
    Scalar f_right = 0;
    Scalar df_left = 0;
    Scalar df_right = 0;
    Scalar left = -1;
    Scalar right = 1;
};

namespace detail {
template <typename Scalar>
void require_interior(const BracketData<Scalar>& data, Scalar x) {
    if (!(x > data.left && x < data.right)) {
        std::ostringstream msg;
        msg << "bracket term evaluated at x = " << x << " outside the open interval ("
            << data.left << ", " << data.right << ")";
        throw DomainError(msg.str());
    }
}
}  // namespace detail

template <typename Scalar>
[[nodiscard]] Scalar bracket_value(const BracketData<Scalar>& d, Scalar x) {
    detail::require_interior(d, x);
    return g(x, d.right) * d.df_right - g(x, d.left) * d.df_left - g_y(x, d.right) * d.f_right +
           g_y(x, d.left) * d.f_left;
}

// g_xy vanishes off the diagonal, leaving the mean of the endpoint slopes.
template <typename Scalar>
[[nodiscard]] Scalar bracket_gradient(const BracketData<Scalar>& d, Scalar x) {
    detail::require_interior(d, x);
    return g_x(x, d.right) * d.df_right - g_x(x, d.left) * d.df_left -
           g_xy(x, d.right) * d.f_right + g_xy(x, d.left) * d.f_left;
}

/// Bracket value at every interior node; endpoint entries are left at zero.
template <typename Scalar>
[[nodiscard]] Vec<Scalar> bracket_values(const Grid<Scalar>& grid, const BracketData<Scalar>& d) {
    Vec<Scalar> out = Vec<Scalar>::Zero(grid.size());
    for (Eigen::Index k = 1; k + 1 < grid.size(); ++k) out[k] = bracket_value(d, grid.x()[k]);
    return out;
}

// ---------------------------------------------------------------------------
// Volume sums  sum_j K(x_k, mid_j) q_j  with K = g or g_x, where q_j is the
// (already integrated) source on subinterval j. These are the midpoint-rule
// discretizations of the volume term of Green's representation.

/// Direct O(N^2) evaluation at a single point.
template <typename Scalar, typename Derived>
[[nodiscard]] Scalar volume_sum_direct(const Grid<Scalar>& grid, Scalar x,
                                       const Eigen::MatrixBase<Derived>& q) {
    Scalar acc = 0;
    for (Eigen::Index j = 0; j < grid.intervals(); ++j) acc += g(x, grid.mid()[j]) * q[j];
    return acc;
}

template <typename Scalar, typename Derived>
[[nodiscard]] Scalar volume_gradient_sum_direct(const Grid<Scalar>& grid, Scalar x,
                                                const Eigen::MatrixBase<Derived>& q) {
    Scalar acc = 0;
    for (Eigen::Index j = 0; j < grid.intervals(); ++j) acc += g_x(x, grid.mid()[j]) * q[j];
    return acc;
}

/// Same sums at every node in O(N), by splitting |x_k - mid_j| at k (the
/// midpoints below node k are exactly j < k). Coordinates are shifted to the
/// interval center before accumulation.
template <typename Scalar, typename Derived>
[[nodiscard]] Vec<Scalar> volume_sums(const Grid<Scalar>& grid, const Eigen::MatrixBase<Derived>& q) {
    const Eigen::Index n = grid.intervals();
    if (q.size() != n) throw DimensionError("volume_sums: one source value per subinterval expected");
    const Scalar c = (grid.left() + grid.right()) / Scalar(2);
    Scalar total = 0;
    Scalar total_moment = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        total += q[j];
        total_moment += (grid.mid()[j] - c) * q[j];
    }
    Vec<Scalar> out(n + 1);
    Scalar below = 0;
    Scalar below_moment = 0;
    for (Eigen::Index k = 0; k <= n; ++k) {
        const Scalar xk = grid.x()[k] - c;
        out[k] = -((Scalar(2) * below - total) * xk - (Scalar(2) * below_moment - total_moment)) /
                 Scalar(2);
        if (k < n) {
            below += q[k];
            below_moment += (grid.mid()[k] - c) * q[k];
        }
    }
    return out;
}

template <typename Scalar, typename Derived>
[[nodiscard]] Vec<Scalar> volume_gradient_sums(const Grid<Scalar>& grid,
                                               const Eigen::MatrixBase<Derived>& q) {
    const Eigen::Index n = grid.intervals();
    if (q.size() != n) {
        throw DimensionError("volume_gradient_sums: one source value per subinterval expected");
    }
    const Scalar total = q.sum();
    Vec<Scalar> out(n + 1);
    Scalar below = 0;
    for (Eigen::Index k = 0; k <= n; ++k) {
        out[k] = total / Scalar(2) - below;
        if (k < n) below += q[k];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Green's representation on a grid. `sources[j]` approximates -\int f'' over
// subinterval j. Interior nodes get bracket + volume term; endpoint entries
// take the boundary data directly.

template <typename Scalar, typename Derived>
[[nodiscard]] Vec<Scalar> represent_value(const Grid<Scalar>& grid, const BracketData<Scalar>& d,
                                          const Eigen::MatrixBase<Derived>& sources) {
    Vec<Scalar> out = volume_sums(grid, sources);
    const Eigen::Index n = grid.intervals();
    for (Eigen::Index k = 1; k < n; ++k) out[k] += bracket_value(d, grid.x()[k]);
    out[0] = d.f_left;
    out[n] = d.f_right;
    return out;
}

template <typename Scalar, typename Derived>
[[nodiscard]] Vec<Scalar> represent_gradient(const Grid<Scalar>& grid, const BracketData<Scalar>& d,
                                             const Eigen::MatrixBase<Derived>& sources) {
    Vec<Scalar> out = volume_gradient_sums(grid, sources);
    const Eigen::Index n = grid.intervals();
    const Scalar mean_slope = (d.df_left + d.df_right) / Scalar(2);
    for (Eigen::Index k = 1; k < n; ++k) out[k] += mean_slope;
    out[0] = d.df_left;
    out[n] = d.df_right;
    return out;
}

}  // namespace pnp
