#pragma once

// Brute-force reference for the single-domain steady PNP problem.
//
// Deliberately shares nothing with the integral solver beyond Eigen: a
// second-order finite-difference discretization on a uniform grid, every
// linear system assembled densely and solved by LU, coupled by a damped
// fixed point on the concentrations.
//
//   eps phi'' = -chi2 (z1 c1 + z2 c2)          on (-1, 1)
//   phi(-1) - eta phi'(-1) = phi_minus,  phi(1) + eta phi'(1) = phi_plus
//   c_i' + chi1 z_i c_i phi' = 0,        int c_i = a_i

#include <Eigen/Dense>

#include <array>
#include <cstddef>

namespace oracle {

struct Species {
    int z = 0;
    double a = 0.0;
};

struct Problem {
    double chi1 = 1.0;
    double chi2 = 1.0;
    double epsilon = 1.0;
    double eta = 0.0;
    double phi_minus = 0.0;
    double phi_plus = 0.0;
    std::array<Species, 2> species{Species{-1, 1.0}, Species{+1, 1.0}};
};

struct Options {
    int intervals = 400;
    double damping = 0.5;  // weight of the new iterate
    double tol = 1e-12;    // max-norm change of c between sweeps
    std::size_t max_sweeps = 5000;  // a stalled fixed point fails fast
};

struct Solution {
    Eigen::VectorXd x;
    Eigen::VectorXd phi;
    std::array<Eigen::VectorXd, 2> c;
    std::size_t sweeps = 0;
    bool converged = false;
};

/// Potential for fixed concentrations: central differences inside, one-sided
/// second-order differences in the Robin rows.
Eigen::VectorXd solve_potential(const Problem& p, double h, const std::array<Eigen::VectorXd, 2>& c);

/// Zero-flux concentration for a fixed potential: the face fluxes
/// (c_{k+1} - c_k)/h + chi1 z (c_k + c_{k+1})/2 (phi_{k+1} - phi_k)/h vanish,
/// and the trapezoid integral equals a.
Eigen::VectorXd solve_concentration(const Problem& p, double h, const Species& s,
                                    const Eigen::VectorXd& phi);

Solution solve(const Problem& p, const Options& options = {});

}  // namespace oracle
