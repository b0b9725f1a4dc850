#pragma once

#include <array>
#include <cstddef>

namespace pnp {

// Nondimensional ion species: valence, total concentration and diffusion coefficient.
struct IonSpecies {
    int z = 0;
    double a = 0.0;
    double D = 1.0;
};

/// Single-domain steady PNP problem on [-1, 1] with Robin conditions for the
/// potential, no-flux conditions for the ions and prescribed total
/// concentrations.
struct SinglePnpProblem {
    double chi1 = 1.0;       // electric-to-thermal energy ratio
    double chi2 = 1.0;       // inverse squared scaled Debye length
    double epsilon = 1.0;    // permittivity
    double eta = 0.0;        // capacitance parameter; 0 gives Dirichlet data
    double phi_minus = 0.0;  // formal potential at x = -1
    double phi_plus = 0.0;   // formal potential at x = +1
    std::array<IonSpecies, 2> species{IonSpecies{-1, 1.0, 1.0}, IonSpecies{+1, 1.0, 1.0}};
    double omega = 1.0;  // Gummel relaxation
    double tol = 1e-6;
    std::size_t max_iter = 50000;

    // Throws ConfigError naming the offending field.
    void validate() const;

    [[nodiscard]] double charge_scale() const noexcept { return chi2 / epsilon; }
};

}  // namespace pnp
