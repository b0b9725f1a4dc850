#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "pnp/grid.hpp"
#include "pnp/gummel_solver.hpp"

namespace pnp {

// Units throughout: nm, mV, molar; D in 1e-5 cm^2/s, mu in 1e-5 cm^2/(V s).

/// e N_A / eps0 in mV nm^-2 per molar, so phi'' = -k (z.c - rho_n) / eps_r.
inline constexpr double kPoissonCoefficient =
    1.602176634e-19 * 6.02214076e26 / 8.8541878128e-12 * 1e-15;
/// Number density of one molar, nm^-3.
inline constexpr double kMolarToPerCubicNm = 0.602214076;
/// pA carried by a unit particle flux A D c' measured in nm^2 * (1e-5 cm^2/s) * (molar/nm).
inline constexpr double kCurrentPicoAmp = 1.602176634e-19 * 6.02214076e8 * 1e12;

/// A constant-coefficient piece of the channel.
struct Subdomain {
    double left = 0.0;
    double right = 0.0;
    double radius = 0.0;
    double epsilon = 1.0;  // relative permittivity
    double rho_n = 0.0;    // fixed negative charge, molar
    std::array<double, 2> D{1.0, 1.0};
    std::array<double, 2> mu{40.0, 40.0};
    Grid<double> grid;

    [[nodiscard]] double length() const noexcept { return right - left; }
    [[nodiscard]] double area() const noexcept;
};

struct ChannelGeometry {
    std::vector<Subdomain> subdomains;
    std::array<int, 2> z{-1, 1};  // (Cl-, K+)
    double phi_left = 0.0;        // mV
    double phi_right = -100.0;    // mV
    double c_left = 0.15;         // molar, both species
    double c_right = 0.15;        // molar, both species
    int bath_steps = 20;

    [[nodiscard]] std::size_t size() const noexcept { return subdomains.size(); }
    [[nodiscard]] double applied_voltage() const noexcept { return phi_left - phi_right; }
    /// Total node count with shared interface nodes counted once per side.
    [[nodiscard]] Eigen::Index node_count() const;
};

struct ChannelOptions {
    int bath_steps = 20;
    double h = 0.01;           // target grid spacing, nm
    double v_app = 100.0;      // mV
    double c_bath = 0.15;      // molar
    double bath_radius = 5.5;  // nm at the outer ends
    double rho_scale = 1.0;    // multiplies every tabulated rho_n
};

/// Baths split into `bath_steps` equal pieces with midpoint-sampled radii, the
/// four channel subregions verbatim; every piece carries a uniform grid with
/// ceil(length / h) intervals.
[[nodiscard]] ChannelGeometry build_channel(const ChannelOptions& options = {});

/// Continuation stage: mu/D ratio in V^-1 and its relaxation parameter.
struct ContinuationStage {
    double ratio = 40.0;
    double omega = 0.18;
};

/// Ratios (1, 10, 20, 40) V^-1. The relaxation is a little below
/// reference_schedule(), which stalls at ratio 10 with this scheme.
[[nodiscard]] std::vector<ContinuationStage> default_schedule();

/// Reference relaxation: omega = (0.9, 0.4, 0.26, 0.18).
[[nodiscard]] std::vector<ContinuationStage> reference_schedule();

/// Boundary data of one subdomain: (phi, phi') at both ends.
struct SubdomainPotential {
    double phi_l = 0.0, dphi_l = 0.0, phi_r = 0.0, dphi_r = 0.0;
};

/// The global interface system for the potential. Its matrix depends only on
/// the geometry, so it is factored once.
class ChannelPoisson {
public:
    explicit ChannelPoisson(const ChannelGeometry& geometry);
    ~ChannelPoisson();
    ChannelPoisson(ChannelPoisson&&) noexcept;
    ChannelPoisson& operator=(ChannelPoisson&&) noexcept;

    struct Result {
        std::vector<SubdomainPotential> boundary;
        std::vector<VectorXd> dphi;
    };

    /// Sources per subdomain interval: k (z.c_avg - rho) h / eps_r = -int phi''.
    [[nodiscard]] std::vector<VectorXd> sources(const std::array<std::vector<VectorXd>, 2>& c) const;
    [[nodiscard]] std::vector<SubdomainPotential> boundary(const std::vector<VectorXd>& sources) const;
    [[nodiscard]] Result apply(const std::array<std::vector<VectorXd>, 2>& c) const;
    [[nodiscard]] std::vector<VectorXd> potential(const std::array<std::vector<VectorXd>, 2>& c,
                                                  const std::vector<SubdomainPotential>& bdry) const;

private:
    struct Impl;
    const ChannelGeometry* geometry_;
    std::unique_ptr<Impl> impl_;
};

/// Interface concentrations (M+1 shared values) and the constant flux
/// J = A D (c' + z beta c phi'), nm^2 * 1e-5 cm^2/s * molar/nm.
struct ChannelFluxSolution {
    std::vector<double> interface_c;
    double flux = 0.0;
};

/// beta = mu/D in mV^-1. Solves the per-subdomain integrated flux relations
/// with Dirichlet ends for the interface values and the flux.
[[nodiscard]] ChannelFluxSolution solve_channel_flux(const ChannelGeometry& geometry, int z,
                                                     std::size_t species, double beta,
                                                     const std::vector<VectorXd>& c,
                                                     const std::vector<VectorXd>& dphi);

struct NpStageResult {
    ChannelFluxSolution boundary;
    std::vector<VectorXd> c;
};

[[nodiscard]] NpStageResult np_stage(const ChannelGeometry& geometry, std::size_t species,
                                     double beta, const std::vector<VectorXd>& c,
                                     const std::vector<VectorXd>& dphi);

/// Per-subdomain field state; interface nodes are duplicated in both neighbours.
struct ChannelState {
    std::vector<VectorXd> phi;
    std::vector<VectorXd> dphi;
    std::array<std::vector<VectorXd>, 2> c;
    std::array<std::vector<VectorXd>, 2> dc;
};

[[nodiscard]] ChannelState initial_channel_state(const ChannelGeometry& geometry);

struct StageReport {
    ContinuationStage stage;
    bool converged = false;
    std::size_t iterations = 0;
    double residual_dphi = 0.0;
    double residual_c = 0.0;
};

struct ChannelSolution {
    ChannelState state;
    std::array<double, 2> flux{0.0, 0.0};
    double current = 0.0;                      // pA
    std::array<double, 2> species_current{};  // pA
    std::vector<StageReport> stages;
    SolveReport report;
};

struct ChannelSolveOptions {
    std::vector<ContinuationStage> schedule = default_schedule();
    double tol = 1e-6;
    std::size_t max_iter = 50000;
};

/// Relaxed Gummel iteration at every continuation stage, each seeded by the
/// previous one, followed by reconstruction of phi and the gradients.
/// Throws NonConvergenceError (carrying the stage index) when a stage fails.
[[nodiscard]] ChannelSolution solve_channel(const ChannelGeometry& geometry,
                                            const ChannelSolveOptions& options = {});

/// Node-wise current I_k = -sum z e A (D c' + z mu c phi'), pA, concatenated
/// over subdomains, at ratio `beta` (mV^-1).
[[nodiscard]] VectorXd nodal_current(const ChannelGeometry& geometry, const ChannelState& state,
                                     double beta);

struct CurrentReport {
    double current = 0.0;
    std::array<double, 2> species_current{};
    double constancy = 0.0;  // max |I_k - I| over the largest of |I| and the node-wise flux terms
};

/// Current from the flux constants, checked against the node-wise integrand.
/// Throws ConsistencyError when the relative spread exceeds `tolerance`.
[[nodiscard]] CurrentReport compute_current(const ChannelGeometry& geometry,
                                            const ChannelSolution& solution, double tolerance = 1e-10);

/// Relative jumps of phi, eps A phi', c_i and A-flux across every interface;
/// max over interfaces.
struct InterfaceResiduals {
    double phi = 0.0;
    double displacement = 0.0;
    std::array<double, 2> c{};
    std::array<double, 2> flux{};

    [[nodiscard]] double max() const noexcept;
};

[[nodiscard]] InterfaceResiduals interface_residuals(const ChannelGeometry& geometry,
                                                     const ChannelState& state, double beta);

struct IvPoint {
    double v_app = 0.0;
    bool converged = false;
    double current = 0.0;
    std::array<double, 2> species_current{};
};

struct IvCurve {
    std::vector<IvPoint> points;
    double slope = 0.0;       // least-squares pA/mV over converged points
    double intercept = 0.0;   // pA
    double r_squared = 0.0;
    double max_deviation = 0.0;  // pA from the fitted line
};

/// Independent full-schedule solve per voltage; failures are recorded, not thrown.
[[nodiscard]] IvCurve iv_sweep(const ChannelOptions& base, const std::vector<double>& voltages,
                               const ChannelSolveOptions& options = {});

}  // namespace pnp
