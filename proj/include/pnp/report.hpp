#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pnp/gummel_solver.hpp"
#include "pnp/multidomain_channel.hpp"

namespace pnp {

struct ProfileRow {
    std::size_t domain_index = 0;
    double x = 0.0, phi = 0.0, dphi = 0.0, c1 = 0.0, c2 = 0.0, dc1 = 0.0, dc2 = 0.0;
};

[[nodiscard]] std::vector<ProfileRow> profile_rows(const Grid<double>& grid, const FieldState& state);
[[nodiscard]] std::vector<ProfileRow> profile_rows(const ChannelGeometry& geometry,
                                                   const ChannelState& state);

inline constexpr const char* kProfileHeader = "domain_index,x,phi,dphi,c1,c2,dc1,dc2";

/// Shortest round-trip decimal form (at most 17 significant digits).
[[nodiscard]] std::string format_double(double v);

void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows);

/// Summary fields; absent optionals are written as null.
struct Summary {
    bool converged = false;
    std::size_t iterations = 0;
    double residual_dphi = 0.0;
    double residual_c = 0.0;
    std::array<double, 2> phi_bounds{};                 // phi at the left and right ends
    std::array<std::array<double, 2>, 2> c_bounds{};    // [species][left, right]
    std::optional<std::array<double, 2>> total_concentration_residuals;
    std::optional<std::vector<double>> rates;
    std::optional<double> current_pA;
    std::optional<std::array<double, 2>> current_per_species_pA;
    double wall_time_s = 0.0;
    std::vector<std::pair<std::string, std::string>> extra;  // (key, raw JSON)
};

[[nodiscard]] Summary summarize(const SinglePnpProblem& problem, const Grid<double>& grid,
                                const SolveResult& result);
[[nodiscard]] Summary summarize(const ChannelGeometry& geometry, const ChannelSolution& solution);

[[nodiscard]] std::string summary_json(const Summary& summary);

}  // namespace pnp
