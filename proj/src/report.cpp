#include "pnp/report.hpp"

#include <charconv>
#include <cmath>
#include <json.hpp>

namespace pnp {

using nlohmann::json;

std::vector<ProfileRow> profile_rows(const Grid<double>& grid, const FieldState& s) {
    std::vector<ProfileRow> rows;
    rows.reserve(std::size_t(grid.size()));
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
        rows.push_back({0, grid.x()[k], s.phi[k], s.dphi[k], s.c[0][k], s.c[1][k], s.dc[0][k], s.dc[1][k]});
    }
    return rows;
}

std::vector<ProfileRow> profile_rows(const ChannelGeometry& geometry, const ChannelState& s) {
    std::vector<ProfileRow> rows;
    rows.reserve(std::size_t(geometry.node_count()));
    for (std::size_t m = 0; m < geometry.size(); ++m) {
        const Grid<double>& g = geometry.subdomains[m].grid;
        for (Eigen::Index k = 0; k < g.size(); ++k) {
            rows.push_back({m, g.x()[k], s.phi[m][k], s.dphi[m][k], s.c[0][m][k], s.c[1][m][k],
                            s.dc[0][m][k], s.dc[1][m][k]});
        }
    }
    return rows;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows) {
    out << kProfileHeader << '\n';
    for (const ProfileRow& r : rows) {
        out << r.domain_index << ',' << format_double(r.x) << ',' << format_double(r.phi) << ','
            << format_double(r.dphi) << ',' << format_double(r.c1) << ',' << format_double(r.c2) << ','
            << format_double(r.dc1) << ',' << format_double(r.dc2) << '\n';
    }
}

Summary summarize(const SinglePnpProblem& problem, const Grid<double>& grid, const SolveResult& result) {
    Summary s;
    const SolveReport& r = result.report;
    s.converged = r.converged;
    s.iterations = r.iterations;
    s.residual_dphi = r.residual_dphi;
    s.residual_c = r.residual_c;
    s.wall_time_s = r.wall_time;
    const FieldState& f = result.state;
    const Eigen::Index last = grid.size() - 1;
    s.phi_bounds = {f.phi[0], f.phi[last]};
    for (std::size_t i = 0; i < 2; ++i) s.c_bounds[i] = {f.c[i][0], f.c[i][last]};
    if (r.converged) {
        std::array<double, 2> res{};
        for (std::size_t i = 0; i < 2; ++i) {
            res[i] = trapezoid_sum(grid, f.c[i]) - problem.species[i].a;
        }
        s.total_concentration_residuals = res;
    }
    if (r.diverged) s.extra.emplace_back("diverged", "true");
    s.extra.emplace_back("positivity_violations", std::to_string(r.positivity_violations));
    return s;
}

Summary summarize(const ChannelGeometry& geometry, const ChannelSolution& sol) {
    Summary s;
    const SolveReport& r = sol.report;
    s.converged = r.converged;
    s.iterations = r.iterations;
    s.residual_dphi = r.residual_dphi;
    s.residual_c = r.residual_c;
    s.wall_time_s = r.wall_time;
    const std::size_t M = geometry.size();
    s.phi_bounds = {sol.state.phi.front()[0], sol.state.phi.back()[sol.state.phi.back().size() - 1]};
    for (std::size_t i = 0; i < 2; ++i) {
        const VectorXd& right = sol.state.c[i][M - 1];
        s.c_bounds[i] = {sol.state.c[i][0][0], right[right.size() - 1]};
    }
    s.current_pA = sol.current;
    s.current_per_species_pA = sol.species_current;
    json stages = json::array();
    for (const StageReport& st : sol.stages) {
        stages.push_back({{"ratio", st.stage.ratio}, {"omega", st.stage.omega},
                          {"iterations", st.iterations}, {"converged", st.converged}});
    }
    s.extra.emplace_back("stages", stages.dump());
    return s;
}

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string summary_json(const Summary& s) {
    json j;
    j["converged"] = s.converged;
    j["iterations"] = s.iterations;
    j["residual_dphi"] = number_or_null(s.residual_dphi);
    j["residual_c"] = number_or_null(s.residual_c);
    j["phi_bounds"] = {number_or_null(s.phi_bounds[0]), number_or_null(s.phi_bounds[1])};
    j["c_bounds"] = json::array();
    for (const auto& b : s.c_bounds) j["c_bounds"].push_back({number_or_null(b[0]), number_or_null(b[1])});
    j["total_concentration_residuals"] =
        s.total_concentration_residuals
            ? json{(*s.total_concentration_residuals)[0], (*s.total_concentration_residuals)[1]}
            : json(nullptr);
    if (s.rates) {
        j["rates"] = json::array();
        for (double p : *s.rates) j["rates"].push_back(number_or_null(p));
    } else {
        j["rates"] = nullptr;
    }
    j["current_pA"] = s.current_pA ? json(*s.current_pA) : json(nullptr);
    j["current_per_species_pA"] =
        s.current_per_species_pA
            ? json{(*s.current_per_species_pA)[0], (*s.current_per_species_pA)[1]}
            : json(nullptr);
    j["wall_time_s"] = s.wall_time_s;
    for (const auto& [key, raw] : s.extra) j[key] = json::parse(raw);
    return j.dump(2);
}

}  // namespace pnp
