// Command-line front end: solve, converge, channel, iv.
//
// Exit codes: 0 success, 2 configuration error, 3 non-convergence,
// 4 numerical-consistency failure.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "pnp/config.hpp"
#include "pnp/errors.hpp"
#include "pnp/gummel_solver.hpp"
#include "pnp/multidomain_channel.hpp"
#include "pnp/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitConsistency = 4;

pnp::CaseConfig resolve_config(const std::string& config_path, const std::string& preset) {
    if (config_path.empty()) {
        if (preset.empty()) throw pnp::ConfigError("either --config or --preset is required");
        pnp::CaseConfig c = pnp::preset_config(preset);
        c.validate();
        return c;
    }
    std::ifstream in(config_path);
    if (!in) throw pnp::ConfigError("cannot open config file '" + config_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (preset.empty()) return pnp::parse_config(buf.str());
    // --preset replaces the file's preset; the file's other keys still override it.
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error&) {
        return pnp::parse_config(buf.str());  // rethrows with line information
    }
    j["preset"] = preset;
    return pnp::parse_config(j.dump());
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw pnp::ConfigError("cannot write '" + path + "'");
    out << text << '\n';
}

void write_profile(const std::string& path, const std::vector<pnp::ProfileRow>& rows) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw pnp::ConfigError("cannot write '" + path + "'");
    pnp::write_profile_csv(out, rows);
}

int run_channel(const pnp::CaseConfig& cfg, const std::string& profile, const std::string& summary) {
    const pnp::ChannelGeometry geo = pnp::build_channel(cfg.channel.geometry);
    const pnp::ChannelSolution sol = pnp::solve_channel(geo, cfg.channel.solve);
    const pnp::CurrentReport cur = pnp::compute_current(geo, sol);
    pnp::Summary s = pnp::summarize(geo, sol);
    s.extra.emplace_back("current_constancy", nlohmann::json(cur.constancy).dump());
    write_profile(profile, pnp::profile_rows(geo, sol.state));
    write_text(summary, pnp::summary_json(s));
    return kExitOk;
}

int run_solve(const pnp::CaseConfig& cfg, const std::string& profile, const std::string& summary) {
    if (cfg.mode == pnp::Mode::channel) return run_channel(cfg, profile, summary);
    const pnp::Grid<double> grid = pnp::build_grid(cfg.single.points, cfg.single.n);
    const pnp::SolveResult res = pnp::solve(cfg.single.problem, grid);
    write_profile(profile, pnp::profile_rows(grid, res.state));
    write_text(summary, pnp::summary_json(pnp::summarize(cfg.single.problem, grid, res)));
    return res.report.converged ? kExitOk : kExitNonConvergence;
}

int run_converge(const pnp::CaseConfig& cfg, const std::vector<long>& grids, const std::string& summary) {
    if (cfg.mode != pnp::Mode::single_domain) {
        throw pnp::ConfigError("converge needs a single-domain preset");
    }
    std::vector<Eigen::Index> n_list(grids.begin(), grids.end());
    const pnp::ConvergenceReport rep = pnp::convergence_study(cfg.single.problem, cfg.single.points, n_list);

    std::cout << std::setw(6) << "N" << std::setw(8) << "iter" << std::setw(14) << "error"
              << std::setw(10) << "p" << '\n';
    pnp::Summary s;
    s.converged = true;
    std::vector<double> rates;
    nlohmann::json rows = nlohmann::json::array();
    for (const pnp::ConvergenceRow& r : rep.rows) {
        std::cout << std::setw(6) << r.n << std::setw(8)
                  << (r.converged ? std::to_string(r.iterations) : std::string("nc"))
                  << std::setw(14) << std::setprecision(3) << std::scientific << r.error
                  << std::setw(10) << std::fixed << std::setprecision(3) << r.rate << '\n';
        s.converged = s.converged && r.converged;
        s.iterations += r.iterations;
        rates.push_back(r.rate);
        rows.push_back({{"n", r.n},
                        {"converged", r.converged},
                        {"iterations", r.iterations},
                        {"error", std::isfinite(r.error) ? nlohmann::json(r.error) : nlohmann::json(nullptr)}});
    }
    s.rates = rates;
    s.residual_dphi = std::nan("");
    s.residual_c = std::nan("");
    s.phi_bounds = {std::nan(""), std::nan("")};
    s.c_bounds = {{{std::nan(""), std::nan("")}, {std::nan(""), std::nan("")}}};
    s.extra.emplace_back("rows", rows.dump());
    if (!summary.empty()) write_text(summary, pnp::summary_json(s));
    return s.converged ? kExitOk : kExitNonConvergence;
}

int run_iv(const pnp::CaseConfig& cfg, double vmin, double vmax, int steps, const std::string& output) {
    if (cfg.mode != pnp::Mode::channel) throw pnp::ConfigError("iv needs the kchannel preset");
    if (steps < 1) throw pnp::ConfigError("--steps must be at least 1");
    std::vector<double> volts;
    for (int k = 0; k < steps; ++k) {
        volts.push_back(steps == 1 ? vmin : vmin + (vmax - vmin) * k / (steps - 1));
    }
    const pnp::IvCurve curve = pnp::iv_sweep(cfg.channel.geometry, volts, cfg.channel.solve);

    std::ostringstream csv;
    csv << "v_app,converged,current,current_cl,current_k\n";
    bool all = true;
    for (const pnp::IvPoint& p : curve.points) {
        csv << pnp::format_double(p.v_app) << ',' << (p.converged ? 1 : 0) << ','
            << pnp::format_double(p.current) << ',' << pnp::format_double(p.species_current[0]) << ','
            << pnp::format_double(p.species_current[1]) << '\n';
        all = all && p.converged;
    }
    if (output.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(output);
        if (!out) throw pnp::ConfigError("cannot write '" + output + "'");
        out << csv.str();
    }
    std::cerr << "slope " << curve.slope << " pA/mV, R^2 " << curve.r_squared
              << ", max deviation " << curve.max_deviation << " pA\n";
    return all ? kExitOk : kExitNonConvergence;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Integral-equation solver for steady 1D Poisson-Nernst-Planck problems"};
    app.set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
    app.require_subcommand(1);

    std::string config_path, preset, profile, summary;
    auto* solve = app.add_subcommand("solve", "Solve one configuration");
    solve->add_option("--config", config_path, "JSON config with a preset and overrides");
    solve->add_option("--preset", preset, "Preset name");
    solve->add_option("--profile", profile, "Profile CSV output");
    solve->add_option("--summary", summary, "Summary JSON output (stdout if omitted)");

    std::string points = "chebyshev";
    std::vector<long> grids{50, 100, 200, 400};
    auto* converge = app.add_subcommand("converge", "Grid-refinement study");
    converge->add_option("--config", config_path, "JSON config with a preset and overrides");
    converge->add_option("--preset", preset, "Preset name");
    converge->add_option("--points", points, "uniform or chebyshev")
        ->check(CLI::IsMember({"uniform", "chebyshev"}));
    converge->add_option("--grids", grids, "Doubling list of subinterval counts")->delimiter(',');
    converge->add_option("--summary", summary, "Summary JSON output");

    std::string channel_preset = "kchannel";
    double h = 0.01, vapp = 100.0;
    auto* channel = app.add_subcommand("channel", "K+ channel at one applied voltage");
    channel->add_option("--config", config_path, "JSON config with a preset and overrides");
    channel->add_option("--preset", channel_preset, "Preset name");
    auto* h_opt = channel->add_option("--h", h, "Grid spacing, nm");
    auto* v_opt = channel->add_option("--vapp", vapp, "Applied voltage, mV");
    channel->add_option("--profile", profile, "Profile CSV output");
    channel->add_option("--summary", summary, "Summary JSON output (stdout if omitted)");

    double vmin = -100.0, vmax = 100.0;
    int steps = 21;
    std::string output;
    auto* iv = app.add_subcommand("iv", "Current-voltage sweep");
    iv->add_option("--config", config_path, "JSON config with a preset and overrides");
    iv->add_option("--preset", channel_preset, "Preset name");
    auto* iv_h = iv->add_option("--h", h, "Grid spacing, nm");
    iv->add_option("--vmin", vmin, "Lowest voltage, mV");
    iv->add_option("--vmax", vmax, "Highest voltage, mV");
    iv->add_option("--steps", steps, "Number of voltages");
    iv->add_option("--output", output, "CSV output (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        const bool channel_cmd = *channel || *iv;
        pnp::CaseConfig cfg = resolve_config(config_path, channel_cmd ? channel_preset : preset);
        if (*solve) return run_solve(cfg, profile, summary);
        if (*converge) {
            cfg.single.points = pnp::parse_point_family(points);
            return run_converge(cfg, grids, summary);
        }
        if (cfg.mode != pnp::Mode::channel) throw pnp::ConfigError("this command needs the kchannel preset");
        if (h_opt->count() > 0 || iv_h->count() > 0) cfg.channel.geometry.h = h;
        if (*channel) {
            if (v_opt->count() > 0) cfg.channel.geometry.v_app = vapp;
            cfg.validate();
            return run_channel(cfg, profile, summary);
        }
        cfg.validate();
        return run_iv(cfg, vmin, vmax, steps, output);
    } catch (const pnp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const pnp::NonConvergenceError& e) {
        std::cerr << "not converged: " << e.what() << '\n';
        return kExitNonConvergence;
    } catch (const pnp::DivergenceError& e) {
        std::cerr << "diverged: " << e.what() << '\n';
        return kExitNonConvergence;
    } catch (const pnp::Error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitConsistency;
    }
}
