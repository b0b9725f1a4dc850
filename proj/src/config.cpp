#include "pnp/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "pnp/errors.hpp"

namespace pnp {

using nlohmann::json;

namespace {

SingleDomainConfig single(double a1, double a2, double phi_minus, double phi_plus, double epsilon,
                          double eta, double chi1, double chi2, double omega) {
    SingleDomainConfig c;
    SinglePnpProblem& p = c.problem;
    p.species = {IonSpecies{-1, a1, 1.0}, IonSpecies{+1, a2, 1.0}};
    p.phi_minus = phi_minus;
    p.phi_plus = phi_plus;
    p.epsilon = epsilon;
    p.eta = eta;
    p.chi1 = chi1;
    p.chi2 = chi2;
    p.omega = omega;
    return c;
}

// Cases 2.x and 4.x list several eta values; eta = epsilon is the default.
CaseConfig single_preset(std::string_view name) {
    CaseConfig c;
    c.preset = std::string(name);
    c.mode = Mode::single_domain;
    if (name == "case1.1") c.single = single(1, 1, -1, 1, 0.25, 0.25, 1, 4, 0.7);
    else if (name == "case1.2") c.single = single(1, 1, -1, 1, 1.0 / 64, 1.0 / 64, 1, 64, 0.09);
    else if (name == "case2.1") c.single = single(1, 1, -1, 1, 0.25, 0.25, 1, 4, 0.7);
    else if (name == "case2.2") c.single = single(1, 1, -1, 1, 1.0 / 64, 1.0 / 64, 1, 64, 0.09);
    else if (name == "case3") c.single = single(2, 2, 1, -1, 1, 4.63e-5, 3.1, 125.4, 0.6);
    else if (name == "case4.1") c.single = single(1, 2, 1, 1, 0.25, 0.25, 1, 4, 0.6);
    else if (name == "case4.2") c.single = single(1, 2, 1, 1, 1.0 / 16, 1.0 / 16, 1, 16, 0.16);
    else throw ConfigError("unknown preset '" + std::string(name) + "'");
    return c;
}

const std::set<std::string> kSingleKeys{"preset", "chi1", "chi2", "epsilon", "eta", "phi_minus",
                                        "phi_plus", "a1", "a2", "D1", "D2", "omega", "tol",
                                        "max_iter", "points", "n"};
const std::set<std::string> kChannelKeys{"preset", "h", "v_app", "bath_steps", "c_bath",
                                         "bath_radius", "rho_scale", "schedule", "tol", "max_iter"};

std::size_t line_of(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

template <typename T>
T get(const json& j, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("field '" + key + "': " + e.what());
    }
}

std::size_t get_count(const json& j, const std::string& key) {
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
        throw ConfigError("field '" + key + "': must be a positive integer");
    }
    return v.get<std::size_t>();
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"case1.1", "case1.2", "case2.1", "case2.2", "case3", "case4.1", "case4.2", "kchannel"};
}

CaseConfig preset_config(std::string_view name) {
    if (name == "kchannel") {
        CaseConfig c;
        c.preset = "kchannel";
        c.mode = Mode::channel;
        return c;
    }
    return single_preset(name);
}

PointFamily parse_point_family(std::string_view name) {
    if (name == "uniform") return PointFamily::uniform;
    if (name == "chebyshev") return PointFamily::chebyshev;
    throw ConfigError("points must be 'uniform' or 'chebyshev', got '" + std::string(name) + "'");
}

std::string_view to_string(PointFamily family) noexcept {
    return family == PointFamily::uniform ? "uniform" : "chebyshev";
}

void CaseConfig::validate() const {
    if (mode == Mode::single_domain) {
        single.problem.validate();
        if (single.n < 2) throw ConfigError("invalid n: need at least 2 subintervals");
        return;
    }
    const ChannelOptions& g = channel.geometry;
    if (!(g.h > 0.0)) throw ConfigError("invalid h: must be positive");
    if (g.bath_steps < 1) throw ConfigError("invalid bath_steps: must be at least 1");
    if (!(g.c_bath > 0.0)) throw ConfigError("invalid c_bath: must be positive");
    if (!(g.bath_radius > 0.0)) throw ConfigError("invalid bath_radius: must be positive");
    if (!(g.rho_scale >= 0.0)) throw ConfigError("invalid rho_scale: must be nonnegative");
    if (!std::isfinite(g.v_app)) throw ConfigError("invalid v_app: must be finite");
    const ChannelSolveOptions& s = channel.solve;
    if (!(s.tol > 0.0)) throw ConfigError("invalid tol: must be positive");
    if (s.max_iter == 0) throw ConfigError("invalid max_iter: must be positive");
    if (s.schedule.empty()) throw ConfigError("invalid schedule: empty");
    for (std::size_t k = 0; k < s.schedule.size(); ++k) {
        const ContinuationStage& st = s.schedule[k];
        if (!(st.ratio > 0.0)) throw ConfigError("invalid schedule: ratios must be positive");
        if (!(st.omega > 0.0 && st.omega <= 1.0)) throw ConfigError("invalid schedule: omega must lie in (0, 1]");
        if (k > 0 && !(st.ratio > s.schedule[k - 1].ratio)) {
            throw ConfigError("invalid schedule: ratios must increase");
        }
    }
}

CaseConfig parse_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::ostringstream msg;
        msg << "config parse error at line " << line_of(text, e.byte) << ": " << e.what();
        throw ConfigError(msg.str());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (!j.contains("preset")) throw ConfigError("config needs a 'preset' key");

    CaseConfig c = preset_config(get<std::string>(j, "preset"));
    const std::set<std::string>& allowed = c.mode == Mode::single_domain ? kSingleKeys : kChannelKeys;
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw ConfigError("unknown key '" + key + "' for preset '" + c.preset + "'");
        }
    }

    if (c.mode == Mode::single_domain) {
        SinglePnpProblem& p = c.single.problem;
        auto num = [&](const char* key, double& field) {
            if (j.contains(key)) field = get<double>(j, key);
        };
        num("chi1", p.chi1);
        num("chi2", p.chi2);
        num("epsilon", p.epsilon);
        num("eta", p.eta);
        num("phi_minus", p.phi_minus);
        num("phi_plus", p.phi_plus);
        num("a1", p.species[0].a);
        num("a2", p.species[1].a);
        num("D1", p.species[0].D);
        num("D2", p.species[1].D);
        num("omega", p.omega);
        num("tol", p.tol);
        if (j.contains("max_iter")) p.max_iter = get_count(j, "max_iter");
        if (j.contains("points")) c.single.points = parse_point_family(get<std::string>(j, "points"));
        if (j.contains("n")) c.single.n = Eigen::Index(get_count(j, "n"));
    } else {
        ChannelOptions& g = c.channel.geometry;
        ChannelSolveOptions& s = c.channel.solve;
        auto num = [&](const char* key, double& field) {
            if (j.contains(key)) field = get<double>(j, key);
        };
        num("h", g.h);
        num("v_app", g.v_app);
        num("c_bath", g.c_bath);
        num("bath_radius", g.bath_radius);
        num("rho_scale", g.rho_scale);
        num("tol", s.tol);
        if (j.contains("bath_steps")) g.bath_steps = int(get_count(j, "bath_steps"));
        if (j.contains("max_iter")) s.max_iter = get_count(j, "max_iter");
        if (j.contains("schedule")) {
            const json& sch = j.at("schedule");
            if (!sch.is_array()) throw ConfigError("field 'schedule': must be an array");
            s.schedule.clear();
            for (const json& st : sch) {
                if (!st.is_object()) throw ConfigError("field 'schedule': entries must be objects");
                for (const auto& [key, value] : st.items()) {
                    if (key != "ratio" && key != "omega") {
                        throw ConfigError("unknown key '" + key + "' in schedule entry");
                    }
                }
                s.schedule.push_back({get<double>(st, "ratio"), get<double>(st, "omega")});
            }
        }
    }
    c.validate();
    return c;
}

CaseConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_config(const CaseConfig& c) {
    json j;
    j["preset"] = c.preset;
    if (c.mode == Mode::single_domain) {
        const SinglePnpProblem& p = c.single.problem;
        j["chi1"] = p.chi1;
        j["chi2"] = p.chi2;
        j["epsilon"] = p.epsilon;
        j["eta"] = p.eta;
        j["phi_minus"] = p.phi_minus;
        j["phi_plus"] = p.phi_plus;
        j["a1"] = p.species[0].a;
        j["a2"] = p.species[1].a;
        j["D1"] = p.species[0].D;
        j["D2"] = p.species[1].D;
        j["omega"] = p.omega;
        j["tol"] = p.tol;
        j["max_iter"] = p.max_iter;
        j["points"] = std::string(to_string(c.single.points));
        j["n"] = c.single.n;
    } else {
        const ChannelOptions& g = c.channel.geometry;
        j["h"] = g.h;
        j["v_app"] = g.v_app;
        j["bath_steps"] = g.bath_steps;
        j["c_bath"] = g.c_bath;
        j["bath_radius"] = g.bath_radius;
        j["rho_scale"] = g.rho_scale;
        j["tol"] = c.channel.solve.tol;
        j["max_iter"] = c.channel.solve.max_iter;
        json sch = json::array();
        for (const ContinuationStage& st : c.channel.solve.schedule) {
            sch.push_back({{"ratio", st.ratio}, {"omega", st.omega}});
        }
        j["schedule"] = sch;
    }
    return j.dump(2);
}

bool operator==(const CaseConfig& a, const CaseConfig& b) {
    if (a.preset != b.preset || a.mode != b.mode) return false;
    if (a.mode == Mode::single_domain) {
        const SinglePnpProblem& p = a.single.problem;
        const SinglePnpProblem& q = b.single.problem;
        for (std::size_t i = 0; i < 2; ++i) {
            if (p.species[i].z != q.species[i].z || p.species[i].a != q.species[i].a ||
                p.species[i].D != q.species[i].D) {
                return false;
            }
        }
        return p.chi1 == q.chi1 && p.chi2 == q.chi2 && p.epsilon == q.epsilon && p.eta == q.eta &&
               p.phi_minus == q.phi_minus && p.phi_plus == q.phi_plus && p.omega == q.omega &&
               p.tol == q.tol && p.max_iter == q.max_iter && a.single.points == b.single.points &&
               a.single.n == b.single.n;
    }
    const ChannelOptions& g = a.channel.geometry;
    const ChannelOptions& h = b.channel.geometry;
    if (a.channel.solve.schedule.size() != b.channel.solve.schedule.size()) return false;
    for (std::size_t k = 0; k < a.channel.solve.schedule.size(); ++k) {
        if (a.channel.solve.schedule[k].ratio != b.channel.solve.schedule[k].ratio ||
            a.channel.solve.schedule[k].omega != b.channel.solve.schedule[k].omega) {
            return false;
        }
    }
    return g.h == h.h && g.v_app == h.v_app && g.bath_steps == h.bath_steps &&
           g.c_bath == h.c_bath && g.bath_radius == h.bath_radius && g.rho_scale == h.rho_scale &&
           a.channel.solve.tol == b.channel.solve.tol &&
           a.channel.solve.max_iter == b.channel.solve.max_iter;
}

}  // namespace pnp
