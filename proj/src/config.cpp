#include "sqz/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "sqz/errors.hpp"

namespace sqz {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& ctx) {
    if (!j.is_object()) throw config_error(ctx + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw config_error(ctx + ": unknown key '" + it.key() + "'");
}

double get_num(const json& j, const char* key, double dflt,
               const std::string& ctx) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number())
        throw config_error(ctx + "." + key + ": expected a number");
    return j[key].get<double>();
}

int get_int(const json& j, const char* key, int dflt, const std::string& ctx) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number_integer())
        throw config_error(ctx + "." + key + ": expected an integer");
    return j[key].get<int>();
}

bool get_bool(const json& j, const char* key, bool dflt,
              const std::string& ctx) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_boolean())
        throw config_error(ctx + "." + key + ": expected a boolean");
    return j[key].get<bool>();
}

std::string get_str(const json& j, const char* key, const std::string& dflt,
                    const std::string& ctx) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_string())
        throw config_error(ctx + "." + key + ": expected a string");
    return j[key].get<std::string>();
}

BathSpec parse_bath(const json& j, const std::string& ctx) {
    check_keys(j, {"nbar", "gamma", "r", "phi", "track_beta", "beta"}, ctx);
    BathSpec b;
    b.nbar = get_num(j, "nbar", 0.0, ctx);
    b.gamma = get_num(j, "gamma", 0.0, ctx);
    b.r = get_num(j, "r", 0.0, ctx);
    b.phi = get_num(j, "phi", 0.0, ctx);
    b.track_beta = get_bool(j, "track_beta", false, ctx);
    b.beta = get_num(j, "beta", 0.0, ctx);
    try {
        b.validate();
    } catch (const invalid_bath_error& e) {
        throw config_error(ctx + ": " + e.what());
    }
    return b;
}

json bath_to_json(const BathSpec& b) {
    return json{{"nbar", b.nbar},   {"gamma", b.gamma},
                {"r", b.r},         {"phi", b.phi},
                {"track_beta", b.track_beta}, {"beta", b.beta}};
}

}  // namespace

RunConfig parse_config(const json& j) {
    // "version" is written into sidecars for provenance and ignored on load,
    // so a sidecar is itself a valid config.
    check_keys(j,
               {"experiment", "engine", "geometry", "initial", "expand",
                "cycle", "sweep", "nstar", "output", "version"},
               "config");
    RunConfig cfg;
    cfg.experiment = get_str(j, "experiment", "", "config");
    static const std::set<std::string> experiments{"expand", "cycle", "sweep",
                                                   "nstar", "validate"};
    if (!experiments.count(cfg.experiment))
        throw config_error("config.experiment: must be one of expand, cycle, "
                           "sweep, nstar, validate");

    if (j.contains("engine")) {
        const json& e = j["engine"];
        const std::string ctx = "config.engine";
        check_keys(e,
                   {"kind", "dt", "fock_dim", "bath_frame", "phase_convention",
                    "positivity_checks", "sample_every"},
                   ctx);
        std::string kind = get_str(e, "kind", "moments", ctx);
        if (kind == "moments")
            cfg.engine.engine = EngineKind::Moments;
        else if (kind == "fock")
            cfg.engine.engine = EngineKind::Fock;
        else
            throw config_error(ctx + ".kind: must be 'fock' or 'moments'");
        cfg.engine.dt = get_num(e, "dt", 0.0, ctx);
        cfg.engine.fock_dim = get_int(e, "fock_dim", 0, ctx);
        std::string frame = get_str(e, "bath_frame", "literal", ctx);
        if (frame == "literal")
            cfg.engine.bath_frame = BathFrame::Literal;
        else if (frame == "corotating")
            cfg.engine.bath_frame = BathFrame::Corotating;
        else
            throw config_error(ctx +
                               ".bath_frame: must be 'literal' or 'corotating'");
        std::string phase = get_str(e, "phase_convention", "omega_t", ctx);
        if (phase == "omega_t")
            cfg.engine.phase = PhaseConvention::OmegaT;
        else if (phase == "integral_omega")
            cfg.engine.phase = PhaseConvention::IntegralOmega;
        else
            throw config_error(ctx + ".phase_convention: must be 'omega_t' or "
                                     "'integral_omega'");
        cfg.engine.positivity_checks =
            get_bool(e, "positivity_checks", false, ctx);
        cfg.engine.sample_every = get_int(e, "sample_every", 100, ctx);
        if (cfg.engine.sample_every < 0)
            throw config_error(ctx + ".sample_every: must be >= 0");
        if (cfg.engine.dt < 0.0 || !std::isfinite(cfg.engine.dt))
            throw config_error(ctx + ".dt: must be >= 0");
    }

    if (j.contains("geometry")) {
        const json& g = j["geometry"];
        check_keys(g, {"L0", "omega0", "section"}, "config.geometry");
        cfg.geometry.L0 = get_num(g, "L0", 1.0, "config.geometry");
        cfg.geometry.omega0 = get_num(g, "omega0", two_pi, "config.geometry");
        cfg.geometry.section = get_num(g, "section", 1.0, "config.geometry");
        try {
            cfg.geometry.validate();
        } catch (const validation_error& e) {
            throw config_error(std::string("config.geometry: ") + e.what());
        }
    }

    if (j.contains("initial")) {
        const json& i = j["initial"];
        check_keys(i, {"nbar", "r", "phi"}, "config.initial");
        cfg.initial.nbar = get_num(i, "nbar", 0.0, "config.initial");
        cfg.initial.r = get_num(i, "r", 0.0, "config.initial");
        cfg.initial.phi = get_num(i, "phi", 0.0, "config.initial");
        if (cfg.initial.nbar < 0.0 || cfg.initial.r < 0.0)
            throw config_error("config.initial: nbar and r must be >= 0");
    }

    if (j.contains("expand")) {
        const json& x = j["expand"];
        check_keys(x, {"speed", "t_final", "bath"}, "config.expand");
        cfg.expand.speed = get_num(x, "speed", 0.0, "config.expand");
        cfg.expand.t_final = get_num(x, "t_final", 0.0, "config.expand");
        if (x.contains("bath"))
            cfg.expand.bath = parse_bath(x["bath"], "config.expand.bath");
    } else if (cfg.experiment == "expand") {
        throw config_error("config: experiment 'expand' needs an expand block");
    }

    if (j.contains("cycle")) {
        const json& c = j["cycle"];
        const std::string ctx = "config.cycle";
        check_keys(c,
                   {"tau", "speed", "gamma", "nbar", "r1", "phi1", "r2", "phi2",
                    "mode", "max_cycles", "tol"},
                   ctx);
        cfg.cycle.tmpl.tau = get_num(c, "tau", 1000.0, ctx);
        cfg.cycle.tmpl.speed = get_num(c, "speed", 0.005, ctx);
        cfg.cycle.tmpl.gamma = get_num(c, "gamma", 0.01, ctx);
        cfg.cycle.tmpl.nbar = get_num(c, "nbar", 1.0, ctx);
        cfg.cycle.tmpl.r1 = get_num(c, "r1", 0.1, ctx);
        cfg.cycle.tmpl.phi1 = get_num(c, "phi1", 0.0, ctx);
        cfg.cycle.tmpl.r2 = get_num(c, "r2", 10.0, ctx);
        cfg.cycle.tmpl.phi2 = get_num(c, "phi2", 0.0, ctx);
        std::string mode = get_str(c, "mode", "limit", ctx);
        if (mode == "limit")
            cfg.cycle.mode = CycleMode::Limit;
        else if (mode == "first")
            cfg.cycle.mode = CycleMode::First;
        else
            throw config_error(ctx + ".mode: must be 'limit' or 'first'");
        cfg.cycle.max_cycles = get_int(c, "max_cycles", 64, ctx);
        cfg.cycle.tol = get_num(c, "tol", 1e-8, ctx);
        if (cfg.cycle.max_cycles < 1)
            throw config_error(ctx + ".max_cycles: must be >= 1");
    } else if (cfg.experiment == "cycle" || cfg.experiment == "sweep" ||
               cfg.experiment == "nstar") {
        throw config_error("config: experiment '" + cfg.experiment +
                           "' needs a cycle block");
    }
    cfg.cycle.tmpl.geom = cfg.geometry;

    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        check_keys(s, {"r2_values", "nbar_values", "threads"}, "config.sweep");
        auto get_list = [&](const char* key) {
            if (!s.contains(key) || !s[key].is_array() || s[key].empty())
                throw config_error(std::string("config.sweep.") + key +
                                   ": expected a non-empty array of numbers");
            std::vector<double> v;
            for (const auto& e : s[key]) {
                if (!e.is_number())
                    throw config_error(std::string("config.sweep.") + key +
                                       ": expected numbers");
                v.push_back(e.get<double>());
            }
            return v;
        };
        cfg.sweep.r2_values = get_list("r2_values");
        cfg.sweep.nbar_values = get_list("nbar_values");
        cfg.sweep.threads = get_int(s, "threads", 0, "config.sweep");
    } else if (cfg.experiment == "sweep") {
        throw config_error("config: experiment 'sweep' needs a sweep block");
    }

    if (j.contains("nstar")) {
        const json& n = j["nstar"];
        check_keys(n, {"r2", "bracket"}, "config.nstar");
        cfg.nstar.r2 = get_num(n, "r2", 1.0, "config.nstar");
        if (n.contains("bracket")) {
            if (!n["bracket"].is_array() || n["bracket"].size() != 2)
                throw config_error(
                    "config.nstar.bracket: expected [lo, hi]");
            cfg.nstar.lo = n["bracket"][0].get<double>();
            cfg.nstar.hi = n["bracket"][1].get<double>();
        }
        if (!(cfg.nstar.hi > cfg.nstar.lo) || cfg.nstar.lo < 0.0)
            throw config_error("config.nstar.bracket: need 0 <= lo < hi");
    } else if (cfg.experiment == "nstar") {
        throw config_error("config: experiment 'nstar' needs an nstar block");
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        check_keys(o, {"basename"}, "config.output");
        cfg.basename = get_str(o, "basename", "", "config.output");
    }
    if (cfg.basename.empty()) cfg.basename = cfg.experiment;
    return cfg;
}

json to_json(const RunConfig& cfg) {
    json j;
    j["experiment"] = cfg.experiment;
    j["engine"] = {
        {"kind", cfg.engine.engine == EngineKind::Fock ? "fock" : "moments"},
        {"dt", cfg.engine.dt},
        {"fock_dim", cfg.engine.fock_dim},
        {"bath_frame", cfg.engine.bath_frame == BathFrame::Literal
                           ? "literal"
                           : "corotating"},
        {"phase_convention", cfg.engine.phase == PhaseConvention::OmegaT
                                 ? "omega_t"
                                 : "integral_omega"},
        {"positivity_checks", cfg.engine.positivity_checks},
        {"sample_every", cfg.engine.sample_every}};
    j["geometry"] = {{"L0", cfg.geometry.L0},
                     {"omega0", cfg.geometry.omega0},
                     {"section", cfg.geometry.section}};
    j["initial"] = {{"nbar", cfg.initial.nbar},
                    {"r", cfg.initial.r},
                    {"phi", cfg.initial.phi}};
    j["expand"] = {{"speed", cfg.expand.speed},
                   {"t_final", cfg.expand.t_final},
                   {"bath", bath_to_json(cfg.expand.bath)}};
    j["cycle"] = {
        {"tau", cfg.cycle.tmpl.tau},
        {"speed", cfg.cycle.tmpl.speed},
        {"gamma", cfg.cycle.tmpl.gamma},
        {"nbar", cfg.cycle.tmpl.nbar},
        {"r1", cfg.cycle.tmpl.r1},
        {"phi1", cfg.cycle.tmpl.phi1},
        {"r2", cfg.cycle.tmpl.r2},
        {"phi2", cfg.cycle.tmpl.phi2},
        {"mode", cfg.cycle.mode == CycleMode::Limit ? "limit" : "first"},
        {"max_cycles", cfg.cycle.max_cycles},
        {"tol", cfg.cycle.tol}};
    // an empty grid would not parse back, so only emit a populated block
    if (!cfg.sweep.r2_values.empty())
        j["sweep"] = {{"r2_values", cfg.sweep.r2_values},
                      {"nbar_values", cfg.sweep.nbar_values},
                      {"threads", cfg.sweep.threads}};
    j["nstar"] = {{"r2", cfg.nstar.r2},
                  {"bracket", {cfg.nstar.lo, cfg.nstar.hi}}};
    j["output"] = {{"basename", cfg.basename}};
    return j;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace sqz
