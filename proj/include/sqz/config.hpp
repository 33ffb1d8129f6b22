#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sqz/engine.hpp"
#include "sqz/otto.hpp"

namespace sqz {

struct ExpandSpec {
    double speed = 0.0;
    double t_final = 0.0;
    BathSpec bath;
};

struct CycleRunSpec {
    CycleTemplate tmpl;  // geometry is filled from RunConfig::geometry
    CycleMode mode = CycleMode::Limit;
    int max_cycles = 64;
    double tol = 1e-8;
};

struct SweepSpec {
    std::vector<double> r2_values, nbar_values;
    int threads = 0;
};

struct NstarSpec {
    double r2 = 1.0;
    double lo = 0.1, hi = 10.0;
};

struct InitialSpec {
    double nbar = 0.0, r = 0.0, phi = 0.0;
};

/// Fully resolved run description. Serializes losslessly to JSON: the
/// sidecar written next to every CSV is itself a valid config.
struct RunConfig {
    std::string experiment;  // expand | cycle | sweep | nstar | validate
    EngineConfig engine;
    CavityGeometry geometry;
    InitialSpec initial;  // expand only
    ExpandSpec expand;
    CycleRunSpec cycle;  // cycle / sweep / nstar
    SweepSpec sweep;
    NstarSpec nstar;
    std::string basename;  // output file stem; default = experiment
};

RunConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);
RunConfig load_config(const std::string& path);

}  // namespace sqz
