#pragma once

#include <array>
#include <string>
#include <vector>

#include "sqz/engine.hpp"

namespace sqz {

enum class CycleMode { First, Limit };

/// Four-stroke squeezing Otto cycle: unitary compression, isochoric contact
/// with the r2 bath, unitary expansion back to L0, isochoric contact with the
/// r1 bath; non-selective energy measurement after every stroke. The working
/// mode starts in the squeezed thermal state of the r1 bath.
struct CycleTemplate {
    CavityGeometry geom{10.0, two_pi, 1.0};
    double tau = 1000.0;
    double speed = 0.005;  // |dL/dt| on the unitary strokes
    double gamma = 0.01;
    double nbar = 1.0;
    double r1 = 0.1, phi1 = 0.0;
    double r2 = 10.0, phi2 = 0.0;
};

Schedule make_cycle_schedule(const CycleTemplate& tmpl);

struct CycleResult {
    std::array<WorkLedger, 4> stroke_ledgers{};  // per-stroke increments
    double net_w_expansion = 0.0;
    double net_w_alicki = 0.0;
    TimeSeries trace;
    int cycles_run = 0;
    bool limit_cycle_reached = false;
    double n_end = 0.0;  // occupation after the final measurement
    double max_physicality_defect = 0.0;
};

/// One cycle from the prepared initial state.
CycleResult run_cycle(const CycleTemplate& tmpl, const EngineConfig& cfg);

/// Repeat cycles until the post-measurement occupation settles to within
/// tol_abs + 1e-12 |n| between consecutive cycles, then run one more cycle
/// and report it. Non-convergence is flagged, not thrown.
CycleResult run_to_limit_cycle(const CycleTemplate& tmpl,
                               const EngineConfig& cfg, int max_cycles = 64,
                               double tol = 1e-8);

struct SweepCell {
    double r2 = 0.0;
    double nbar = 0.0;
    double w_expansion_net = 0.0;
    int cycles_run = 0;
    bool limit_cycle_reached = false;
    std::string error;  // empty on success
};

/// Net expansion work over an (r2, nbar) grid; cells run in parallel and are
/// assembled in deterministic row-major order (r2 outer, nbar inner).
std::vector<SweepCell> sweep(const CycleTemplate& base,
                             const std::vector<double>& r2_values,
                             const std::vector<double>& nbar_values,
                             const EngineConfig& cfg,
                             CycleMode mode = CycleMode::Limit,
                             int max_cycles = 64, double tol = 1e-8,
                             int threads = 0);

struct NbarStarResult {
    double nbar_star = 0.0;
    double w_expansion = 0.0;
    bool edge = false;  // maximum sat on the bracket boundary
    int evaluations = 0;
};

/// Coarse 9-point unimodality check followed by golden-section maximization
/// of the limit-cycle expansion work over nbar, to |Δnbar| <= 1e-3.
NbarStarResult find_nbar_star(const CycleTemplate& base, double r2, double lo,
                              double hi, const EngineConfig& cfg,
                              CycleMode mode = CycleMode::Limit,
                              int max_cycles = 64, double tol = 1e-8);

}  // namespace sqz
