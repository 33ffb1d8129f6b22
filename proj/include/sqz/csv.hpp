#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sqz/engine.hpp"
#include "sqz/otto.hpp"

namespace sqz {

/// 17-significant-digit decimal rendering (round-trips doubles exactly).
std::string fmt17(double x);

/// Header: t,omega,L,n_mean,re_a2,im_a2,energy,pressure,w_alicki,
/// w_alicki_zp,delta_w,w_expansion[,stroke]. Atomic write-then-rename;
/// LF line endings.
void write_timeseries_csv(const std::string& path, const TimeSeries& ts,
                          bool stroke_column);

/// Header: r2,nbar,w_expansion_net,cycles_run,limit_cycle_reached.
void write_sweep_csv(const std::string& path,
                     const std::vector<SweepCell>& cells);

/// Header: r2,nbar_star,w_expansion,edge,evaluations.
void write_nstar_csv(const std::string& path, double r2,
                     const NbarStarResult& res);

/// Metadata sidecar carrying the fully resolved config (itself re-runnable)
/// and the engine version.
void write_sidecar(const std::string& path, const nlohmann::json& resolved);

}  // namespace sqz
