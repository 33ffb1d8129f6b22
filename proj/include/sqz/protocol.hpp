#pragma once

#include <numbers>
#include <optional>
#include <vector>

#include "sqz/types.hpp"

namespace sqz {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct CavityGeometry {
    double L0 = 1.0;
    double omega0 = two_pi;
    double section = 1.0;  // mirror area S
    double c() const { return omega0 * L0; }
    void validate() const;
};

/// Squeezed thermal reservoir. If track_beta is set the occupation follows a
/// fixed inverse temperature, nbar(omega) = 1/(e^{beta*omega} - 1), instead of
/// the fixed nbar value.
struct BathSpec {
    double nbar = 0.0;
    double gamma = 0.0;
    double r = 0.0;
    double phi = 0.0;
    bool track_beta = false;
    double beta = 0.0;

    double nbar_at(double omega) const;
    void validate() const;
};

enum class StrokeKind { Unitary, Dissipative };

struct StrokeSpec {
    StrokeKind kind = StrokeKind::Unitary;
    double duration = 0.0;
    double speed = 0.0;  // dL/dt, constant over the stroke
    std::optional<BathSpec> bath;
    bool measure_after = false;
};

/// Piecewise-linear length schedule with omega(t) = c / L(t).
class Schedule {
public:
    Schedule() = default;
    Schedule(CavityGeometry geom, std::vector<StrokeSpec> strokes,
             bool periodic = false);

    const CavityGeometry& geometry() const { return geom_; }
    const std::vector<StrokeSpec>& strokes() const { return strokes_; }
    bool periodic() const { return periodic_; }
    double total_duration() const { return total_; }

    /// Stroke containing time t; optionally returns the within-stroke time.
    int stroke_index(double t, double* local = nullptr) const;

    double length_at(double t) const;
    double omega_at(double t) const;
    double omega_dot_at(double t) const;

    /// Exact integral of omega over [t0, t1] (t1 >= t0), crossing stroke
    /// boundaries and cycle wraps as needed.
    double theta_between(double t0, double t1) const;

    double omega_max() const;
    double stroke_start_time(int k) const { return t_start_[k]; }
    double stroke_start_length(int k) const { return L_start_[k]; }

private:
    double wrap(double t) const;
    double theta_span(double t0, double t1) const;

    CavityGeometry geom_;
    std::vector<StrokeSpec> strokes_;
    std::vector<double> t_start_, L_start_;
    double total_ = 0.0;
    bool periodic_ = false;
};

/// Checks the four-stroke cycle pattern: unitary compression, dissipative
/// isochore, unitary expansion, dissipative isochore; equal durations; net
/// length closure; measurement after every stroke.
void validate_cycle(const Schedule& sched);

}  // namespace sqz
