#include "sqz/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqz/errors.hpp"

namespace sqz {

void CavityGeometry::validate() const {
    if (!(L0 > 0.0) || !std::isfinite(L0))
        throw validation_error("geometry: L0 must be positive");
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw validation_error("geometry: omega0 must be positive");
    if (!(section > 0.0) || !std::isfinite(section))
        throw validation_error("geometry: section must be positive");
}

double BathSpec::nbar_at(double omega) const {
    if (!track_beta) return nbar;
    return 1.0 / std::expm1(beta * omega);
}

void BathSpec::validate() const {
    if (!(nbar >= 0.0) || !std::isfinite(nbar))
        throw invalid_bath_error("bath: nbar must be >= 0");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw invalid_bath_error("bath: gamma must be >= 0");
    if (!(r >= 0.0) || !std::isfinite(r))
        throw invalid_bath_error("bath: r must be >= 0");
    if (!std::isfinite(phi)) throw invalid_bath_error("bath: phi must be finite");
    if (track_beta && !(beta > 0.0))
        throw invalid_bath_error("bath: track_beta requires beta > 0");
}

Schedule::Schedule(CavityGeometry geom, std::vector<StrokeSpec> strokes,
                   bool periodic)
    : geom_(geom), strokes_(std::move(strokes)), periodic_(periodic) {
    geom_.validate();
    if (strokes_.empty()) throw validation_error("schedule: no strokes");
    double t = 0.0, L = geom_.L0;
    for (std::size_t k = 0; k < strokes_.size(); ++k) {
        const auto& s = strokes_[k];
        if (!(s.duration > 0.0) || !std::isfinite(s.duration))
            throw validation_error("schedule: stroke duration must be > 0");
        if (!std::isfinite(s.speed))
            throw validation_error("schedule: stroke speed must be finite");
        if (s.kind == StrokeKind::Dissipative) {
            if (!s.bath)
                throw validation_error("schedule: dissipative stroke without bath");
            s.bath->validate();
        }
        t_start_.push_back(t);
        L_start_.push_back(L);
        double Lend = L + s.speed * s.duration;
        if (!(Lend > 0.0) || !(L > 0.0))
            throw validation_error("schedule: length must stay positive");
        t += s.duration;
        L = Lend;
    }
    total_ = t;
    if (periodic_ && std::abs(L - geom_.L0) > 1e-9 * geom_.L0)
        throw validation_error("schedule: periodic schedule does not close in L");
}

double Schedule::wrap(double t) const {
    if (periodic_) {
        double u = std::fmod(t, total_);
        if (u < 0.0) u += total_;
        return u;
    }
    if (t < -1e-12 || t > total_ * (1.0 + 1e-12))
        throw validation_error("schedule: time " + std::to_string(t) +
                               " outside [0, " + std::to_string(total_) + "]");
    return std::clamp(t, 0.0, total_);
}

int Schedule::stroke_index(double t, double* local) const {
    double u = wrap(t);
    int k = static_cast<int>(strokes_.size()) - 1;
    for (std::size_t i = 1; i < strokes_.size(); ++i) {
        if (u < t_start_[i]) {
            k = static_cast<int>(i) - 1;
            break;
        }
    }
    if (local) *local = u - t_start_[k];
    return k;
}

double Schedule::length_at(double t) const {
    double lt;
    int k = stroke_index(t, &lt);
    return L_start_[k] + strokes_[k].speed * lt;
}

double Schedule::omega_at(double t) const { return geom_.c() / length_at(t); }

double Schedule::omega_dot_at(double t) const {
    double lt;
    int k = stroke_index(t, &lt);
    double L = L_start_[k] + strokes_[k].speed * lt;
    return -geom_.c() * strokes_[k].speed / (L * L);
}

double Schedule::theta_between(double t0, double t1) const {
    if (t1 < t0) throw validation_error("theta_between: t1 < t0");
    if (!periodic_) return theta_span(t0, t1);
    double span = t1 - t0;
    double full = std::floor(span / total_);
    double theta = full > 0.0 ? full * theta_span(0.0, total_) : 0.0;
    span -= full * total_;
    t0 = wrap(t0);
    t1 = t0 + span;
    if (t1 > total_)
        return theta + theta_span(t0, total_) + theta_span(0.0, t1 - total_);
    return theta + theta_span(t0, t1);
}

// Integral of omega over [t0, t1] within a single period.
double Schedule::theta_span(double t0, double t1) const {
    double theta = 0.0;
    double lt0;
    int k = stroke_index(t0, &lt0);
    double t = t0, lt = lt0;
    while (t < t1 - 1e-15 * std::max(1.0, t1)) {
        double tend = std::min(t1, t_start_[k] + strokes_[k].duration);
        double La = L_start_[k] + strokes_[k].speed * lt;
        double dt = tend - t;
        double v = strokes_[k].speed;
        if (v == 0.0) {
            theta += geom_.c() / La * dt;
        } else {
            double Lb = La + v * dt;
            theta += geom_.c() / v * std::log(Lb / La);
        }
        t = tend;
        ++k;
        lt = 0.0;
        if (k >= static_cast<int>(strokes_.size())) break;
    }
    return theta;
}

double Schedule::omega_max() const {
    double Lmin = geom_.L0;
    double L = geom_.L0;
    for (const auto& s : strokes_) {
        L += s.speed * s.duration;
        Lmin = std::min(Lmin, L);
    }
    return geom_.c() / Lmin;
}

void validate_cycle(const Schedule& sched) {
    const auto& strokes = sched.strokes();
    if (strokes.size() != 4)
        throw validation_error("cycle: expected exactly 4 strokes");
    const StrokeKind pattern[4] = {StrokeKind::Unitary, StrokeKind::Dissipative,
                                   StrokeKind::Unitary, StrokeKind::Dissipative};
    double tau = strokes[0].duration;
    double L = sched.geometry().L0;
    for (int k = 0; k < 4; ++k) {
        const auto& s = strokes[k];
        if (s.kind != pattern[k])
            throw validation_error(
                "cycle: stroke " + std::to_string(k + 1) +
                " must be " +
                (pattern[k] == StrokeKind::Unitary ? "unitary" : "dissipative"));
        if (std::abs(s.duration - tau) > 1e-12 * tau)
            throw validation_error("cycle: strokes must have equal duration");
        if (s.kind == StrokeKind::Dissipative && s.speed != 0.0)
            throw validation_error("cycle: dissipative strokes must be isochoric");
        if (!s.measure_after)
            throw validation_error(
                "cycle: every stroke must end in an energy measurement");
        L += s.speed * s.duration;
        if (!(L > 0.0))
            throw validation_error("cycle: length must stay positive");
    }
    if (std::abs(L - sched.geometry().L0) > 1e-9 * sched.geometry().L0)
        throw validation_error("cycle: net length change must vanish");
}

}  // namespace sqz
