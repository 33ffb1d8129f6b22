#include "sqz/analytics.hpp"

#include <cmath>
#include <vector>

#include "sqz/errors.hpp"
#include "sqz/protocol.hpp"

namespace sqz {

NM nm_constants(double nbar, double r, double phi) {
    double ch = std::cosh(r), sh = std::sinh(r);
    NM out;
    out.N = nbar * (ch * ch + sh * sh) + sh * sh;
    out.M = -(1.0 + 2.0 * nbar) * ch * sh * std::polar(1.0, phi);
    return out;
}

NMPerturbative nm_perturbative(double nbar, double r) {
    return {nbar + (1.0 + 3.0 * nbar) * r * r, -(1.0 + 2.0 * nbar) * r};
}

double beta_from_nbar(double nbar, double omega_ref) {
    if (!(nbar > 0.0) || !(omega_ref > 0.0))
        throw validation_error("beta_from_nbar: nbar and omega_ref must be > 0");
    return std::log1p(1.0 / nbar) / omega_ref;
}

double w_alicki_quasistatic(const QuasistaticSpec& spec) {
    if (!(spec.beta > 0.0))
        throw validation_error("quasistatic: beta must be > 0");
    double w0 = spec.omega(spec.t0), wf = spec.omega(spec.tf);
    if (!(w0 > 0.0) || !(wf > 0.0))
        throw validation_error("quasistatic: omega must stay positive");
    return (std::log1p(-std::exp(-spec.beta * w0)) -
            std::log1p(-std::exp(-spec.beta * wf))) /
           spec.beta;
}

double w_alicki_zp_quasistatic(const QuasistaticSpec& spec) {
    return w_alicki_quasistatic(spec) -
           0.5 * hbar * (spec.omega(spec.tf) - spec.omega(spec.t0));
}

namespace {

double coth_half(double x) {
    // coth(x/2) = (1 + e^{-x}) / (1 - e^{-x})
    double e = std::exp(-x);
    return (1.0 + e) / (1.0 - e);
}

double simpson(const std::function<double(double)>& f, double a, double b,
               std::size_t n) {
    // n = number of subintervals, must be even.
    double h = (b - a) / static_cast<double>(n);
    double acc = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i)
        acc += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

double delta_w_quasistatic(const QuasistaticSpec& spec) {
    if (!(spec.beta > 0.0))
        throw validation_error("quasistatic: beta must be > 0");
    if (spec.r == 0.0) return 0.0;
    const double span = spec.tf - spec.t0;
    if (!(span > 0.0)) return 0.0;

    auto integrand = [&](double t) {
        double w = spec.omega(t), wd = spec.omega_dot(t);
        return -spec.r * hbar * wd * coth_half(spec.beta * w) *
               std::cos(spec.phi - 2.0 * t * w);
    };

    // Resolve the oscillation: local phase rate d/dt [2 t ω(t)] = 2ω + 2tω̇.
    double rate_max = 0.0;
    const int probe = 1024;
    for (int i = 0; i <= probe; ++i) {
        double t = spec.t0 + span * static_cast<double>(i) / probe;
        double rate = std::abs(2.0 * spec.omega(t) + 2.0 * t * spec.omega_dot(t));
        rate_max = std::max(rate_max, rate);
    }
    double h = two_pi / (40.0 * std::max(rate_max, 1e-300));
    std::size_t n = static_cast<std::size_t>(std::ceil(span / h));
    n += n % 2;
    n = std::max<std::size_t>(n, 8);

    double prev = simpson(integrand, spec.t0, spec.tf, n);
    for (int halving = 0; halving < 24; ++halving) {
        n *= 2;
        double cur = simpson(integrand, spec.t0, spec.tf, n);
        if (std::abs(cur - prev) <= 1e-10) return cur;
        prev = cur;
    }
    throw convergence_error("delta_w_quasistatic: quadrature did not reach 1e-10");
}

}  // namespace sqz
