#pragma once

#include <functional>

#include "sqz/types.hpp"

namespace sqz {

/// Second moments of the squeezed thermal state:
///   N = nbar (cosh^2 r + sinh^2 r) + sinh^2 r        (= <a†a>)
///   M = -(1 + 2 nbar) cosh r sinh r e^{i phi}        (= <a²>)
struct NM {
    double N;
    cd M;
};
NM nm_constants(double nbar, double r, double phi);

/// Small-r expansions: N ≈ nbar + (1+3 nbar) r², M ≈ -(1+2 nbar) r (phi = 0).
struct NMPerturbative {
    double N2;
    double M1;
};
NMPerturbative nm_perturbative(double nbar, double r);

/// Inverse temperature giving occupation nbar at frequency omega_ref.
double beta_from_nbar(double nbar, double omega_ref);

/// Quasistatic expansion spec: the state is assumed to track the
/// instantaneous squeezed thermal state along omega(t).
struct QuasistaticSpec {
    double beta = 1.0;
    std::function<double(double)> omega;
    std::function<double(double)> omega_dot;
    double t0 = 0.0;
    double tf = 1.0;
    double r = 0.0;
    double phi = 0.0;
};

/// Closed form for the quasistatic work at leading order in r:
///   W_Al = (1/beta) ln[(1 - e^{-beta ω(t0)}) / (1 - e^{-beta ω(tf)})].
double w_alicki_quasistatic(const QuasistaticSpec& spec);

/// Same, including the zero-point term: W̃_Al = W_Al - (1/2)(ω(tf) - ω(t0)).
double w_alicki_zp_quasistatic(const QuasistaticSpec& spec);

/// Two-photon work correction at leading order in r, by oscillation-aware
/// composite Simpson quadrature of
///   dΔW/dt = -r ω̇(t) coth(beta ω / 2) cos(phi - 2 t ω(t)).
/// (The instantaneous <a²> is M; coth(beta ω/2) = 1 + 2 nbar(ω).)
double delta_w_quasistatic(const QuasistaticSpec& spec);

}  // namespace sqz
