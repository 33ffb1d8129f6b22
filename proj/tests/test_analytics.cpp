#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sqz/analytics.hpp"
#include "sqz/protocol.hpp"

using sqz::QuasistaticSpec;
using sqz::two_pi;

namespace {

// Linear expansion L: 1 -> 2 over [0, T]; omega = 2 pi / L.
QuasistaticSpec linear_expansion(double T, double r, double phi, double beta) {
    QuasistaticSpec q;
    q.beta = beta;
    q.omega = [T](double t) { return two_pi / (1.0 + t / T); };
    q.omega_dot = [T](double t) {
        double L = 1.0 + t / T;
        return -two_pi / (T * L * L);
    };
    q.t0 = 0.0;
    q.tf = T;
    q.r = r;
    q.phi = phi;
    return q;
}

}  // namespace

TEST_CASE("nm_constants matches the frozen oracles") {
    sqz::NM nm = sqz::nm_constants(1.0, 0.1, std::numbers::pi / 2.0);
    CHECK(nm.N == doctest::Approx(1.0301001334286113).epsilon(1e-12));
    CHECK(std::abs(nm.M) ==
          doctest::Approx(0.30200400381164103).epsilon(1e-12));
    // M = -(1+2 nbar) ch sh e^{i phi}: at phi = pi/2 it points along -i...
    // -(positive)·i = negative imaginary part? M = -|M| e^{i pi/2} = -i|M|.
    CHECK(nm.M.imag() == doctest::Approx(-std::abs(nm.M)).epsilon(1e-12));
    CHECK(std::abs(nm.M.real()) < 1e-15);

    sqz::NM sv = sqz::nm_constants(0.0, 1.0, 0.0);
    CHECK(sv.N == doctest::Approx(1.3810978455418157).epsilon(1e-13));
    CHECK(sv.M.real() == doctest::Approx(-1.8134302039235092).epsilon(1e-13));
}

TEST_CASE("perturbative N/M track the exact constants at small r") {
    for (double nbar : {0.0, 1.0, 4.0})
        for (double r : {0.05, 0.1, 0.3}) {
            sqz::NM nm = sqz::nm_constants(nbar, r, 0.0);
            sqz::NMPerturbative p = sqz::nm_perturbative(nbar, r);
            CHECK(std::abs(nm.M.real() - p.M1) <= (1.0 + 2.0 * nbar) * r * r * r);
            CHECK(std::abs(nm.N - p.N2) <= (1.0 + 2.0 * nbar) * r * r + 1e-12);
        }
}

TEST_CASE("beta_from_nbar inverts the Planck law") {
    double beta = sqz::beta_from_nbar(10.0, two_pi);
    CHECK(1.0 / std::expm1(beta * two_pi) == doctest::Approx(10.0).epsilon(1e-13));
    sqz::BathSpec b{0.0, 0.01, 0.0, 0.0, true, beta};
    CHECK(b.nbar_at(two_pi) == doctest::Approx(10.0).epsilon(1e-13));
}

TEST_CASE("quasistatic Alicki work matches the frozen closed form") {
    // beta = 1, omega: 2 pi -> pi (L doubles): frozen high-precision value.
    QuasistaticSpec q = linear_expansion(1.0, 0.0, 0.0, 1.0);
    CHECK(sqz::w_alicki_quasistatic(q) ==
          doctest::Approx(0.042306253995202639).epsilon(1e-12));
    CHECK(sqz::w_alicki_zp_quasistatic(q) ==
          doctest::Approx(0.042306253995202639 + std::numbers::pi / 2.0)
              .epsilon(1e-12));
}

TEST_CASE("delta_w is linear in r and odd under phi -> phi + pi") {
    QuasistaticSpec q1 = linear_expansion(5.0, 0.01, 0.7, 1.0);
    QuasistaticSpec q2 = linear_expansion(5.0, 0.02, 0.7, 1.0);
    double d1 = sqz::delta_w_quasistatic(q1);
    double d2 = sqz::delta_w_quasistatic(q2);
    CHECK(d2 == doctest::Approx(2.0 * d1).epsilon(1e-9));

    QuasistaticSpec qpi = linear_expansion(5.0, 0.01, 0.7 + std::numbers::pi, 1.0);
    double dpi = sqz::delta_w_quasistatic(qpi);
    CHECK(std::abs(d1 + dpi) < 2e-10);
}

TEST_CASE("delta_w agrees with a brute-force Simpson oracle") {
    QuasistaticSpec q = linear_expansion(3.0, 0.05, 1.3, 0.8);
    auto integrand = [&](double t) {
        double w = q.omega(t), wd = q.omega_dot(t);
        double x = q.beta * w;
        double coth = (1.0 + std::exp(-x)) / (1.0 - std::exp(-x));
        return -q.r * wd * coth * std::cos(q.phi - 2.0 * t * w);
    };
    const int n = 1 << 20;  // even
    double h = (q.tf - q.t0) / n;
    double acc = integrand(q.t0) + integrand(q.tf);
    for (int i = 1; i < n; ++i)
        acc += (i % 2 ? 4.0 : 2.0) * integrand(q.t0 + i * h);
    double oracle = acc * h / 3.0;
    CHECK(sqz::delta_w_quasistatic(q) == doctest::Approx(oracle).epsilon(1e-8));
}
