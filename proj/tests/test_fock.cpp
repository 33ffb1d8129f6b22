#include <doctest.h>

#include <cmath>

#include "sqz/analytics.hpp"
#include "sqz/errors.hpp"
#include "sqz/fock.hpp"
#include "sqz/moments.hpp"

using sqz::cd;
using sqz::CMat;
using sqz::DensityState;

TEST_CASE("ladder commutator is the identity on the interior block") {
    const int d = 16;
    CMat a = sqz::ladder(d), ad = sqz::ladder_dagger(d);
    CMat comm = a * ad - ad * a;
    for (int i = 0; i < d - 1; ++i)
        for (int j = 0; j < d - 1; ++j)
            CHECK(std::abs(comm(i, j) - (i == j ? 1.0 : 0.0)) < 1e-14);
    // truncation artifact confined to the top level
    CHECK(comm(d - 1, d - 1).real() == doctest::Approx(1.0 - d).epsilon(1e-14));
}

TEST_CASE("squeeze operator is unitary and transforms the ladder") {
    const int d = 128;
    double r = 0.4, phi = 0.9;
    CMat s = sqz::squeeze_operator(d, r, phi);
    CHECK((s * s.adjoint() - CMat::Identity(d, d)).cwiseAbs().maxCoeff() <
          1e-10);
    // S a S† = a cosh r + a† e^{i phi} sinh r on the interior block;
    // truncation leakage reaches down to ~d/2, so compare on the lowest d/4.
    CMat lhs = s * sqz::ladder(d) * s.adjoint();
    CMat rhs = sqz::squeezed_ladder(d, r, phi);
    int interior = d / 4;
    double diff = 0.0;
    for (int i = 0; i < interior; ++i)
        for (int j = 0; j < interior; ++j)
            diff = std::max(diff, std::abs(lhs(i, j) - rhs(i, j)));
    CHECK(diff < 1e-12);
}

TEST_CASE("squeeze operator rejects infeasible truncation") {
    CHECK_THROWS_AS(sqz::squeeze_operator(8, 3.0, 0.0),
                    sqz::truncation_infeasible_error);
}

TEST_CASE("thermal state has geometric populations and the right occupation") {
    double nbar = 0.7;
    DensityState st = sqz::thermal_state(64, nbar);
    CHECK(std::abs(st.rho.trace().real() - 1.0) < 1e-14);
    CHECK(sqz::expect(sqz::number_operator(64), st).real() ==
          doctest::Approx(nbar).epsilon(1e-10));
    double q = nbar / (nbar + 1.0);
    CHECK(st.rho(3, 3).real() / st.rho(2, 2).real() ==
          doctest::Approx(q).epsilon(1e-12));
    CHECK(st.rho(1, 2) == cd(0.0, 0.0));
}

TEST_CASE("squeezed vacuum matches sinh^2 and the frozen M oracle") {
    // <a†a> = sinh^2(1) = 1.3810978455418157,
    // <a^2> = -cosh(1) sinh(1) = -sinh(2)/2 = -1.8134302039235092
    DensityState st = sqz::squeezed_thermal_state(128, 0.0, 1.0, 0.0);
    sqz::MomentState m = sqz::from_density(st);
    CHECK(m.n == doctest::Approx(1.3810978455418157).epsilon(1e-9));
    CHECK(m.s.real() == doctest::Approx(-1.8134302039235092).epsilon(1e-9));
    CHECK(std::abs(m.s.imag()) < 1e-9);
    CHECK(std::abs(m.m1) < 1e-10);
}

TEST_CASE("squeezed thermal moments reproduce the N/M constants") {
    for (double nbar : {0.0, 0.5, 1.0})
        for (double r : {0.0, 0.1, 0.8})
            for (double phi : {0.0, 2.1}) {
                sqz::NM nm = sqz::nm_constants(nbar, r, phi);
                int dim = 128;
                DensityState st = sqz::squeezed_thermal_state(dim, nbar, r, phi);
                sqz::MomentState m = sqz::from_density(st);
                CHECK(std::abs(m.n - nm.N) <= 1e-6 * std::max(1.0, nm.N));
                CHECK(std::abs(m.s - nm.M) <=
                      1e-6 * std::max(1.0, std::abs(nm.M)));
            }
}

TEST_CASE("uncertainty product respects the Heisenberg bound") {
    const int d = 96;
    CMat a = sqz::ladder(d), ad = sqz::ladder_dagger(d);
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CMat x = inv_sqrt2 * (a + ad);
    CMat p = cd(0.0, -1.0) * inv_sqrt2 * (a - ad);
    for (double nbar : {0.0, 0.6}) {
        for (double r : {0.0, 0.5, 1.0}) {
            DensityState st = sqz::squeezed_thermal_state(d, nbar, r, 0.4);
            auto var = [&](const CMat& op) {
                double m1 = sqz::expect(op, st).real();
                double m2 = sqz::expect((op * op).eval(), st).real();
                return m2 - m1 * m1;
            };
            double prod = var(x) * var(p);
            CHECK(prod >= 0.25 - 1e-8);
            if (r == 0.0 && nbar == 0.0)
                CHECK(prod == doctest::Approx(0.25).epsilon(1e-8));
        }
    }
}

TEST_CASE("displacement operator shifts the mean") {
    const int d = 64;
    cd alpha(0.8, -0.5);
    CMat dop = sqz::displacement_operator(d, alpha);
    DensityState st = sqz::vacuum(d);
    st.rho = dop * st.rho * dop.adjoint();
    CHECK(std::abs(sqz::expect(sqz::ladder(d), st) - alpha) < 1e-9);
    CHECK_THROWS_AS(sqz::displacement_operator(8, cd(5.0, 0.0)),
                    sqz::truncation_infeasible_error);
}

TEST_CASE("dephasing keeps the diagonal and is idempotent") {
    DensityState st = sqz::squeezed_thermal_state(32, 0.3, 0.5, 1.0);
    DensityState dp = sqz::dephase_energy_basis(st);
    for (int i = 0; i < 32; ++i)
        CHECK(dp.rho(i, i) == st.rho(i, i));
    CHECK(std::abs(dp.rho(2, 0)) == 0.0);
    DensityState dp2 = sqz::dephase_energy_basis(dp);
    CHECK((dp2.rho - dp.rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("default_dim is the smallest power of two >= 8(n+1)") {
    CHECK(sqz::default_dim(0.0) == 8);
    CHECK(sqz::default_dim(0.1) == 16);
    CHECK(sqz::default_dim(1.0) == 16);
    CHECK(sqz::default_dim(3.0) == 32);
    CHECK(sqz::default_dim(10.0) == 128);
}

TEST_CASE("tail_mass flags occupation near the truncation edge") {
    DensityState st = sqz::vacuum(32);
    CHECK(sqz::tail_mass(st) == 0.0);
    st.rho(31, 31) = 0.25;
    CHECK(sqz::tail_mass(st) == doctest::Approx(0.25).epsilon(1e-14));
}
