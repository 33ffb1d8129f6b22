#include <doctest.h>

#include <cmath>
#include <random>

#include "sqz/expm.hpp"
#include "sqz/types.hpp"

using sqz::cd;
using sqz::CMat;

TEST_CASE("expm of zero is the identity") {
    CMat z = CMat::Zero(5, 5);
    CMat e = sqz::expm(z);
    CHECK((e - CMat::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("expm of a diagonal matrix exponentiates the diagonal") {
    CMat d = CMat::Zero(4, 4);
    d(0, 0) = cd(0.5, 0.0);
    d(1, 1) = cd(-2.0, 1.0);
    d(2, 2) = cd(0.0, -3.0);
    d(3, 3) = cd(7.0, 0.0);  // exercises the scaling branch
    CMat e = sqz::expm(d);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(e(i, i) - std::exp(d(i, i))) < 1e-12 *
                                                          std::abs(std::exp(d(i, i))));
    CHECK(std::abs(e(0, 1)) < 1e-14);
}

TEST_CASE("expm of a rotation generator gives the rotation") {
    double th = 1.234;
    CMat g = CMat::Zero(2, 2);
    g(0, 1) = -th;
    g(1, 0) = th;
    CMat e = sqz::expm(g);
    CHECK(std::abs(e(0, 0) - std::cos(th)) < 1e-14);
    CHECK(std::abs(e(0, 1) + std::sin(th)) < 1e-14);
    CHECK(std::abs(e(1, 0) - std::sin(th)) < 1e-14);
    CHECK(std::abs(e(1, 1) - std::cos(th)) < 1e-14);
}

TEST_CASE("expm of a nilpotent matrix truncates exactly") {
    CMat n = CMat::Zero(3, 3);
    n(0, 1) = 2.0;
    n(1, 2) = cd(0.0, 3.0);
    CMat e = sqz::expm(n);
    CHECK(std::abs(e(0, 1) - cd(2.0, 0.0)) < 1e-14);
    CHECK(std::abs(e(1, 2) - cd(0.0, 3.0)) < 1e-14);
    CHECK(std::abs(e(0, 2) - cd(0.0, 3.0)) < 1e-14);  // n(0,1)n(1,2)/2
    CHECK(std::abs(e(2, 0)) < 1e-15);
}

TEST_CASE("expm of an anti-Hermitian matrix is unitary and group-additive") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int d = 12;
    CMat a = CMat::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = cd(u(rng), u(rng));
    CMat g = a - a.adjoint().eval();  // anti-Hermitian
    CMat e = sqz::expm(g);
    CHECK((e * e.adjoint() - CMat::Identity(d, d)).cwiseAbs().maxCoeff() <
          1e-12);
    CMat eh = sqz::expm((0.5 * g).eval());
    CHECK((eh * eh - e).cwiseAbs().maxCoeff() < 1e-11);
}
