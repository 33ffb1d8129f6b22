#include <doctest.h>

#include <random>
#include <vector>

#include "sqz/kernels.hpp"

using sqz::kernels::cd;

namespace {

std::vector<cd> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cd> v(n);
    for (auto& x : v) x = cd(u(rng), u(rng));
    return v;
}

}  // namespace

TEST_CASE("caxpy matches the naive loop") {
    std::mt19937_64 rng(42);
    for (std::size_t n : {std::size_t(1), std::size_t(3), std::size_t(8),
                          std::size_t(17), std::size_t(64), std::size_t(129)}) {
        auto x = random_vec(rng, n);
        auto y = random_vec(rng, n);
        auto ref = y;
        cd a(0.3, -0.7);
        for (std::size_t i = 0; i < n; ++i) ref[i] += a * x[i];
        sqz::kernels::caxpy(y.data(), x.data(), n, a);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(y[i] - ref[i]) < 1e-14);
    }
}

TEST_CASE("cmuladd matches the naive loop") {
    std::mt19937_64 rng(43);
    for (std::size_t n : {std::size_t(1), std::size_t(5), std::size_t(16),
                          std::size_t(33), std::size_t(100)}) {
        auto x = random_vec(rng, n);
        auto w = random_vec(rng, n);
        auto y = random_vec(rng, n);
        auto ref = y;
        for (std::size_t i = 0; i < n; ++i) ref[i] += w[i] * x[i];
        sqz::kernels::cmuladd(y.data(), x.data(), w.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(y[i] - ref[i]) < 1e-14);
    }
}

TEST_CASE("scalar and AVX2 backends agree") {
    if (!sqz::kernels::detail::avx2_available()) {
        MESSAGE("AVX2 not available on this host; skipping");
        return;
    }
    std::mt19937_64 rng(44);
    for (std::size_t n : {std::size_t(1), std::size_t(2), std::size_t(7),
                          std::size_t(31), std::size_t(32), std::size_t(255)}) {
        auto x = random_vec(rng, n);
        auto w = random_vec(rng, n);
        auto y0 = random_vec(rng, n);
        auto y1 = y0, y2 = y0, y3 = y0;
        cd a(-0.9, 0.4);

        sqz::kernels::force(sqz::kernels::Backend::Scalar);
        sqz::kernels::caxpy(y0.data(), x.data(), n, a);
        sqz::kernels::cmuladd(y2.data(), x.data(), w.data(), n);
        sqz::kernels::force(sqz::kernels::Backend::Avx2);
        sqz::kernels::caxpy(y1.data(), x.data(), n, a);
        sqz::kernels::cmuladd(y3.data(), x.data(), w.data(), n);
        sqz::kernels::reset();

        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(y0[i] - y1[i]) < 1e-14);
            CHECK(std::abs(y2[i] - y3[i]) < 1e-14);
        }
    }
}
