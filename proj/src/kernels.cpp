#include "sqz/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace sqz::kernels {

namespace detail {

void caxpy_scalar(cd* y, const cd* x, std::size_t n, cd a) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void cmuladd_scalar(cd* y, const cd* x, const cd* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += w[i] * x[i];
}

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

}  // namespace detail

namespace {

Backend detect() {
    if (const char* env = std::getenv("SQZ_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!detail::avx2_available())
                throw std::runtime_error("SQZ_KERNELS=avx2 but AVX2 is unavailable");
            return Backend::Avx2;
        }
    }
    return detail::avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

Backend g_backend = detect();

}  // namespace

Backend active() { return g_backend; }

const char* name(Backend b) {
    return b == Backend::Avx2 ? "avx2" : "scalar";
}

void force(Backend b) {
    if (b == Backend::Avx2 && !detail::avx2_available())
        throw std::runtime_error("AVX2 backend unavailable on this CPU");
    g_backend = b;
}

void reset() { g_backend = detect(); }

void caxpy(cd* y, const cd* x, std::size_t n, cd a) {
    if (g_backend == Backend::Avx2)
        detail::caxpy_avx2(y, x, n, a);
    else
        detail::caxpy_scalar(y, x, n, a);
}

void cmuladd(cd* y, const cd* x, const cd* w, std::size_t n) {
    if (g_backend == Backend::Avx2)
        detail::cmuladd_avx2(y, x, w, n);
    else
        detail::cmuladd_scalar(y, x, w, n);
}

}  // namespace sqz::kernels
