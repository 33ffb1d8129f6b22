// AVX2+FMA variants of the complex kernels. Compiled with -mavx2 -mfma in a
// separate TU; only called after the runtime dispatch check.

#include "sqz/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace sqz::kernels::detail {

// Complex multiply of packed [re, im, re, im] lanes:
//   (ar + i ai)(xr + i xi) = (ar xr - ai xi) + i (ar xi + ai xr)
// fmaddsub subtracts in even lanes and adds in odd lanes, which is exactly
// the re/im split after pairwise-swapping x.

void caxpy_avx2(cd* y, const cd* x, std::size_t n, cd a) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    auto* yp = reinterpret_cast<double*>(y);
    const auto* xp = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        __m256d xs = _mm256_permute_pd(xv, 0b0101);
        __m256d prod = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xs));
        __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(yv, prod));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void cmuladd_avx2(cd* y, const cd* x, const cd* w, std::size_t n) {
    auto* yp = reinterpret_cast<double*>(y);
    const auto* xp = reinterpret_cast<const double*>(x);
    const auto* wp = reinterpret_cast<const double*>(w);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        __m256d wv = _mm256_loadu_pd(wp + 2 * i);
        __m256d wr = _mm256_movedup_pd(wv);                  // [wr, wr, ...]
        __m256d wi = _mm256_permute_pd(wv, 0b1111);          // [wi, wi, ...]
        __m256d xs = _mm256_permute_pd(xv, 0b0101);
        __m256d prod = _mm256_fmaddsub_pd(wr, xv, _mm256_mul_pd(wi, xs));
        __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(yv, prod));
    }
    for (; i < n; ++i) y[i] += w[i] * x[i];
}

}  // namespace sqz::kernels::detail

#else

namespace sqz::kernels::detail {

void caxpy_avx2(cd* y, const cd* x, std::size_t n, cd a) {
    caxpy_scalar(y, x, n, a);
}
void cmuladd_avx2(cd* y, const cd* x, const cd* w, std::size_t n) {
    cmuladd_scalar(y, x, w, n);
}

}  // namespace sqz::kernels::detail

#endif
