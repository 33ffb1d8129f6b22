#pragma once

#include <complex>
#include <cstddef>

// Data-parallel complex kernels used by the density-engine right-hand side.
// A scalar reference implementation always exists; an AVX2+FMA variant is
// selected at runtime when the CPU supports it (override with the
// SQZ_KERNELS environment variable, values "scalar" or "avx2").

namespace sqz::kernels {

using cd = std::complex<double>;

enum class Backend { Scalar, Avx2 };

Backend active();
const char* name(Backend b);

/// Force a backend (tests). Throws if the backend is unavailable.
void force(Backend b);

/// Reset to auto-detection.
void reset();

/// y[i] += a * x[i]
void caxpy(cd* y, const cd* x, std::size_t n, cd a);

/// y[i] += w[i] * x[i]
void cmuladd(cd* y, const cd* x, const cd* w, std::size_t n);

namespace detail {
void caxpy_scalar(cd* y, const cd* x, std::size_t n, cd a);
void cmuladd_scalar(cd* y, const cd* x, const cd* w, std::size_t n);
void caxpy_avx2(cd* y, const cd* x, std::size_t n, cd a);
void cmuladd_avx2(cd* y, const cd* x, const cd* w, std::size_t n);
bool avx2_available();
}  // namespace detail

}  // namespace sqz::kernels
