#pragma once

#include <Eigen/Dense>
#include <complex>

namespace sqz {

using cd = std::complex<double>;

// Row-major so that the banded kernels in the density engine work on
// contiguous rows.
using CMat =
    Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVec = Eigen::VectorXcd;

// Units: hbar = k_B = 1 throughout.
inline constexpr double hbar = 1.0;

}  // namespace sqz
