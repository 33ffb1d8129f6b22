#pragma once

#include "sqz/types.hpp"

namespace sqz {

/// Matrix exponential by scaling-and-squaring with a degree-13 Padé
/// approximant (Higham 2005). Accurate to ~machine precision in the max
/// norm for the anti-Hermitian generators used here.
CMat expm(const CMat& a);

}  // namespace sqz
