#include "sqz/expm.hpp"

#include <cmath>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

double norm1(const CMat& a) {
    double best = 0.0;
    for (int j = 0; j < a.cols(); ++j) {
        double s = a.col(j).cwiseAbs().sum();
        if (s > best) best = s;
    }
    return best;
}

}  // namespace

CMat expm(const CMat& a) {
    if (a.rows() != a.cols())
        throw invalid_dimension_error("expm: matrix must be square");
    const int n = static_cast<int>(a.rows());

    // Padé-13 coefficients.
    static const double b[] = {64764752532480000., 32382376266240000.,
                               7771770303897600.,  1187353796428800.,
                               129060195264000.,   10559470521600.,
                               670442572800.,      33522128640.,
                               1323241920.,        40840800.,
                               960960.,            16380.,
                               182.,               1.};
    const double theta13 = 5.371920351148152;

    double nrm = norm1(a);
    int squarings = 0;
    if (nrm > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    }
    CMat as = a / std::pow(2.0, squarings);

    CMat a2 = as * as;
    CMat a4 = a2 * a2;
    CMat a6 = a2 * a4;
    CMat ident = CMat::Identity(n, n);

    CMat u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                   b[5] * a4 + b[3] * a2 + b[1] * ident);
    CMat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
             b[4] * a4 + b[2] * a2 + b[0] * ident;

    // (v - u) r = (v + u)
    CMat r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) r = r * r;
    return r;
}

}  // namespace sqz
