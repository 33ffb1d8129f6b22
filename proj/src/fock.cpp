#include "sqz/fock.hpp"

#include <cmath>
#include <string>

#include "sqz/errors.hpp"
#include "sqz/expm.hpp"

namespace sqz {

namespace {

void check_dim(int dim) {
    if (dim < 2)
        throw invalid_dimension_error("fock: dim must be >= 2, got " +
                                      std::to_string(dim));
}

}  // namespace

CMat ladder(int dim) {
    check_dim(dim);
    CMat a = CMat::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

CMat ladder_dagger(int dim) { return ladder(dim).adjoint(); }

CMat number_operator(int dim) {
    check_dim(dim);
    CMat n = CMat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = double(k);
    return n;
}

CMat squeezed_ladder(int dim, double r, double phi) {
    check_dim(dim);
    return std::cosh(r) * ladder(dim) +
           (std::sinh(r) * std::polar(1.0, phi)) * ladder_dagger(dim);
}

CMat squeeze_operator(int dim, double r, double phi) {
    check_dim(dim);
    double sh = std::sinh(r);
    if (sh * sh > dim / 4.0)
        throw truncation_infeasible_error(
            "squeeze_operator: sinh^2 r = " + std::to_string(sh * sh) +
            " too large for dim " + std::to_string(dim));
    cd xi = r * std::polar(1.0, phi);
    CMat a = ladder(dim);
    CMat gen = 0.5 * (std::conj(xi) * (a * a).eval() -
                      xi * (a.adjoint() * a.adjoint()).eval());
    return expm(gen);
}

CMat displacement_operator(int dim, cd alpha) {
    check_dim(dim);
    if (std::norm(alpha) > dim / 4.0)
        throw truncation_infeasible_error(
            "displacement_operator: |alpha|^2 too large for dim " +
            std::to_string(dim));
    CMat a = ladder(dim);
    CMat gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return expm(gen);
}

DensityState vacuum(int dim) {
    check_dim(dim);
    DensityState st{dim, CMat::Zero(dim, dim)};
    st.rho(0, 0) = 1.0;
    return st;
}

DensityState thermal_state(int dim, double nbar) {
    check_dim(dim);
    if (!(nbar >= 0.0))
        throw invalid_bath_error("thermal_state: nbar must be >= 0");
    DensityState st{dim, CMat::Zero(dim, dim)};
    if (nbar == 0.0) {
        st.rho(0, 0) = 1.0;
        return st;
    }
    double q = nbar / (nbar + 1.0);
    double p = 1.0, norm = 0.0;
    for (int n = 0; n < dim; ++n) {
        st.rho(n, n) = p;
        norm += p;
        p *= q;
    }
    st.rho /= norm;
    return st;
}

DensityState squeezed_thermal_state(int dim, double nbar, double r, double phi) {
    double ch = std::cosh(r), sh = std::sinh(r);
    double nmean = nbar * (ch * ch + sh * sh) + sh * sh;
    if (dim < 4.0 * (nmean + 1.0))
        throw truncation_infeasible_error(
            "squeezed_thermal_state: predicted occupation " +
            std::to_string(nmean) + " infeasible for dim " + std::to_string(dim));
    DensityState th = thermal_state(dim, nbar);
    if (r == 0.0) return th;
    CMat s = squeeze_operator(dim, r, phi);
    DensityState st{dim, s * th.rho * s.adjoint()};
    // Renormalize the truncation leak and keep exact hermiticity.
    st.rho = 0.5 * (st.rho + st.rho.adjoint()).eval();
    st.rho /= st.rho.trace().real();
    return st;
}

cd expect(const CMat& op, const DensityState& st) {
    if (op.rows() != st.dim || op.cols() != st.dim)
        throw dimension_mismatch_error("expect: operator/state dims differ");
    return (op * st.rho).trace();
}

DensityState dephase_energy_basis(const DensityState& st) {
    DensityState out{st.dim, CMat::Zero(st.dim, st.dim)};
    out.rho.diagonal() = st.rho.diagonal();
    return out;
}

int default_dim(double nmean) {
    double target = 8.0 * (nmean + 1.0);
    int dim = 2;
    while (dim < target) dim *= 2;
    return dim;
}

double tail_mass(const DensityState& st) {
    int start = st.dim - st.dim / 8;
    double m = 0.0;
    for (int n = start; n < st.dim; ++n) m += st.rho(n, n).real();
    return m;
}

}  // namespace sqz
