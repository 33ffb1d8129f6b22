#include "sqz/moments.hpp"

#include <cmath>

#include "sqz/analytics.hpp"
#include "sqz/errors.hpp"

namespace sqz {

MomentState from_density(const DensityState& st) {
    MomentState m;
    for (int i = 0; i + 1 < st.dim; ++i)
        m.m1 += std::sqrt(double(i + 1)) * st.rho(i + 1, i);
    for (int i = 0; i < st.dim; ++i) m.n += double(i) * st.rho(i, i).real();
    for (int i = 0; i + 2 < st.dim; ++i)
        m.s += std::sqrt(double((i + 1) * (i + 2))) * st.rho(i + 2, i);
    return m;
}

MomentState measure_project(const MomentState& st) {
    return MomentState{cd{0.0, 0.0}, st.n, cd{0.0, 0.0}};
}

MomentDeriv moment_rhs(const MomentState& st, double omega, const BathSpec* bath,
                       BathFrame frame) {
    MomentDeriv d;
    if (frame == BathFrame::Literal) {
        d.m1 = cd(0.0, -omega) * st.m1;
        d.s = cd(0.0, -2.0 * omega) * st.s;
    }
    if (bath) {
        if (!(bath->gamma >= 0.0) || !(bath->nbar >= 0.0))
            throw invalid_bath_error("moment_rhs: negative gamma or nbar");
        double g = bath->gamma;
        NM nm = nm_constants(bath->nbar_at(omega), bath->r, bath->phi);
        d.m1 -= 0.5 * g * st.m1;
        d.n = g * (nm.N - st.n);
        d.s += g * (nm.M - st.s);
    }
    return d;
}

MomentState steady_state(double omega, const BathSpec& bath) {
    bath.validate();
    if (bath.gamma == 0.0)
        throw no_steady_state_error("steady_state: gamma must be > 0");
    NM nm = nm_constants(bath.nbar_at(omega), bath.r, bath.phi);
    MomentState st;
    st.n = nm.N;
    st.s = bath.gamma * nm.M / cd(bath.gamma, 2.0 * omega);
    return st;
}

double physicality_defect(const MomentState& st) {
    double nt = st.n - std::norm(st.m1);
    return std::norm(st.s - st.m1 * st.m1) - nt * (nt + 1.0);
}

}  // namespace sqz
