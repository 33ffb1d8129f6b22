#include "sqz/engine.hpp"

#include <cmath>
#include <string>

#include "sqz/analytics.hpp"
#include "sqz/errors.hpp"
#include "sqz/kernels.hpp"

namespace sqz {

Integrands work_integrands(double n, cd s, double omega, double omega_dot,
                           double phi_phase, double length, double ldot,
                           double section) {
    double osc = (s * std::polar(1.0, -phi_phase)).real();
    Integrands g;
    g.dw_al = -hbar * omega_dot * n;
    g.dw_al_zp = -hbar * omega_dot * (n + 0.5);
    g.ddw = hbar * omega_dot * osc;
    double kappa = hbar * omega / (2.0 * section * length);
    g.pressure = kappa * (2.0 * n + 1.0 - 2.0 * osc);
    g.dw_exp = g.pressure * section * ldot;
    return g;
}

CMat lindblad_rhs(const DensityState& st, double omega, const BathSpec* bath,
                  BathFrame frame) {
    const int d = st.dim;
    if (d < 2 || st.rho.rows() != d || st.rho.cols() != d)
        throw dimension_mismatch_error("lindblad_rhs: bad state dimensions");
    CMat out = CMat::Zero(d, d);
    if (frame == BathFrame::Literal) {
        CMat h = hbar * omega * number_operator(d);
        out += cd(0.0, -1.0) * (h * st.rho - st.rho * h);
    }
    if (bath) {
        bath->validate();
        if (bath->gamma > 0.0) {
            double nb = bath->nbar_at(omega);
            CMat l = squeezed_ladder(d, bath->r, bath->phi);
            auto diss = [&](const CMat& jump) {
                CMat jd = jump.adjoint();
                CMat jdj = jd * jump;
                return (jump * st.rho * jd -
                        0.5 * (jdj * st.rho + st.rho * jdj))
                    .eval();
            };
            out += bath->gamma * (nb + 1.0) * diss(l);
            out += bath->gamma * nb * diss(l.adjoint().eval());
        }
    }
    return out;
}

CMat lindblad_rhs_nm(const DensityState& st, double omega, const BathSpec* bath,
                     BathFrame frame) {
    const int d = st.dim;
    CMat out = CMat::Zero(d, d);
    if (frame == BathFrame::Literal) {
        CMat h = hbar * omega * number_operator(d);
        out += cd(0.0, -1.0) * (h * st.rho - st.rho * h);
    }
    if (bath) {
        bath->validate();
        if (bath->gamma > 0.0) {
            double g = bath->gamma;
            NM nm = nm_constants(bath->nbar_at(omega), bath->r, bath->phi);
            CMat a = ladder(d), ad = ladder_dagger(d);
            auto lterm = [&](const CMat& l, const CMat& ldag) {
                CMat anti = ldag * l;
                return (l * st.rho * ldag -
                        0.5 * (anti * st.rho + st.rho * anti))
                    .eval();
            };
            out += g * (nm.N + 1.0) * lterm(a, ad);
            out += g * nm.N * lterm(ad, a);
            out -= g * nm.M * lterm(ad, ad);
            out -= g * std::conj(nm.M) * lterm(a, a);
        }
    }
    return out;
}

namespace detail {

CMat band_to_dense(const Band& b, int dim) {
    CMat out = CMat::Zero(dim, dim);
    int d = b.offset;
    for (int j = 0; j < static_cast<int>(b.w.size()); ++j) {
        if (d >= 0)
            out(j, j + d) = b.w[j];
        else
            out(j - d, j) = b.w[j];
    }
    return out;
}

void band_apply_left_add(CMat& out, const Band& b, const CMat& rho, cd scale) {
    const int dim = static_cast<int>(rho.rows());
    const int d = b.offset;
    const int m = dim - std::abs(d);
    for (int j = 0; j < m; ++j) {
        int row = d >= 0 ? j : j - d;
        int src = d >= 0 ? j + d : j;
        kernels::caxpy(out.row(row).data(), rho.row(src).data(),
                       static_cast<std::size_t>(dim), scale * b.w[j]);
    }
}

void band_apply_right_add(CMat& out, const CMat& rho, const Band& b, cd scale,
                          CVec& scratch) {
    const int dim = static_cast<int>(rho.rows());
    const int d = b.offset;
    const int m = dim - std::abs(d);
    if (scratch.size() < m) scratch.resize(dim);
    scratch.head(m) = scale * b.w.head(m);
    for (int i = 0; i < dim; ++i) {
        if (d >= 0)
            kernels::cmuladd(out.row(i).data() + d, rho.row(i).data(),
                             scratch.data(), static_cast<std::size_t>(m));
        else
            kernels::cmuladd(out.row(i).data(), rho.row(i).data() - d,
                             scratch.data(), static_cast<std::size_t>(m));
    }
}

}  // namespace detail

struct Engine::DissipatorOps {
    detail::Band g_diag, g_p2, g_m2, gd_diag;
    detail::Band a_p1, a_m1;    // squeezed ladder
    detail::Band ad_p1, ad_m1;  // its adjoint
    double c1 = 0.0, c2 = 0.0;  // gamma (nbar+1), gamma nbar
    bool squeezed = false;

    // The density matrix is integrated in the interaction picture: the
    // Hamiltonian rotation exp(-i theta n) is absorbed into the dissipator
    // phase (phi -> phi + 2 theta in the literal frame), which removes the
    // fast |i-j| omega coherence rotation that would otherwise violate the
    // RK4 stability limit for far off-diagonal elements.
    void build(int dim, double omega, const BathSpec& bath, double phi_shift) {
        double nb = bath.nbar_at(omega);
        double g = bath.gamma;
        double ch = std::cosh(bath.r), sh = std::sinh(bath.r);
        cd eip = std::polar(1.0, bath.phi + phi_shift);
        c1 = g * (nb + 1.0);
        c2 = g * nb;
        squeezed = bath.r != 0.0;

        auto init = [&](detail::Band& b, int off) {
            b.offset = off;
            b.w.resize(dim - std::abs(off));
        };
        init(a_p1, 1);
        init(a_m1, -1);
        init(ad_p1, 1);
        init(ad_m1, -1);
        init(g_diag, 0);
        init(gd_diag, 0);
        init(g_p2, 2);
        init(g_m2, -2);

        for (int j = 0; j + 1 < dim; ++j) {
            double rt = std::sqrt(double(j + 1));
            a_p1.w[j] = ch * rt;
            a_m1.w[j] = eip * sh * rt;
            ad_m1.w[j] = ch * rt;
            ad_p1.w[j] = std::conj(eip) * sh * rt;
        }
        for (int i = 0; i < dim; ++i) {
            double di = double(i);
            double damp = -(g / 2.0) *
                          ((nb + 1.0) * (ch * ch * di + sh * sh * (di + 1.0)) +
                           nb * (ch * ch * (di + 1.0) + sh * sh * di));
            g_diag.w[i] = damp;
            gd_diag.w[i] = damp;
        }
        cd ap = -(g / 2.0) * (2.0 * nb + 1.0) * ch * sh * std::conj(eip);
        for (int j = 0; j + 2 < dim; ++j) {
            double rt = std::sqrt(double((j + 1) * (j + 2)));
            g_p2.w[j] = ap * rt;
            g_m2.w[j] = std::conj(ap) * rt;
        }
    }
};

namespace {

// Extended RK4 state arithmetic for the moment engine.
MomentState madd(const MomentState& y, double c, const MomentDeriv& d) {
    return MomentState{y.m1 + c * d.m1, y.n + c * d.n, y.s + c * d.s};
}

MomentState moments_of(const CMat& rho, int dim) {
    MomentState m;
    for (int i = 0; i + 1 < dim; ++i)
        m.m1 += std::sqrt(double(i + 1)) * rho(i + 1, i);
    for (int i = 0; i < dim; ++i) m.n += double(i) * rho(i, i).real();
    for (int i = 0; i + 2 < dim; ++i)
        m.s += std::sqrt(double((i + 1) * (i + 2))) * rho(i + 2, i);
    return m;
}

// Interaction-picture moment closure: the free rotation is absorbed into the
// forcing phase (phi_shift = 2 theta in the literal frame, 0 corotating).
MomentDeriv rot_rhs(const MomentState& y, double omega, const BathSpec& bath,
                    double phi_shift) {
    double g = bath.gamma;
    NM nm = nm_constants(bath.nbar_at(omega), bath.r, bath.phi + phi_shift);
    MomentDeriv d;
    d.m1 = -(g / 2.0) * y.m1;
    d.n = g * (nm.N - y.n);
    d.s = -g * (y.s - nm.M);
    return d;
}

// Convert an interaction-picture moment state to the lab frame.
MomentState lab_frame(const MomentState& m, double theta, bool literal) {
    if (!literal) return m;
    return MomentState{m.m1 * std::polar(1.0, -theta), m.n,
                       m.s * std::polar(1.0, -2.0 * theta)};
}

}  // namespace

Engine::Engine(Schedule sched, EngineConfig cfg, double nbar0, double r0,
               double phi0)
    : sched_(std::move(sched)), cfg_(cfg) {
    if (cfg_.sample_every < 0)
        throw config_error("engine: sample_every must be >= 0");
    double rule = (two_pi / sched_.omega_max()) / 50.0;
    double base = cfg_.dt > 0.0 ? cfg_.dt : rule;
    if (!(base > 0.0) || !std::isfinite(base))
        throw config_error("engine: dt must be positive");
    if (base > rule * (1.0 + 1e-12))
        throw config_error("engine: dt " + std::to_string(base) +
                           " too coarse; resolution rule requires <= " +
                           std::to_string(rule));
    for (const auto& st : sched_.strokes()) {
        long n = static_cast<long>(std::ceil(st.duration / base - 1e-9));
        n = std::max<long>(n, 1);
        nsteps_.push_back(n);
        dt_.push_back(st.duration / static_cast<double>(n));
    }

    NM nm0 = nm_constants(nbar0, r0, phi0);
    if (cfg_.engine == EngineKind::Moments) {
        mom_ = MomentState{cd{0.0, 0.0}, nm0.N, nm0.M};
    } else {
        init_fock(nbar0, r0, phi0);
    }

    MomentState m = moments();
    double lt;
    int k = sched_.stroke_index(0.0, &lt);
    Integrands g = instant(0.0, 0.0, lt, m, k);
    ledger_.energy = hbar * sched_.omega_at(0.0) * m.n;
    ledger_.pressure = g.pressure;
    track_state_stats();
    if (cfg_.sample_every > 0) sample_now();
}

void Engine::init_fock(double nbar0, double r0, double phi0) {
    double nmax = nm_constants(nbar0, r0, phi0).N;
    double lmin = sched_.geometry().L0, lmax = lmin, l = lmin;
    for (const auto& st : sched_.strokes()) {
        l += st.speed * st.duration;
        lmin = std::min(lmin, l);
        lmax = std::max(lmax, l);
    }
    double whi = sched_.geometry().c() / lmin;
    double wlo = sched_.geometry().c() / lmax;
    for (const auto& st : sched_.strokes()) {
        if (!st.bath) continue;
        for (double w : {wlo, whi})
            nmax = std::max(
                nmax, nm_constants(st.bath->nbar_at(w), st.bath->r, st.bath->phi)
                          .N);
    }
    int dim = cfg_.fock_dim;
    if (dim == 0) {
        dim = default_dim(nmax);
        // The 8(N+1) rule underestimates for thermal tails; raise the
        // dimension until the geometric tail estimate clears the runtime
        // guard with margin.
        double q = nmax / (nmax + 1.0);
        while (dim < 8192 && std::pow(q, 0.875 * dim) > 1e-11) dim *= 2;
    }
    rho_ = squeezed_thermal_state(dim, nbar0, r0, phi0);
    while (cfg_.fock_dim == 0 && tail_mass(rho_) > 1e-11 && dim < 8192) {
        dim *= 2;
        rho_ = squeezed_thermal_state(dim, nbar0, r0, phi0);
    }
    if (tail_mass(rho_) > 1e-10)
        throw truncation_infeasible_error(
            "engine: initial state violates the tail-mass guard at dim " +
            std::to_string(dim));
    k1_.resize(dim, dim);
    k2_.resize(dim, dim);
    k3_.resize(dim, dim);
    k4_.resize(dim, dim);
    stage_.resize(dim, dim);
    t1_.resize(dim, dim);
    t2_.resize(dim, dim);
    scratch_.resize(dim);
}

double Engine::phase_at(double t_global, double theta_global,
                        double omega) const {
    return cfg_.phase == PhaseConvention::OmegaT ? 2.0 * omega * t_global
                                                 : 2.0 * theta_global;
}

Integrands Engine::instant(double t_global, double theta_global, double lt,
                           const MomentState& m, int stroke) const {
    const auto& st = sched_.strokes()[stroke];
    double L = sched_.stroke_start_length(stroke) + st.speed * lt;
    double c = sched_.geometry().c();
    double omega = c / L;
    double omega_dot = -c * st.speed / (L * L);
    double phi_phase = phase_at(t_global, theta_global, omega);
    return work_integrands(m.n, m.s, omega, omega_dot, phi_phase, L, st.speed,
                           sched_.geometry().section);
}

void Engine::accumulate(const Integrands g[4], double dt) {
    double w = dt / 6.0;
    ledger_.w_alicki += w * (g[0].dw_al + 2.0 * g[1].dw_al + 2.0 * g[2].dw_al +
                             g[3].dw_al);
    ledger_.w_alicki_zp += w * (g[0].dw_al_zp + 2.0 * g[1].dw_al_zp +
                                2.0 * g[2].dw_al_zp + g[3].dw_al_zp);
    ledger_.delta_w +=
        w * (g[0].ddw + 2.0 * g[1].ddw + 2.0 * g[2].ddw + g[3].ddw);
    ledger_.w_expansion += w * (g[0].dw_exp + 2.0 * g[1].dw_exp +
                                2.0 * g[2].dw_exp + g[3].dw_exp);
    double defect = std::abs(ledger_.w_expansion -
                             (ledger_.w_alicki_zp + ledger_.delta_w));
    max_ledger_defect_ = std::max(max_ledger_defect_, defect);
}

MomentState Engine::moments() const {
    MomentState m = cfg_.engine == EngineKind::Moments
                        ? mom_
                        : moments_of(rho_.rho, rho_.dim);
    return lab_frame(m, theta_, cfg_.bath_frame == BathFrame::Literal);
}

const DensityState& Engine::density() const {
    if (cfg_.engine != EngineKind::Fock)
        throw validation_error("engine: no density matrix in moments mode");
    return rho_;
}

void Engine::push_sample(int stroke, double lt, const MomentState& m_lab) {
    Integrands g = instant(t_, theta_, lt, m_lab, stroke);
    const auto& st = sched_.strokes()[stroke];
    double L = sched_.stroke_start_length(stroke) + st.speed * lt;
    Sample s;
    s.t = t_;
    s.length = L;
    s.omega = sched_.geometry().c() / L;
    s.n = m_lab.n;
    s.s = m_lab.s;
    s.energy = hbar * s.omega * m_lab.n;
    s.pressure = g.pressure;
    s.w_alicki = ledger_.w_alicki;
    s.w_alicki_zp = ledger_.w_alicki_zp;
    s.delta_w = ledger_.delta_w;
    s.w_expansion = ledger_.w_expansion;
    s.stroke = stroke;
    trace_.push_back(s);
}

void Engine::sample_now() {
    double lt;
    int k = sched_.stroke_index(t_, &lt);
    push_sample(k, lt, moments());
}

void Engine::track_state_stats() {
    max_phys_defect_ = std::max(max_phys_defect_, physicality_defect(moments()));
}

void Engine::apply_measurement() {
    if (cfg_.engine == EngineKind::Moments) {
        mom_ = measure_project(mom_);
    } else {
        rho_ = dephase_energy_basis(rho_);
    }
}

void Engine::post_step_checks() {
    const int dim = rho_.dim;
    double herm = 0.0;
    for (int i = 0; i < dim; ++i) {
        herm = std::max(herm, std::abs(rho_.rho(i, i).imag()));
        rho_.rho(i, i) = rho_.rho(i, i).real();
        for (int j = i + 1; j < dim; ++j) {
            cd avg = 0.5 * (rho_.rho(i, j) + std::conj(rho_.rho(j, i)));
            herm = std::max(herm, std::abs(rho_.rho(i, j) - avg));
            rho_.rho(i, j) = avg;
            rho_.rho(j, i) = std::conj(avg);
        }
    }
    max_herm_drift_ = std::max(max_herm_drift_, herm);
    double tr = rho_.rho.trace().real();
    if (!std::isfinite(tr))
        throw divergence_error("engine: non-finite trace during integration");
    double drift = std::abs(tr - 1.0);
    max_trace_drift_ = std::max(max_trace_drift_, drift);
    if (drift > 1e-10) {
        rho_.rho /= tr;
        ++renorms_;
    }
    if (tail_mass(rho_) > 1e-10)
        throw truncation_error(
            "engine: tail-mass guard tripped (occupation escaping the "
            "truncated space)");
}

void Engine::fock_rhs(CMat& out, const CMat& rho, const DissipatorOps& ops) {
    out.setZero();
    detail::band_apply_left_add(out, ops.g_diag, rho, 1.0);
    detail::band_apply_right_add(out, rho, ops.gd_diag, 1.0, scratch_);
    if (ops.squeezed) {
        detail::band_apply_left_add(out, ops.g_p2, rho, 1.0);
        detail::band_apply_left_add(out, ops.g_m2, rho, 1.0);
        detail::band_apply_right_add(out, rho, ops.g_p2, 1.0, scratch_);
        detail::band_apply_right_add(out, rho, ops.g_m2, 1.0, scratch_);
    }
    t1_.setZero();
    detail::band_apply_left_add(t1_, ops.a_p1, rho, 1.0);
    if (ops.squeezed) detail::band_apply_left_add(t1_, ops.a_m1, rho, 1.0);
    detail::band_apply_right_add(out, t1_, ops.ad_m1, ops.c1, scratch_);
    if (ops.squeezed)
        detail::band_apply_right_add(out, t1_, ops.ad_p1, ops.c1, scratch_);
    if (ops.c2 != 0.0 || ops.squeezed) {
        t2_.setZero();
        detail::band_apply_left_add(t2_, ops.ad_m1, rho, 1.0);
        if (ops.squeezed) detail::band_apply_left_add(t2_, ops.ad_p1, rho, 1.0);
        if (ops.c2 != 0.0) {
            detail::band_apply_right_add(out, t2_, ops.a_p1, ops.c2, scratch_);
            if (ops.squeezed)
                detail::band_apply_right_add(out, t2_, ops.a_m1, ops.c2,
                                             scratch_);
        }
    }
}

void Engine::run_unitary_stroke(int k, double dt, long nsteps) {
    const auto& st = sched_.strokes()[k];
    const double t0 = t_, th0 = theta_;
    const double ls = sched_.stroke_start_length(k);
    const double v = st.speed;
    const double c = sched_.geometry().c();
    auto dtheta = [&](double lt) {
        if (v == 0.0) return c / ls * lt;
        return c / v * std::log1p(v * lt / ls);
    };
    MomentState m0 = moments();  // lab frame at stroke start
    const bool rotate = cfg_.bath_frame == BathFrame::Literal;

    for (long i = 0; i < nsteps; ++i) {
        double lt = static_cast<double>(i) * dt;
        double off[4] = {0.0, 0.5 * dt, 0.5 * dt, dt};
        Integrands g[4];
        MomentState mlast = m0;
        for (int j = 0; j < 4; ++j) {
            double lta = lt + off[j];
            double dth = dtheta(lta);
            MomentState mj = m0;
            if (rotate) {
                mj.m1 = m0.m1 * std::polar(1.0, -dth);
                mj.s = m0.s * std::polar(1.0, -2.0 * dth);
            }
            g[j] = instant(t0 + lta, th0 + dth, lta, mj, k);
            if (j == 3) mlast = mj;
        }
        accumulate(g, dt);
        double ltn = static_cast<double>(i + 1) * dt;
        t_ = t0 + ltn;
        theta_ = th0 + dtheta(ltn);
        ledger_.pressure = g[3].pressure;
        ledger_.energy = hbar * (c / (ls + v * ltn)) * m0.n;
        if (cfg_.sample_every > 0 &&
            ((i + 1) % cfg_.sample_every == 0 || i + 1 == nsteps))
            // Closed-form lab moments; the stored interaction-picture state
            // is untouched for the whole stroke.
            push_sample(k, ltn, mlast);
    }
    // The interaction-picture state is invariant under a unitary stroke; only
    // the accumulated phase advances.
    t_ = t0 + st.duration;
    theta_ = th0 + dtheta(st.duration);
    track_state_stats();
}

void Engine::run_dissipative_stroke(int k, double dt, long nsteps) {
    const auto& st = sched_.strokes()[k];
    const BathSpec& bath = *st.bath;
    const double t0 = t_, th0 = theta_;
    const double ls = sched_.stroke_start_length(k);
    const double v = st.speed;
    const double c = sched_.geometry().c();
    auto dtheta = [&](double lt) {
        if (v == 0.0) return c / ls * lt;
        return c / v * std::log1p(v * lt / ls);
    };
    auto omega_lt = [&](double lt) { return c / (ls + v * lt); };

    const bool fock = cfg_.engine == EngineKind::Fock;
    const bool literal = cfg_.bath_frame == BathFrame::Literal;
    // In the literal frame the dissipator phase tracks 2*theta, so the
    // operators change every substage even on isochores.
    const bool rebuild = literal || v != 0.0;
    DissipatorOps ops;
    if (fock && !rebuild) ops.build(rho_.dim, omega_lt(0.0), bath, 0.0);

    for (long i = 0; i < nsteps; ++i) {
        double lt = static_cast<double>(i) * dt;
        double off[4] = {0.0, 0.5 * dt, 0.5 * dt, dt};
        double lta[4], tha[4], shift[4];
        for (int j = 0; j < 4; ++j) {
            lta[j] = lt + off[j];
            tha[j] = dtheta(lta[j]);
            shift[j] = literal ? 2.0 * (th0 + tha[j]) : 0.0;
        }
        Integrands g[4];
        if (!fock) {
            MomentState y = mom_;
            MomentDeriv kd[4];
            MomentState ys[4];
            ys[0] = y;
            kd[0] = rot_rhs(ys[0], omega_lt(lta[0]), bath, shift[0]);
            ys[1] = madd(y, 0.5 * dt, kd[0]);
            kd[1] = rot_rhs(ys[1], omega_lt(lta[1]), bath, shift[1]);
            ys[2] = madd(y, 0.5 * dt, kd[1]);
            kd[2] = rot_rhs(ys[2], omega_lt(lta[2]), bath, shift[2]);
            ys[3] = madd(y, dt, kd[2]);
            kd[3] = rot_rhs(ys[3], omega_lt(lta[3]), bath, shift[3]);
            for (int j = 0; j < 4; ++j)
                g[j] = instant(t0 + lta[j], th0 + tha[j], lta[j],
                               lab_frame(ys[j], th0 + tha[j], literal), k);
            double w = dt / 6.0;
            mom_.m1 = y.m1 + w * (kd[0].m1 + 2.0 * kd[1].m1 + 2.0 * kd[2].m1 +
                                  kd[3].m1);
            mom_.n =
                y.n + w * (kd[0].n + 2.0 * kd[1].n + 2.0 * kd[2].n + kd[3].n);
            mom_.s =
                y.s + w * (kd[0].s + 2.0 * kd[1].s + 2.0 * kd[2].s + kd[3].s);
            if (!std::isfinite(mom_.n))
                throw divergence_error("engine: non-finite moments");
        } else {
            const int dim = rho_.dim;
            if (rebuild) ops.build(dim, omega_lt(lta[0]), bath, shift[0]);
            fock_rhs(k1_, rho_.rho, ops);
            g[0] = instant(t0 + lta[0], th0 + tha[0], lta[0],
                           lab_frame(moments_of(rho_.rho, dim), th0 + tha[0],
                                     literal),
                           k);
            stage_ = rho_.rho + (0.5 * dt) * k1_;
            if (rebuild) ops.build(dim, omega_lt(lta[1]), bath, shift[1]);
            fock_rhs(k2_, stage_, ops);
            g[1] = instant(t0 + lta[1], th0 + tha[1], lta[1],
                           lab_frame(moments_of(stage_, dim), th0 + tha[1],
                                     literal),
                           k);
            stage_ = rho_.rho + (0.5 * dt) * k2_;
            fock_rhs(k3_, stage_, ops);
            g[2] = instant(t0 + lta[2], th0 + tha[2], lta[2],
                           lab_frame(moments_of(stage_, dim), th0 + tha[2],
                                     literal),
                           k);
            stage_ = rho_.rho + dt * k3_;
            if (rebuild) ops.build(dim, omega_lt(lta[3]), bath, shift[3]);
            fock_rhs(k4_, stage_, ops);
            g[3] = instant(t0 + lta[3], th0 + tha[3], lta[3],
                           lab_frame(moments_of(stage_, dim), th0 + tha[3],
                                     literal),
                           k);
            rho_.rho += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
            post_step_checks();
        }
        accumulate(g, dt);
        double ltn = static_cast<double>(i + 1) * dt;
        t_ = t0 + ltn;
        theta_ = th0 + dtheta(ltn);
        MomentState mnow = moments();
        Integrands gn = instant(t_, theta_, ltn, mnow, k);
        ledger_.pressure = gn.pressure;
        ledger_.energy = hbar * omega_lt(ltn) * mnow.n;
        track_state_stats();
        if (cfg_.sample_every > 0 &&
            ((i + 1) % cfg_.sample_every == 0 || i + 1 == nsteps))
            push_sample(k, ltn, mnow);
    }
    t_ = t0 + st.duration;
    theta_ = th0 + dtheta(st.duration);
}

void Engine::run_next_stroke() {
    int k = next_stroke_;
    if (k >= static_cast<int>(sched_.strokes().size()))
        throw validation_error("engine: schedule already exhausted");
    const auto& st = sched_.strokes()[k];
    bool unitary =
        st.kind == StrokeKind::Unitary || (st.bath && st.bath->gamma == 0.0);
    if (unitary)
        run_unitary_stroke(k, dt_[k], nsteps_[k]);
    else
        run_dissipative_stroke(k, dt_[k], nsteps_[k]);
    if (st.measure_after) apply_measurement();
    if (cfg_.positivity_checks && cfg_.engine == EngineKind::Fock) {
        Eigen::MatrixXcd dense = rho_.rho;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
        if (es.eigenvalues().minCoeff() < -1e-8)
            throw validation_error(
                "engine: positivity check failed (min eigenvalue " +
                std::to_string(es.eigenvalues().minCoeff()) + ")");
    }
    ++next_stroke_;
    if (next_stroke_ >= static_cast<int>(sched_.strokes().size())) {
        if (sched_.periodic()) {
            next_stroke_ = 0;
            ++cycle_count_;
        } else {
            next_stroke_ = static_cast<int>(sched_.strokes().size());
        }
    }
}

void Engine::run_all_strokes() {
    for (std::size_t i = 0; i < sched_.strokes().size(); ++i) run_next_stroke();
}

}  // namespace sqz
