#pragma once

#include <vector>

#include "sqz/fock.hpp"
#include "sqz/moments.hpp"
#include "sqz/protocol.hpp"

namespace sqz {

enum class EngineKind { Fock, Moments };
enum class PhaseConvention { OmegaT, IntegralOmega };

struct EngineConfig {
    EngineKind engine = EngineKind::Moments;
    double dt = 0.0;    // 0 = auto from the resolution rule
    int fock_dim = 0;   // 0 = auto from the truncation rule
    BathFrame bath_frame = BathFrame::Literal;
    PhaseConvention phase = PhaseConvention::OmegaT;
    bool positivity_checks = false;
    int sample_every = 100;  // steps between samples; 0 disables sampling
};

struct WorkLedger {
    double w_alicki = 0.0;
    double w_alicki_zp = 0.0;
    double delta_w = 0.0;
    double w_expansion = 0.0;
    double energy = 0.0;
    double pressure = 0.0;
};

struct Sample {
    double t = 0.0, omega = 0.0, length = 0.0;
    double n = 0.0;
    cd s{0.0, 0.0};
    double energy = 0.0, pressure = 0.0;
    double w_alicki = 0.0, w_alicki_zp = 0.0, delta_w = 0.0, w_expansion = 0.0;
    int stroke = 0;
};
using TimeSeries = std::vector<Sample>;

struct Integrands {
    double dw_al = 0.0, dw_al_zp = 0.0, ddw = 0.0, dw_exp = 0.0;
    double pressure = 0.0;
};

/// Work/pressure integrands at one instant. Phi is the two-photon phase
/// (2 t omega(t) or 2 ∫omega dt, per convention):
///   dW_Al/dt  = -ħ ω̇ n
///   dW̃_Al/dt = -ħ ω̇ (n + 1/2)
///   dΔW/dt    =  ħ ω̇ Re[s e^{-iΦ}]
///   p         =  κ (2n + 1 - 2 Re[s e^{-iΦ}]),  κ = ħω/(2 S L)
///   dW_exp/dt =  p S L̇  (= dW̃_Al/dt + dΔW/dt identically)
Integrands work_integrands(double n, cd s, double omega, double omega_dot,
                           double phi_phase, double length, double ldot,
                           double section);

/// Dense master-equation right-hand side (reference form, used by tests and
/// small-scale oracles; the engine itself uses the banded fast path).
CMat lindblad_rhs(const DensityState& st, double omega, const BathSpec* bath,
                  BathFrame frame = BathFrame::Literal);

/// Same superoperator written through the bath constants N and M with plain
/// ladder jump operators; agrees with lindblad_rhs to rounding.
CMat lindblad_rhs_nm(const DensityState& st, double omega, const BathSpec* bath,
                     BathFrame frame = BathFrame::Literal);

namespace detail {

/// One diagonal band of an operator: offset >= 0 stores B(j, j+offset) = w[j];
/// offset < 0 stores B(j+|offset|, j) = w[j].
struct Band {
    int offset = 0;
    CVec w;
};

CMat band_to_dense(const Band& b, int dim);
void band_apply_left_add(CMat& out, const Band& b, const CMat& rho, cd scale);
void band_apply_right_add(CMat& out, const CMat& rho, const Band& b, cd scale,
                          CVec& scratch);

}  // namespace detail

/// Fixed-step RK4 evolution of either engine over a stroke schedule, with the
/// four work integrals co-integrated at the RK4 substages.
class Engine {
public:
    Engine(Schedule sched, EngineConfig cfg, double nbar0, double r0,
           double phi0);

    /// Integrate the next stroke in the schedule (wraps around for periodic
    /// schedules); applies the energy measurement if the stroke asks for it.
    void run_next_stroke();
    void run_all_strokes();

    /// Current lab-frame moments (the internally stored state is kept in the
    /// interaction picture; the accumulated phase is reapplied here).
    MomentState moments() const;
    /// Interaction-picture density matrix (diagonal and |i-j| populations
    /// match the lab frame; coherences carry a phase e^{-i theta (i-j)}).
    const DensityState& density() const;

    const WorkLedger& ledger() const { return ledger_; }
    const TimeSeries& trace() const { return trace_; }
    double time() const { return t_; }
    double theta() const { return theta_; }
    int next_stroke() const { return next_stroke_; }
    int dim() const { return rho_.dim; }
    double stroke_dt(int k) const { return dt_[k]; }
    long renormalizations() const { return renorms_; }
    double max_trace_drift() const { return max_trace_drift_; }
    double max_hermiticity_drift() const { return max_herm_drift_; }
    double max_ledger_defect() const { return max_ledger_defect_; }
    double max_physicality_defect() const { return max_phys_defect_; }

    void set_sample_every(int n) { cfg_.sample_every = n; }
    void clear_trace() { trace_.clear(); }
    void sample_now();

private:
    struct DissipatorOps;

    void init_fock(double nbar0, double r0, double phi0);
    double phase_at(double t_global, double theta_global, double omega) const;
    Integrands instant(double t_global, double theta_global, double lt,
                       const MomentState& m, int stroke) const;
    void accumulate(const Integrands g[4], double dt);
    void push_sample(int stroke, double lt, const MomentState& m_lab);
    void run_unitary_stroke(int k, double dt, long nsteps);
    void run_dissipative_stroke(int k, double dt, long nsteps);
    void fock_rhs(CMat& out, const CMat& rho, const DissipatorOps& ops);
    void post_step_checks();
    void track_state_stats();
    void apply_measurement();

    Schedule sched_;
    EngineConfig cfg_;
    std::vector<double> dt_;     // effective step per stroke
    std::vector<long> nsteps_;

    MomentState mom_;            // moments engine state
    DensityState rho_;           // fock engine state (dim = 0 when unused)

    double t_ = 0.0;             // global time
    double theta_ = 0.0;         // ∫ omega dt
    int next_stroke_ = 0;        // index into the schedule, mod wraps
    long cycle_count_ = 0;       // completed passes over a periodic schedule

    WorkLedger ledger_;
    TimeSeries trace_;
    long step_in_stroke_ = 0;

    long renorms_ = 0;
    double max_trace_drift_ = 0.0;
    double max_herm_drift_ = 0.0;
    double max_ledger_defect_ = 0.0;
    double max_phys_defect_ = -1.0;

    // fock scratch
    CMat k1_, k2_, k3_, k4_, stage_, t1_, t2_;
    CVec scratch_;
};

}  // namespace sqz
