#include "sqz/otto.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "sqz/errors.hpp"

namespace sqz {

Schedule make_cycle_schedule(const CycleTemplate& tmpl) {
    if (!(tmpl.tau > 0.0) || !(tmpl.speed > 0.0))
        throw validation_error("cycle: tau and speed must be > 0");
    BathSpec b2{tmpl.nbar, tmpl.gamma, tmpl.r2, tmpl.phi2};
    BathSpec b1{tmpl.nbar, tmpl.gamma, tmpl.r1, tmpl.phi1};
    std::vector<StrokeSpec> strokes;
    strokes.push_back({StrokeKind::Unitary, tmpl.tau, -tmpl.speed, {}, true});
    strokes.push_back({StrokeKind::Dissipative, tmpl.tau, 0.0, b2, true});
    strokes.push_back({StrokeKind::Unitary, tmpl.tau, tmpl.speed, {}, true});
    strokes.push_back({StrokeKind::Dissipative, tmpl.tau, 0.0, b1, true});
    Schedule sched(tmpl.geom, std::move(strokes), /*periodic=*/true);
    validate_cycle(sched);
    return sched;
}

namespace {

// Runs one cycle on an existing engine, recording per-stroke ledger deltas.
void one_cycle(Engine& eng, CycleResult& out) {
    WorkLedger before = eng.ledger();
    for (int k = 0; k < 4; ++k) {
        WorkLedger pre = eng.ledger();
        eng.run_next_stroke();
        WorkLedger post = eng.ledger();
        out.stroke_ledgers[k].w_alicki = post.w_alicki - pre.w_alicki;
        out.stroke_ledgers[k].w_alicki_zp = post.w_alicki_zp - pre.w_alicki_zp;
        out.stroke_ledgers[k].delta_w = post.delta_w - pre.delta_w;
        out.stroke_ledgers[k].w_expansion = post.w_expansion - pre.w_expansion;
    }
    WorkLedger after = eng.ledger();
    out.net_w_expansion = after.w_expansion - before.w_expansion;
    out.net_w_alicki = after.w_alicki - before.w_alicki;
    out.n_end = eng.moments().n;
    ++out.cycles_run;
}

}  // namespace

CycleResult run_cycle(const CycleTemplate& tmpl, const EngineConfig& cfg) {
    Schedule sched = make_cycle_schedule(tmpl);
    Engine eng(sched, cfg, tmpl.nbar, tmpl.r1, tmpl.phi1);
    CycleResult out;
    one_cycle(eng, out);
    out.trace = eng.trace();
    out.max_physicality_defect = eng.max_physicality_defect();
    return out;
}

CycleResult run_to_limit_cycle(const CycleTemplate& tmpl,
                               const EngineConfig& cfg, int max_cycles,
                               double tol) {
    if (max_cycles < 1)
        throw validation_error("run_to_limit_cycle: max_cycles must be >= 1");
    Schedule sched = make_cycle_schedule(tmpl);
    EngineConfig transient_cfg = cfg;
    transient_cfg.sample_every = 0;  // trace only the reported cycle
    Engine eng(sched, transient_cfg, tmpl.nbar, tmpl.r1, tmpl.phi1);
    CycleResult out;
    double n_prev = eng.moments().n;
    bool converged = false;
    if (!std::isfinite(tol)) converged = true;  // tol = inf: report cycle 1
    for (int c = 0; c < max_cycles; ++c) {
        if (converged || c == max_cycles - 1) {
            // Confirmation cycle: this is the one we report and trace.
            eng.clear_trace();
            eng.set_sample_every(cfg.sample_every);
            if (cfg.sample_every > 0) eng.sample_now();
            one_cycle(eng, out);
            out.cycles_run = c + 1;
            out.limit_cycle_reached = converged;
            out.trace = eng.trace();
            break;
        }
        one_cycle(eng, out);
        double n_now = out.n_end;
        if (std::abs(n_now - n_prev) <= tol + 1e-12 * std::abs(n_now))
            converged = true;
        n_prev = n_now;
    }
    out.max_physicality_defect = eng.max_physicality_defect();
    return out;
}

std::vector<SweepCell> sweep(const CycleTemplate& base,
                             const std::vector<double>& r2_values,
                             const std::vector<double>& nbar_values,
                             const EngineConfig& cfg, CycleMode mode,
                             int max_cycles, double tol, int threads) {
    if (cfg.engine != EngineKind::Moments)
        throw validation_error("sweep: only the moments engine is supported");
    const std::size_t ncells = r2_values.size() * nbar_values.size();
    std::vector<SweepCell> cells(ncells);
    if (threads <= 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(ncells)));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= ncells) return;
            std::size_t ir = i / nbar_values.size();
            std::size_t in = i % nbar_values.size();
            SweepCell& cell = cells[i];
            cell.r2 = r2_values[ir];
            cell.nbar = nbar_values[in];
            try {
                CycleTemplate tmpl = base;
                tmpl.r2 = cell.r2;
                tmpl.nbar = cell.nbar;
                EngineConfig ccfg = cfg;
                ccfg.sample_every = 0;
                CycleResult res =
                    mode == CycleMode::Limit
                        ? run_to_limit_cycle(tmpl, ccfg, max_cycles, tol)
                        : run_cycle(tmpl, ccfg);
                cell.w_expansion_net = res.net_w_expansion;
                cell.cycles_run = res.cycles_run;
                cell.limit_cycle_reached =
                    mode == CycleMode::Limit ? res.limit_cycle_reached : true;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return cells;
}

namespace {

double eval_cycle_work(const CycleTemplate& base, double r2, double nbar,
                       const EngineConfig& cfg, CycleMode mode, int max_cycles,
                       double tol, int& evals) {
    CycleTemplate tmpl = base;
    tmpl.r2 = r2;
    tmpl.nbar = nbar;
    EngineConfig ccfg = cfg;
    ccfg.sample_every = 0;
    ++evals;
    CycleResult res = mode == CycleMode::Limit
                          ? run_to_limit_cycle(tmpl, ccfg, max_cycles, tol)
                          : run_cycle(tmpl, ccfg);
    return res.net_w_expansion;
}

}  // namespace

NbarStarResult find_nbar_star(const CycleTemplate& base, double r2, double lo,
                              double hi, const EngineConfig& cfg,
                              CycleMode mode, int max_cycles, double tol) {
    if (!(hi > lo) || !(lo >= 0.0))
        throw validation_error("find_nbar_star: need 0 <= lo < hi");
    NbarStarResult out;
    auto f = [&](double nb) {
        return eval_cycle_work(base, r2, nb, cfg, mode, max_cycles, tol,
                               out.evaluations);
    };

    constexpr int npts = 9;
    double x[npts], y[npts];
    for (int i = 0; i < npts; ++i) {
        x[i] = lo + (hi - lo) * static_cast<double>(i) / (npts - 1);
        y[i] = f(x[i]);
    }
    int best = 0;
    for (int i = 1; i < npts; ++i)
        if (y[i] > y[best]) best = i;

    if (best == 0 || best == npts - 1) {
        out.nbar_star = x[best];
        out.w_expansion = y[best];
        out.edge = true;
        return out;
    }

    // Unimodality: strictly rising to the peak, then falling (with slack for
    // flat numerical plateaus).
    auto slack = [&](double a) { return 1e-12 + 1e-9 * std::abs(a); };
    for (int i = 1; i < npts; ++i) {
        bool rising = i <= best;
        if (rising ? (y[i] < y[i - 1] - slack(y[i - 1]))
                   : (y[i] > y[i - 1] + slack(y[i - 1]))) {
            std::vector<std::pair<double, double>> grid;
            for (int j = 0; j < npts; ++j) grid.emplace_back(x[j], y[j]);
            throw ambiguous_bracket_error(
                "find_nbar_star: coarse grid is not unimodal", std::move(grid));
        }
    }

    double a = x[best - 1], b = x[best + 1];
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c1 = b - invphi * (b - a), c2 = a + invphi * (b - a);
    double f1 = f(c1), f2 = f(c2);
    while (b - a > 1e-3) {
        if (f1 >= f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - invphi * (b - a);
            f1 = f(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + invphi * (b - a);
            f2 = f(c2);
        }
    }
    out.nbar_star = 0.5 * (a + b);
    out.w_expansion = f(out.nbar_star);
    out.edge = false;
    return out;
}

}  // namespace sqz
