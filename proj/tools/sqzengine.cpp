// sqzengine: deterministic driver for cavity expansion runs, squeezing Otto
// cycles, (r2, nbar) sweeps, the optimal-nbar finder, and a built-in
// validation suite. All outputs are CSV plus a JSON sidecar holding the
// resolved config (the sidecar can be re-run directly).

#include <cmath>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "sqz/analytics.hpp"
#include "sqz/config.hpp"
#include "sqz/csv.hpp"
#include "sqz/errors.hpp"
#include "sqz/version.hpp"

namespace {

using namespace sqz;

Schedule make_expand_schedule(const RunConfig& cfg) {
    if (!(cfg.expand.t_final > 0.0))
        throw config_error("expand: t_final must be > 0");
    StrokeSpec st;
    st.kind = cfg.expand.bath.gamma > 0.0 ? StrokeKind::Dissipative
                                          : StrokeKind::Unitary;
    st.duration = cfg.expand.t_final;
    st.speed = cfg.expand.speed;
    if (st.kind == StrokeKind::Dissipative) st.bath = cfg.expand.bath;
    st.measure_after = false;
    return Schedule(cfg.geometry, {st});
}

int run_expand(const RunConfig& cfg, const std::string& outdir) {
    Schedule sched = make_expand_schedule(cfg);
    Engine eng(sched, cfg.engine, cfg.initial.nbar, cfg.initial.r,
               cfg.initial.phi);
    eng.run_all_strokes();
    std::string base = outdir + "/" + cfg.basename;
    write_timeseries_csv(base + ".csv", eng.trace(), /*stroke_column=*/false);
    auto meta = to_json(cfg);
    meta["version"] = kVersion;
    write_sidecar(base + ".json", meta);
    std::printf("expand: %zu samples, W_exp = %s, ledger defect %.3g\n",
                eng.trace().size(), fmt17(eng.ledger().w_expansion).c_str(),
                eng.max_ledger_defect());
    return 0;
}

int run_cycle_cmd(const RunConfig& cfg, const std::string& outdir) {
    CycleResult res =
        cfg.cycle.mode == CycleMode::Limit
            ? run_to_limit_cycle(cfg.cycle.tmpl, cfg.engine,
                                 cfg.cycle.max_cycles, cfg.cycle.tol)
            : run_cycle(cfg.cycle.tmpl, cfg.engine);
    std::string base = outdir + "/" + cfg.basename;
    write_timeseries_csv(base + ".csv", res.trace, /*stroke_column=*/true);
    auto meta = to_json(cfg);
    meta["version"] = kVersion;
    write_sidecar(base + ".json", meta);
    std::printf("cycle: %d cycle(s), limit_cycle=%d, net W_exp = %s\n",
                res.cycles_run, res.limit_cycle_reached ? 1 : 0,
                fmt17(res.net_w_expansion).c_str());
    if (cfg.cycle.mode == CycleMode::Limit && !res.limit_cycle_reached) {
        std::fprintf(stderr,
                     "cycle: limit cycle not reached within %d cycles\n",
                     cfg.cycle.max_cycles);
        return 4;
    }
    return 0;
}

int run_sweep_cmd(const RunConfig& cfg, const std::string& outdir) {
    auto cells = sweep(cfg.cycle.tmpl, cfg.sweep.r2_values,
                       cfg.sweep.nbar_values, cfg.engine, cfg.cycle.mode,
                       cfg.cycle.max_cycles, cfg.cycle.tol, cfg.sweep.threads);
    std::string base = outdir + "/" + cfg.basename;
    write_sweep_csv(base + ".csv", cells);
    auto meta = to_json(cfg);
    meta["version"] = kVersion;
    write_sidecar(base + ".json", meta);
    std::printf("sweep: %zu cells written\n", cells.size());
    return 0;
}

int run_nstar_cmd(const RunConfig& cfg, const std::string& outdir) {
    NbarStarResult res =
        find_nbar_star(cfg.cycle.tmpl, cfg.nstar.r2, cfg.nstar.lo,
                       cfg.nstar.hi, cfg.engine, cfg.cycle.mode,
                       cfg.cycle.max_cycles, cfg.cycle.tol);
    std::string base = outdir + "/" + cfg.basename;
    write_nstar_csv(base + ".csv", cfg.nstar.r2, res);
    auto meta = to_json(cfg);
    meta["version"] = kVersion;
    write_sidecar(base + ".json", meta);
    std::printf("nstar: r2=%s nbar*=%s%s (%d evaluations)\n",
                fmt17(cfg.nstar.r2).c_str(), fmt17(res.nbar_star).c_str(),
                res.edge ? " [bracket edge]" : "", res.evaluations);
    return 0;
}

bool report(const char* name, bool ok, const std::string& detail) {
    std::printf("  [%s] %s%s%s\n", ok ? "PASS" : "FAIL", name,
                detail.empty() ? "" : " — ", detail.c_str());
    return ok;
}

int run_validate(const RunConfig& cfg) {
    (void)cfg;
    int failures = 0;
    std::printf("validation suite (engine version %s)\n", kVersion);

    {  // dissipator forms agree
        DensityState st = squeezed_thermal_state(32, 0.4, 0.3, 0.7);
        BathSpec bath{0.4, 0.05, 0.25, 1.1};
        CMat d1 = lindblad_rhs(st, two_pi, &bath);
        CMat d2 = lindblad_rhs_nm(st, two_pi, &bath);
        double err = (d1 - d2).cwiseAbs().maxCoeff();
        if (!report("dissipator forms agree", err <= 1e-12,
                    "max diff " + fmt17(err)))
            ++failures;
    }
    {  // steady state from vacuum
        BathSpec bath{0.0, 0.01, 1.0, 0.0};
        StrokeSpec st{StrokeKind::Dissipative, 20.0 / bath.gamma, 0.0, bath,
                      false};
        Schedule sched(CavityGeometry{1.0, two_pi, 1.0}, {st});
        EngineConfig ec;
        Engine eng(sched, ec, 0.0, 0.0, 0.0);
        eng.run_all_strokes();
        MomentState fix = steady_state(two_pi, bath);
        MomentState got = eng.moments();
        double err = std::max(std::abs(got.n - fix.n), std::abs(got.s - fix.s));
        if (!report("vacuum relaxes to the moment fixed point", err <= 1e-8,
                    "max err " + fmt17(err)))
            ++failures;
    }
    {  // cross-engine agreement on a small open expansion
        BathSpec bath{0.3, 0.01, 0.3, 0.5};
        StrokeSpec st{StrokeKind::Dissipative, 100.0, 2.5e-3, bath, false};
        Schedule sched(CavityGeometry{1.0, two_pi, 1.0}, {st});
        EngineConfig em;
        em.sample_every = 0;
        EngineConfig ef = em;
        ef.engine = EngineKind::Fock;
        Engine a(sched, em, 0.2, 0.1, 0.0);
        Engine b(Schedule(sched), ef, 0.2, 0.1, 0.0);
        a.run_all_strokes();
        b.run_all_strokes();
        double en = std::abs(a.moments().n - b.moments().n);
        double es = std::abs(a.moments().s - b.moments().s);
        double ew =
            std::abs(a.ledger().w_expansion - b.ledger().w_expansion);
        bool ok = en <= 1e-5 * std::abs(b.moments().n) &&
                  es <= 1e-5 * (1.0 + std::abs(b.moments().s)) &&
                  ew <= 1e-5 * std::max(std::abs(b.ledger().w_expansion), 1e-8);
        if (!report("fock and moments engines agree", ok,
                    "dn " + fmt17(en) + ", ds " + fmt17(es) + ", dW " +
                        fmt17(ew)))
            ++failures;
        bool ledg = a.max_ledger_defect() <= 1e-9 &&
                    b.max_ledger_defect() <= 1e-9;
        if (!report("work ledger identity", ledg,
                    "defects " + fmt17(a.max_ledger_defect()) + ", " +
                        fmt17(b.max_ledger_defect())))
            ++failures;
        bool phys = a.max_physicality_defect() <= 1e-8 &&
                    b.max_physicality_defect() <= 1e-8;
        if (!report("moment physicality", phys, ""))
            ++failures;
    }
    {  // closed-form quasistatic reference
        QuasistaticSpec qs;
        qs.beta = 1.0;
        qs.omega = [](double t) { return two_pi / (1.0 + t); };
        qs.omega_dot = [](double t) {
            return -two_pi / ((1.0 + t) * (1.0 + t));
        };
        qs.t0 = 0.0;
        qs.tf = 1.0;
        double w = w_alicki_quasistatic(qs);
        double ref = 0.042306253995202639;
        if (!report("quasistatic closed form", std::abs(w - ref) <= 1e-10,
                    fmt17(w)))
            ++failures;
    }
    if (failures)
        std::printf("validation: %d check(s) failed\n", failures);
    else
        std::printf("validation: all checks passed\n");
    return failures ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"squeezed-cavity engine simulator"};
    app.require_subcommand(1);

    std::string config_path, outdir = ".", engine_override;
    double dt_override = -1.0;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* opt = sub->add_option("--config", config_path,
                                    "JSON run configuration (see docs/CONFIG.md)");
        if (need_config) opt->required();
        sub->add_option("--out", outdir, "output directory (default: .)");
        sub->add_option("--engine", engine_override,
                        "override engine kind: fock | moments");
        sub->add_option("--dt", dt_override, "override integrator step");
    };

    CLI::App* cmds[5];
    const char* names[5] = {"expand", "cycle", "sweep", "nstar", "validate"};
    const char* descs[5] = {
        "finite-time cavity expansion time series",
        "four-stroke squeezing Otto cycle",
        "net expansion work over an (r2, nbar) grid",
        "occupation maximizing the expansion work at fixed r2",
        "built-in cross-engine validation suite"};
    for (int i = 0; i < 5; ++i) {
        cmds[i] = app.add_subcommand(names[i], descs[i]);
        add_common(cmds[i], i < 4);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        sqz::RunConfig cfg;
        if (!config_path.empty()) {
            cfg = sqz::load_config(config_path);
        } else {
            cfg.experiment = "validate";
        }
        std::string sub = app.get_subcommands().front()->get_name();
        if (cfg.experiment != sub)
            throw sqz::config_error("config experiment '" + cfg.experiment +
                                    "' does not match subcommand '" + sub +
                                    "'");
        if (!engine_override.empty()) {
            if (engine_override == "fock")
                cfg.engine.engine = sqz::EngineKind::Fock;
            else if (engine_override == "moments")
                cfg.engine.engine = sqz::EngineKind::Moments;
            else
                throw sqz::config_error("--engine must be fock or moments");
        }
        if (dt_override >= 0.0) cfg.engine.dt = dt_override;

        if (sub == "expand") return run_expand(cfg, outdir);
        if (sub == "cycle") return run_cycle_cmd(cfg, outdir);
        if (sub == "sweep") return run_sweep_cmd(cfg, outdir);
        if (sub == "nstar") return run_nstar_cmd(cfg, outdir);
        return run_validate(cfg);
    } catch (const sqz::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const sqz::truncation_infeasible_error& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return 3;
    } catch (const sqz::truncation_error& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return 3;
    } catch (const sqz::convergence_error& e) {
        std::fprintf(stderr, "convergence: %s\n", e.what());
        return 4;
    } catch (const sqz::divergence_error& e) {
        std::fprintf(stderr, "convergence: %s\n", e.what());
        return 4;
    } catch (const sqz::ambiguous_bracket_error& e) {
        std::fprintf(stderr, "convergence: %s\n", e.what());
        for (const auto& [x, y] : e.grid)
            std::fprintf(stderr, "  nbar=%s  W_exp=%s\n", sqz::fmt17(x).c_str(),
                         sqz::fmt17(y).c_str());
        return 4;
    } catch (const sqz::io_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 5;
    } catch (const sqz::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
}
