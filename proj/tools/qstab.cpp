// qstab: synthesis, simulation, region maps and verification from the command line.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qstab/errors.hpp"
#include "qstab/io.hpp"
#include "qstab/stabilizability.hpp"
#include "qstab/synthesis.hpp"
#include "qstab/two_qubit.hpp"
#include "qstab/verifier.hpp"

using namespace qstab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitVerifyFailed = 3;

struct Flags {
    std::optional<std::string> config;
    std::optional<double> omega0, g0;
    std::optional<double> theta0, phi0, thetaf, phif;
    std::optional<double> t0;
    std::optional<std::string> control_class;
    std::optional<double> budget, ts, es;
    std::optional<int> n;
    std::optional<double> ratio;
    std::optional<int> res, n_theta, n_phi;
    std::optional<std::string> pulse_path;
    std::optional<double> dt, horizon, dt_fraction;
    bool oracle = false;
    std::string out;
    std::optional<std::string> report;
};

// Flag values win over config values.
RunConfig resolve(const Flags& f) {
    RunConfig c = f.config ? run_config_from_json(read_json_file(*f.config)) : RunConfig{};
    auto pick = [](auto& slot, const auto& flag) {
        if (flag) slot = flag;
    };
    pick(c.omega0, f.omega0);
    pick(c.g0, f.g0);
    pick(c.t0, f.t0);
    pick(c.n, f.n);
    pick(c.ts, f.ts);
    pick(c.es, f.es);
    if (f.budget) c.ts = f.budget;
    pick(c.dt, f.dt);
    pick(c.horizon, f.horizon);
    pick(c.ratio, f.ratio);
    if (f.res) c.n_theta = c.n_phi = f.res;
    pick(c.n_theta, f.n_theta);
    pick(c.n_phi, f.n_phi);
    if (f.control_class) c.control_class = control_class_from_string(*f.control_class);
    if (f.theta0 || f.phi0) {
        const BlochPoint base = c.initial.value_or(BlochPoint{});
        c.initial = BlochPoint(f.theta0.value_or(base.theta()), f.phi0.value_or(base.phi()));
    }
    if (f.thetaf || f.phif) {
        const BlochPoint base = c.target.value_or(BlochPoint{});
        c.target = BlochPoint(f.thetaf.value_or(base.theta()), f.phif.value_or(base.phi()));
    }
    return c;
}

template <class T>
T need(const std::optional<T>& v, const char* what) {
    if (!v) throw ParameterError(std::string("missing required value: ") + what);
    return *v;
}

SystemParams params_of(const RunConfig& c) { return SystemParams(need(c.omega0, "--omega0"), need(c.g0, "--g0")); }

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_text_file(path, text);
    }
}

void summarize(const SynthesisResult& r) {
    std::cerr << "construction " << r.design.construction << ", t_f - t0 = " << r.t_f - r.t0;
    if (r.design.k_fap) std::cerr << ", k_fap = " << *r.design.k_fap;
    if (r.design.n) std::cerr << ", n = " << *r.design.n;
    if (r.design.budget_case) std::cerr << ", case " << *r.design.budget_case;
    std::cerr << "\n";
}

int cmd_synth_point(const Flags& f) {
    const RunConfig c = resolve(f);
    const SystemParams params = params_of(c);
    const BlochPoint p0 = need(c.initial, "--theta0/--phi0");
    const BlochPoint pf = need(c.target, "--thetaf/--phif");
    const SynthesisResult r = synth_point_hold(p0, pf, params, c.t0.value_or(0.0));
    summarize(r);
    emit(f.out, dump_json(to_json(make_document(r, p0, pf, params))));
    return kExitOk;
}

int cmd_synth_circle(const Flags& f) {
    const RunConfig c = resolve(f);
    const SystemParams params = params_of(c);
    const BlochPoint p0 = need(c.initial, "--theta0/--phi0");
    const BlochPoint pf = need(c.target, "--thetaf/--phif");
    const double t0 = c.t0.value_or(0.0);
    Budgets budgets;
    SynthesisResult r;
    if (c.ts) {
        budgets.ts = c.ts;
        r = synth_circle_within_budget(p0, pf, params, t0, *c.ts, c.n);
    } else {
        r = synth_circle_continuous(p0, pf, params, t0, c.n.value_or(minimal_envelope_order(params, false)));
    }
    if (c.control_class) r.control_class = *c.control_class;
    summarize(r);
    emit(f.out, dump_json(to_json(make_document(r, p0, pf, params, budgets))));
    return kExitOk;
}

int cmd_time_energy(const Flags& f) {
    const RunConfig c = resolve(f);
    const SystemParams params = params_of(c);
    const BlochPoint p0 = need(c.initial, "--theta0/--phi0");
    const BlochPoint pf = need(c.target, "--thetaf/--phif");
    const double ts = need(c.ts, "--ts");
    const double es = need(c.es, "--es");
    const auto ks = feasible_k_time_energy(p0, pf, params, ts, es);
    std::cerr << "feasible k:";
    for (std::size_t i = 0; i < ks.size() && i < 16; ++i) std::cerr << ' ' << ks[i];
    if (ks.size() > 16) std::cerr << " ... (" << ks.size() << " total)";
    std::cerr << "\n";
    const SynthesisResult r = synth_time_energy(p0, pf, params, c.t0.value_or(0.0), ts, es);
    summarize(r);
    emit(f.out, dump_json(to_json(make_document(r, p0, pf, params, Budgets{ts, es}))));
    return kExitOk;
}

int cmd_region(const Flags& f) {
    const RunConfig c = resolve(f);
    const RegionGrid grid = region_grid(need(c.ratio, "--ratio"), c.n_theta.value_or(256), c.n_phi.value_or(256));
    std::ostringstream csv;
    write_region_csv(csv, grid);
    emit(f.out, csv.str());
    std::cerr << "stabilizable fraction " << grid.fraction() << ", phi=0 column " << grid.column_fraction(0)
              << "\n";
    return kExitOk;
}

int cmd_entangle(const Flags& f) {
    const RunConfig c = resolve(f);
    const SystemParams params = params_of(c);
    const BlochPoint p0 = need(c.initial, "--theta0/--phi0");
    const double phi_f = f.phif ? *f.phif : (c.target ? c.target->phi() : 0.0);
    const EntanglerResult r = synth_entangler(p0, params, c.ts,
                                              c.control_class.value_or(ControlClass::BoundedContinuous),
                                              c.t0.value_or(0.0), phi_f);
    summarize(r.equivalent);
    emit(f.out, dump_json(to_json(make_document(r, params))));
    return kExitOk;
}

PulseDocument load_pulse(const Flags& f) {
    return pulse_document_from_json(read_json_file(need(f.pulse_path, "--pulse")));
}

int cmd_simulate(const Flags& f) {
    const RunConfig c = resolve(f);
    const PulseDocument doc = load_pulse(f);
    const double omega = doc.lifted ? 4.0 * doc.params.omega0() : doc.params.omega0();
    const double period = kTwoPi / omega;
    std::optional<BlochPoint> p0 = c.initial;
    if (!p0 && doc.synthesis) p0 = doc.synthesis->initial;
    const BlochPoint start = need(p0, "--theta0/--phi0 (no synthesis record in the pulse file)");
    double horizon = doc.pulse.t_end();
    if (c.horizon) {
        horizon = *c.horizon;
    } else if (!std::isfinite(horizon)) {
        const double tf = doc.synthesis ? doc.synthesis->t_f : segment_start(doc.pulse.segments().back());
        horizon = tf + 10.0 * period;
    }
    const PropagationOptions opts{c.dt.value_or(1e-4 * period), 1};
    Dynamics dyn = doc.lifted ? two_qubit_dynamics(LiftedPulse(doc.pulse), doc.params.omega0())
                              : qubit_dynamics(doc.pulse, doc.params);
    const StateVector s0 = doc.lifted ? logical_state(start) : bloch_to_state(start);
    const Trajectory traj = f.oracle ? oracle_propagate(dyn, s0, opts, horizon) : propagate(dyn, s0, opts, horizon);
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    emit(f.out, csv.str());
    std::cerr << traj.size() << " samples, max norm drift " << traj.max_norm_drift() << "\n";
    return kExitOk;
}

int cmd_verify(const Flags& f) {
    const PulseDocument doc = load_pulse(f);
    if (!doc.synthesis) throw FormatError("pulse file has no synthesis record to verify against");
    VerifyOptions opts;
    if (f.dt_fraction) opts.dt_fraction = *f.dt_fraction;
    VerificationReport report;
    if (doc.lifted) {
        report = verify_entangler(to_entangler_result(doc), doc.params, opts);
    } else {
        report = verify_synthesis(to_synthesis_result(doc), doc.synthesis->initial, doc.synthesis->target,
                                  doc.params, doc.synthesis->budgets, opts);
    }
    const std::string text = dump_json(report_to_json(report));
    emit(f.report.value_or(f.out), text);
    for (const auto& ch : report.checks) {
        std::cerr << (ch.pass ? "PASS " : "FAIL ") << ch.name << " measured " << ch.measured << " claimed "
                  << ch.claimed << "\n";
    }
    return report.overall ? kExitOk : kExitVerifyFailed;
}

void add_system(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "JSON run config; flags override its values");
    app->add_option("--omega0", f.omega0, "drift frequency (rad/s)");
    app->add_option("--g0", f.g0, "control amplitude bound (rad/s)");
    app->add_option("--t0", f.t0, "start time (s)");
    app->add_option("--out", f.out, "output path, '-' for stdout");
}

void add_points(CLI::App* app, Flags& f, bool target) {
    app->add_option("--theta0", f.theta0, "initial polar angle (rad)");
    app->add_option("--phi0", f.phi0, "initial phase (rad)");
    if (target) app->add_option("--thetaf", f.thetaf, "target polar angle (rad)");
    app->add_option("--phif", f.phif, "target phase (rad)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded-control stabilization of qubit states"};
    app.require_subcommand(1);
    Flags f;

    auto* point = app.add_subcommand("synth-point", "resonant transfer followed by a static hold");
    add_system(point, f);
    add_points(point, f, true);

    auto* circle = app.add_subcommand("synth-circle", "continuous envelope transfer onto a latitude circle");
    add_system(circle, f);
    add_points(circle, f, true);
    circle->add_option("--n", f.n, "envelope order");
    circle->add_option("--budget", f.budget, "transfer-time budget Ts (s)");
    circle->add_option("--class", f.control_class, "control class B or BC");

    auto* te = app.add_subcommand("time-energy", "transfer meeting time and energy budgets");
    add_system(te, f);
    add_points(te, f, true);
    te->add_option("--ts", f.ts, "time budget (s)");
    te->add_option("--es", f.es, "energy budget");

    auto* region = app.add_subcommand("region", "grid map of point-stabilizable targets");
    region->add_option("--config", f.config, "JSON run config");
    region->add_option("--ratio", f.ratio, "g0 / omega0");
    region->add_option("--res", f.res, "grid resolution for both angles");
    region->add_option("--n-theta", f.n_theta, "theta samples");
    region->add_option("--n-phi", f.n_phi, "phi samples");
    region->add_option("--out", f.out, "output CSV path, '-' for stdout");

    auto* ent = app.add_subcommand("entangle", "steer an encoded two-qubit state onto the maximally entangled circle");
    add_system(ent, f);
    add_points(ent, f, false);
    ent->add_option("--budget", f.budget, "transfer-time budget (s)");
    ent->add_option("--class", f.control_class, "control class B or BC");

    auto* sim = app.add_subcommand("simulate", "propagate a pulse file and write a trajectory CSV");
    sim->add_option("--pulse", f.pulse_path, "pulse JSON")->required();
    sim->add_option("--theta0", f.theta0, "initial polar angle (rad)");
    sim->add_option("--phi0", f.phi0, "initial phase (rad)");
    sim->add_option("--dt", f.dt, "time step (s)");
    sim->add_option("--horizon", f.horizon, "end time (s)");
    sim->add_flag("--oracle", f.oracle, "use the Runge-Kutta oracle");
    sim->add_option("--out", f.out, "output CSV path, '-' for stdout");

    auto* ver = app.add_subcommand("verify", "re-simulate a pulse file and emit a verification report");
    ver->add_option("--pulse", f.pulse_path, "pulse JSON")->required();
    ver->add_option("--report", f.report, "report JSON path");
    ver->add_option("--dt-fraction", f.dt_fraction, "oracle step as a fraction of the drift period");
    ver->add_option("--out", f.out, "same as --report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (point->parsed()) return cmd_synth_point(f);
        if (circle->parsed()) return cmd_synth_circle(f);
        if (te->parsed()) return cmd_time_energy(f);
        if (region->parsed()) return cmd_region(f);
        if (ent->parsed()) return cmd_entangle(f);
        if (sim->parsed()) return cmd_simulate(f);
        if (ver->parsed()) return cmd_verify(f);
    } catch (const Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
