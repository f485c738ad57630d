// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and
// workloads are pinned here; the process exits non-zero if any line fails.

#include <array>
#include <chrono>
#include <map>
#include <set>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qstab/propagator.hpp"
#include "qstab/stabilizability.hpp"
#include "qstab/synthesis.hpp"
#include "qstab/two_qubit.hpp"
#include "qstab/verifier.hpp"

using namespace qstab;

namespace {

constexpr double kFidelityTol = 1e-6;
constexpr double kThetaTol = 1e-6;
constexpr double kEquivalenceTol = 1e-7;
constexpr double kLeakageTol = 1e-9;
constexpr double kNormDriftTol = 1e-9;
constexpr double kEquilibriumTol = 1e-9;
constexpr double kOracleFraction = 1e-4; // oracle step / drift period
constexpr int kResidencePeriods = 10;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;
std::set<int> selected; // empty: run everything

void report(int id, const char* title, double budget_s, const std::function<Outcome()>& run) {
    if (!selected.empty() && !selected.count(id)) return;
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, "exception"};
    try {
        o = run();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= budget_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("[%s] %d %s: %s; %.1f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(),
                secs, budget_s);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double oracle_dt(const SystemParams& p) { return kOracleFraction * p.drift_period(); }

// ---- 1 ----------------------------------------------------------------------
Outcome point_transfer_grid() {
    const SystemParams params(1.0, 1.0);
    const int m = 10;
    const auto theta = [m](int i) { return kPi * i / (m - 1); };
    const auto phi = [m](int j) { return kTwoPi * j / m; };
    int cases = 0, bad = 0;
    double worst = 1.0;
    // grid points at the poles collapse to the same canonical pair; run each pair once
    std::map<std::array<double, 4>, double> done;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    const BlochPoint pf(theta(c), phi(d));
                    if (std::abs(std::cos(pf.theta())) < 1e-12 || !check_point_stabilizable(pf, params)) continue;
                    const BlochPoint p0(theta(a), phi(b));
                    ++cases;
                    const std::array<double, 4> key{p0.theta(), p0.phi(), pf.theta(), pf.phi()};
                    if (auto hit = done.find(key); hit != done.end()) {
                        bad += hit->second < 1.0 - kFidelityTol;
                        continue;
                    }
                    const SynthesisResult r = synth_point_hold(p0, pf, params, 0.0);
                    const double horizon = r.t_f + kResidencePeriods * params.drift_period();
                    const Trajectory tr =
                        oracle_propagate(r.pulse, bloch_to_state(p0), params, oracle_dt(params), horizon);
                    const StateVector target = bloch_to_state(pf);
                    double case_worst = 1.0;
                    for (const auto& s : tr.samples()) {
                        if (s.t >= r.t_f) case_worst = std::min(case_worst, fidelity(s.state, target));
                    }
                    done[key] = case_worst;
                    worst = std::min(worst, case_worst);
                    bad += case_worst < 1.0 - kFidelityTol;
                }
    return {bad == 0 && cases > 0,
            fmt("%.0f cases (%.0f distinct), %.0f failing, worst fidelity from t_f on = 1 - %.2e", cases,
                static_cast<double>(done.size()), bad, 1.0 - worst)};
}

// ---- 2 ----------------------------------------------------------------------
Outcome necessity_scan() {
    const SystemParams params(1.0, 0.5);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, kTwoPi);
    int found = 0, bad = 0;
    double smallest = 1e300;
    while (found < 50) {
        const BlochPoint pf(th(rng), ph(rng));
        if (check_point_stabilizable(pf, params)) continue;
        ++found;
        const StateVector s = bloch_to_state(pf);
        double best = 1e300;
        for (int i = 0; i <= 200; ++i) {
            const double ux = -params.g0() + 2.0 * params.g0() * i / 200;
            for (int j = 0; j <= 200; ++j) {
                const double uy = -params.g0() + 2.0 * params.g0() * j / 200;
                best = std::min(best, commutator_norm(effective_hamiltonian(params, ux, uy), s));
            }
        }
        smallest = std::min(smallest, best);
        bad += !(best > 1e-3 * params.omega0());
    }
    return {bad == 0, fmt("50 violating targets, smallest min ||[G, rho_f]||_F = %.3e (threshold 1e-3)", smallest)};
}

// ---- 3 and 4 ----------------------------------------------------------------
struct CircleCase {
    BlochPoint p0, pf;
};

std::vector<CircleCase> circle_cases() {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, kTwoPi);
    std::vector<CircleCase> out;
    for (int k = 0; k < 200; ++k) {
        const double t0 = th(rng), p0 = ph(rng), t1 = th(rng), p1 = ph(rng);
        out.push_back({BlochPoint(t0, p0), BlochPoint(t1, p1)});
    }
    return out;
}

struct CircleCheck {
    double fidelity_tf;
    double theta_dev;
};

CircleCheck run_circle(const SynthesisResult& r, const CircleCase& c, const SystemParams& params) {
    const double horizon = r.t_f + kResidencePeriods * params.drift_period();
    const Trajectory tr = oracle_propagate(r.pulse, bloch_to_state(c.p0), params, oracle_dt(params), horizon);
    return {fidelity(tr.at(r.t_f).state, bloch_to_state(c.pf)),
            check_circle_residence(tr, c.pf.theta(), r.t_f, kThetaTol).measured};
}

Outcome circle_residence() {
    const SystemParams params(1.0, 0.5);
    const int n = minimal_envelope_order(params, false);
    int bad = 0;
    double worst_f = 1.0, worst_theta = 0.0, worst_sup = 0.0, worst_jump = 0.0;
    for (const auto& c : circle_cases()) {
        const SynthesisResult r = synth_circle_continuous(c.p0, c.pf, params, 0.0, n);
        const CircleCheck k = run_circle(r, c, params);
        const Check bounds = check_bounds(r.pulse, params.g0());
        const Check cont = check_continuity(r.pulse);
        worst_f = std::min(worst_f, k.fidelity_tf);
        worst_theta = std::max(worst_theta, k.theta_dev);
        worst_sup = std::max(worst_sup, bounds.measured);
        worst_jump = std::max(worst_jump, cont.measured);
        bad += !(k.fidelity_tf >= 1 - kFidelityTol && k.theta_dev <= kThetaTol && bounds.pass && cont.pass);
    }
    return {bad == 0, fmt("200 cases (n = %.0f), %.0f failing; worst fidelity 1 - %.2e, worst |theta - theta_f| %.2e",
                          n, bad, 1 - worst_f, worst_theta) +
                          fmt("; max |u| %.4f (g0 0.5), max boundary jump %.1e", worst_sup, worst_jump)};
}

Outcome circle_time_bound() {
    const SystemParams params(1.0, 0.5);
    const double ts = 4 * kPi / params.g0() + 8 * kPi / params.omega0();
    int over_global = 0, over_case = 0, not_reached = 0;
    int per_case[5] = {0, 0, 0, 0, 0};
    double max_ratio = 0.0;
    for (const auto& c : circle_cases()) {
        const SynthesisResult r = synth_circle_within_budget(c.p0, c.pf, params, 0.0, ts);
        const double duration = r.t_f - r.t0;
        const int which = budget_case(sign_pair(c.p0, c.pf));
        ++per_case[which];
        over_global += !(duration <= ts);
        over_case += !(duration <= case_time_bound(which, params));
        max_ratio = std::max(max_ratio, duration / case_time_bound(which, params));
        const CircleCheck k = run_circle(r, c, params);
        not_reached += !(k.fidelity_tf >= 1 - kFidelityTol && k.theta_dev <= kThetaTol);
    }
    return {over_global == 0 && over_case == 0 && not_reached == 0,
            fmt("over 4pi/g0+8pi/omega0: %.0f, over per-case bound: %.0f, max duration/case bound %.4f, "
                "not reaching target: %.0f",
                over_global, over_case, max_ratio, not_reached) +
                fmt(" (cases 1-4: %.0f/%.0f/%.0f/%.0f)", per_case[1], per_case[2], per_case[3], per_case[4])};
}

// ---- 5 ----------------------------------------------------------------------
Outcome time_energy_grid() {
    const double w0 = 1.0;
    const SystemParams params(w0, 1.0);
    const double ts = 7 * kPi / w0, es = w0 * kPi;
    const int m = 20;
    int cases = 0, missing_two = 0, over_energy = 0, over_time = 0;
    double max_energy = 0.0, max_time = 0.0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    const BlochPoint p0(kPi * a / (m - 1), kTwoPi * b / m);
                    const BlochPoint pf(kPi * c / (m - 1), kTwoPi * d / m);
                    ++cases;
                    const auto ks = feasible_k_time_energy(p0, pf, params, ts, es);
                    missing_two += std::find(ks.begin(), ks.end(), 2) == ks.end();
                    const SynthesisResult r = synth_time_energy(p0, pf, params, 0.0, ts, es);
                    const double energy = pulse_energy(r.pulse, r.t0, r.t_f);
                    over_energy += !(energy <= es);
                    over_time += !(r.t_f - r.t0 <= ts);
                    max_energy = std::max(max_energy, energy);
                    max_time = std::max(max_time, r.t_f - r.t0);
                }
    return {missing_two == 0 && over_energy == 0 && over_time == 0,
            fmt("%.0f cases; k=2 missing in %.0f; energy over Es in %.0f (max %.6f of pi)", cases, missing_two,
                over_energy, max_energy / kPi) +
                fmt("; time over Ts in %.0f (max %.6f of 7pi)", over_time, max_time / ts)};
}

// ---- 6 ----------------------------------------------------------------------
Outcome region_maps() {
    const int res = 512;
    double previous = -1.0;
    bool monotone = true;
    int asymmetric = 0;
    double column = 0.0;
    std::string fractions;
    for (double ratio : {0.1, 0.2, 0.5, 1.0}) {
        const RegionGrid g = region_grid(ratio, res, res);
        monotone = monotone && g.fraction() > previous;
        previous = g.fraction();
        fractions += fmt("%.4f ", g.fraction());
        for (int i = 0; i < res; ++i)
            for (int j = 0; j < res; ++j) {
                asymmetric += g.cell(i, j) != g.cell(i, (j + res / 4) % res);
                asymmetric += g.cell(i, j) != g.cell(res - 1 - i, j);
            }
        if (ratio == 1.0) column = g.column_fraction(0);
    }
    const bool column_ok = std::abs(column - 0.5) <= 1.0 / res;
    return {monotone && asymmetric == 0 && column_ok,
            "fractions " + fractions + fmt("(monotone %.0f), asymmetric cells %.0f, phi=0 column at ratio 1 = %.5f",
                                           monotone, asymmetric, column)};
}

// ---- 7 ----------------------------------------------------------------------
Outcome two_qubit_equivalence() {
    const SystemParams params(1.0, 1.0);
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, kTwoPi);
    const double period = kTwoPi / (4 * params.omega0());
    double worst_equiv = 1.0, worst_leak = 0.0, worst_conc = 1.0;
    int bad = 0;
    for (int k = 0; k < 50; ++k) {
        const BlochPoint p0(th(rng), ph(rng));
        const EntanglerResult r = synth_entangler(logical_state(p0), params, std::nullopt,
                                                  ControlClass::BoundedContinuous, 0.0, ph(rng));
        const double horizon = r.equivalent.t_f + kResidencePeriods * period;
        const PropagationOptions opt{kOracleFraction * period, 1};
        const Trajectory two = propagate(logical_dynamics(r.lifted.logical(), params.omega0()),
                                         bloch_to_state(r.initial), opt, horizon);
        const Trajectory four = propagate(two_qubit_dynamics(r.lifted, params.omega0()),
                                          logical_state(r.initial), opt, horizon);
        double equiv = 1.0, leak = 0.0;
        for (std::size_t i = 0; i < two.size() && i < four.size(); ++i) {
            equiv = std::min(equiv, fidelity(StateVector::unchecked(logical_amplitudes(four.samples()[i].state)),
                                             two.samples()[i].state));
            leak = std::max(leak, std::abs(leakage(four.samples()[i].state)));
        }
        const Trajectory oracle = oracle_propagate(two_qubit_dynamics(r.lifted, params.omega0()),
                                                   logical_state(r.initial), {opt.dt, 1u << 30},
                                                   r.equivalent.t_f);
        const StateVector& end = oracle.back().state;
        const double conc = concurrence(end);
        worst_equiv = std::min(worst_equiv, equiv);
        worst_leak = std::max(worst_leak, leak);
        worst_conc = std::min(worst_conc, conc);
        bad += !(two.size() == four.size() && equiv >= 1 - kEquivalenceTol && leak <= kLeakageTol &&
                 em_membership(end, kFidelityTol) && conc >= 1 - kFidelityTol);
    }
    return {bad == 0, fmt("50 encoded states, %.0f failing; worst equivalence 1 - %.2e, max leakage %.2e, "
                          "min concurrence 1 - %.2e",
                          bad, 1 - worst_equiv, worst_leak, 1 - worst_conc)};
}

// ---- 8 ----------------------------------------------------------------------
Outcome equilibrium_predicate() {
    std::mt19937_64 rng(88);
    std::normal_distribution<double> n(0.0, 1.0);
    int disagreements = 0, equilibria = 0, total = 0;
    for (int dim : {2, 4}) {
        for (int k = 0; k < 10000; ++k) {
            Eigen::MatrixXcd a(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) a(i, j) = Complex(n(rng), n(rng));
            const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
            Eigen::VectorXcd v(dim);
            if (k % 2 == 0) {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
                v = es.eigenvectors().col(k / 2 % dim);
            } else {
                for (int i = 0; i < dim; ++i) v(i) = Complex(n(rng), n(rng));
            }
            v.normalize();
            // eigenvector residual computed directly
            const Complex mean = v.dot(h * v);
            const double residual = (h * v - mean * v).norm();
            const bool eig = residual <= kEquilibriumTol;
            const bool eq = is_equilibrium(Operator(h), StateVector(Vector(v)), kEquilibriumTol);
            disagreements += eig != eq;
            equilibria += eq;
            ++total;
        }
    }
    return {disagreements == 0,
            fmt("%.0f instances (2x2 and 4x4), %.0f equilibria, %.0f disagreements", total, equilibria,
                disagreements)};
}

// ---- 9 ----------------------------------------------------------------------
Outcome integrator_integrity() {
    struct Regression {
        const char* name;
        ControlPulse pulse;
        StateVector s0;
        SystemParams params;
        double t_end;
        bool two_qubit;
    };
    std::vector<Regression> pulses;
    {
        const SystemParams p(1.0, 0.1);
        const BlochPoint a(kHalfPi, 0.0), b(0.0, 0.0);
        const SynthesisResult r = synth_point_hold(a, b, p, 0.0);
        pulses.push_back({"point", r.pulse, bloch_to_state(a), p, r.t_f + 10 * p.drift_period(), false});
    }
    {
        const SystemParams p(1.0, 0.5);
        const BlochPoint a(0.4, 1.0), b(2.0, 3.0);
        const SynthesisResult r = synth_circle_continuous(a, b, p, 0.0, 17);
        pulses.push_back({"circle", r.pulse, bloch_to_state(a), p, r.t_f + 10 * p.drift_period(), false});
        const SynthesisResult q = synth_circle_within_budget(b, a, p, 0.0, 60.0);
        pulses.push_back({"circle-budget", q.pulse, bloch_to_state(b), p, q.t_f + 10 * p.drift_period(), false});
    }
    {
        const SystemParams p(1.0, 1.0);
        const BlochPoint a(0.8, 0.3), b(1.9, 2.2);
        const SynthesisResult r = synth_time_energy(a, b, p, 0.0, 7 * kPi, kPi);
        pulses.push_back({"time-energy", r.pulse, bloch_to_state(a), p, r.t_f + 10 * p.drift_period(), false});
        const EntanglerResult e = synth_entangler(a, p, kPi + kTwoPi, ControlClass::BoundedContinuous);
        pulses.push_back({"entangler", e.lifted.logical(), logical_state(a), p,
                          e.equivalent.t_f + 10 * p.drift_period() / 4, true});
    }
    double worst_drift = 0.0, worst_agree = 1.0;
    for (const auto& r : pulses) {
        const Dynamics d = r.two_qubit ? two_qubit_dynamics(LiftedPulse(r.pulse), r.params.omega0())
                                       : qubit_dynamics(r.pulse, r.params);
        const double dt = 1e-4 * r.params.drift_period() / (r.two_qubit ? 4 : 1);
        const Trajectory a = propagate(d, r.s0, {dt, 1u << 30}, r.t_end);
        const Trajectory b = oracle_propagate(d, r.s0, {dt, 1u << 30}, r.t_end);
        worst_drift = std::max({worst_drift, a.max_norm_drift(), b.max_norm_drift()});
        worst_agree = std::min(worst_agree, fidelity(a.back().state, b.back().state));
    }
    // Richardson check on the circle pulse
    const Regression& ref = pulses[1];
    const Dynamics d = qubit_dynamics(ref.pulse, ref.params);
    const auto final_state = [&](double dt) { return oracle_propagate(d, ref.s0, {dt, 1u << 30}, ref.t_end).back().state; };
    const StateVector s1 = final_state(0.04), s2 = final_state(0.02), s3 = final_state(0.01);
    const double ratio = (s1.amplitudes() - s2.amplitudes()).norm() / (s2.amplitudes() - s3.amplitudes()).norm();
    const bool pass = worst_drift <= kNormDriftTol && worst_agree >= 1 - kEquivalenceTol && std::abs(ratio - 16) <= 3;
    return {pass, fmt("%.0f regression pulses, max norm drift %.2e, worst propagate/oracle fidelity 1 - %.2e, "
                      "convergence ratio %.2f",
                      static_cast<double>(pulses.size()), worst_drift, 1 - worst_agree, ratio)};
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    report(1, "point transfer and static hold on the 10^4 grid", 300, point_transfer_grid);
    report(2, "no bounded static hold for violating targets", 120, necessity_scan);
    report(3, "continuous envelope transfer and circle residence", 600, circle_residence);
    report(4, "budgeted envelope transfer time bounds", 600, circle_time_bound);
    report(5, "time-energy feasibility with Ts = 7pi/omega0, Es = omega0 pi", 600, time_energy_grid);
    report(6, "stabilizable region maps", 600, region_maps);
    report(7, "two-qubit restriction equivalence and entangler", 300, two_qubit_equivalence);
    report(8, "equilibrium predicate versus eigenvector residual", 600, equilibrium_predicate);
    report(9, "integrator integrity", 600, integrator_integrity);
    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
