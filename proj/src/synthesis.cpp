#include "qstab/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "qstab/errors.hpp"
#include "qstab/stabilizability.hpp"

namespace qstab {

std::string to_string(ControlClass c) { return c == ControlClass::Bounded ? "B" : "BC"; }

std::string to_string(TargetKind k) { return k == TargetKind::Point ? "point" : "circle"; }

ControlClass control_class_from_string(const std::string& s) {
    if (s == "B") return ControlClass::Bounded;
    if (s == "BC") return ControlClass::BoundedContinuous;
    throw ParameterError("control class must be B or BC, got '" + s + "'");
}

TargetKind target_kind_from_string(const std::string& s) {
    if (s == "point") return TargetKind::Point;
    if (s == "circle") return TargetKind::Circle;
    throw ParameterError("target kind must be point or circle, got '" + s + "'");
}

int budget_case(const SignPair& s) {
    if (!s.phase_late) return s.theta_ascending ? 2 : 1;
    return s.theta_ascending ? 4 : 3;
}

SignPair sign_pair(const BlochPoint& p0, const BlochPoint& pf) {
    return SignPair{p0.phi() >= kHalfPi, pf.theta() >= p0.theta()};
}

// ---- point stabilization --------------------------------------------------

double fap_phase(const BlochPoint& p0, const BlochPoint& pf, int k) {
    const double c = 0.5 * (p0.theta() + pf.theta());
    return kTwoPi * k - pf.phi() + p0.phi() + kPi * std::cos(c);
}

double fap_k_lower_bound(const BlochPoint& p0, const BlochPoint& pf, const SystemParams& params) {
    const double c = 0.5 * (p0.theta() + pf.theta());
    return (pf.phi() - p0.phi() - kPi * std::cos(c)) / kTwoPi +
           params.omega0() * std::sin(c) / (2.0 * params.g0());
}

int minimal_k_fap(const BlochPoint& p0, const BlochPoint& pf, const SystemParams& params) {
    int k = static_cast<int>(std::ceil(fap_k_lower_bound(p0, pf, params)));
    while (!(fap_phase(p0, pf, k) > 0.0)) ++k;
    return k;
}

Resonant resonant_transfer(const BlochPoint& p0, const BlochPoint& pf, double omega0, int k,
                           double t0) {
    const double phi_fap = fap_phase(p0, pf, k);
    if (!(phi_fap > 0.0)) throw ParameterError("winding number gives a non-positive transfer phase");
    const double c = 0.5 * (p0.theta() + pf.theta());
    Resonant r;
    r.g = omega0 * kPi * std::sin(c) / phi_fap;
    r.omega_rf = -(kTwoPi * k - pf.phi() + p0.phi()) * omega0 / phi_fap;
    r.phi1 = p0.phi();
    r.t_start = t0;
    r.t_end = t0 + phi_fap / omega0;
    return r;
}

SynthesisResult synth_point_hold(const BlochPoint& p0, const BlochPoint& pf,
                                 const SystemParams& params, double t0) {
    const Controls hold = hold_controls(pf, params);
    SynthesisResult out;
    out.t0 = t0;
    out.target = TargetKind::Point;
    out.control_class = ControlClass::Bounded;
    if (p0 == pf) {
        out.pulse = ControlPulse({StaticHold{hold.ux, hold.uy, t0, kUnbounded}});
        out.t_f = t0;
        out.design.construction = "point-hold/identity";
        return out;
    }
    const int k = minimal_k_fap(p0, pf, params);
    const Resonant r = resonant_transfer(p0, pf, params.omega0(), k, t0);
    out.pulse = ControlPulse({r, StaticHold{hold.ux, hold.uy, r.t_end, kUnbounded}});
    out.t_f = r.t_end;
    out.design.construction = "point-hold";
    out.design.k_fap = k;
    out.design.g = r.g;
    out.design.omega_rf = r.omega_rf;
    out.design.phi_fap = fap_phase(p0, pf, k);
    return out;
}

// ---- circle stabilization -------------------------------------------------

int minimal_envelope_order(const SystemParams& params, bool reduced_rotation) {
    const double threshold = (reduced_rotation ? 2.0 : 8.0) * params.omega0() / params.g0();
    return static_cast<int>(std::floor(threshold)) + 1;
}

namespace {

struct EnvelopePlan {
    bool late_wait;     // start the envelope at phase pi/2 without the extra 2pi wait
    bool reduced;       // rotate by theta_f - theta0 instead of 4pi + theta_f - theta0
};

SynthesisResult envelope_transfer(const BlochPoint& p0, const BlochPoint& pf,
                                  const SystemParams& params, double t0, int n,
                                  EnvelopePlan plan) {
    if (n < 1) throw ParameterError("envelope order must be >= 1");
    const double w0 = params.omega0();
    SynthesisResult out;
    out.t0 = t0;
    out.target = TargetKind::Circle;
    out.control_class = ControlClass::BoundedContinuous;
    if (p0 == pf) {
        out.pulse = ControlPulse({Silence{t0, kUnbounded}});
        out.t_f = t0;
        out.design.construction = "circle-envelope/identity";
        return out;
    }

    const double rotation = plan.reduced ? pf.theta() - p0.theta()
                                         : 2.0 * kTwoPi + pf.theta() - p0.theta();
    const double wait_phase = plan.late_wait ? p0.phi() - kHalfPi : p0.phi() + 3.0 * kHalfPi;
    const double t1 = t0 + wait_phase / w0;

    const double ratio = (n + 1.0) / n;
    const double k_min =
        ratio * w0 / params.g0() * rotation / kTwoPi + pf.phi() / kTwoPi - 0.25;
    const int k = std::max(1, static_cast<int>(std::ceil(k_min)));
    const double g = w0 * ratio * rotation / (kTwoPi * k + kHalfPi - pf.phi());
    const double tf_phase = plan.late_wait ? kTwoPi * k - pf.phi() + p0.phi()
                                           : kTwoPi * k + kTwoPi - pf.phi() + p0.phi();
    const double tf = t0 + tf_phase / w0;

    std::vector<Segment> segs;
    if (t1 > t0) segs.push_back(Silence{t0, t1});
    segs.push_back(Envelope{g, n, w0, t1, -1, t1, tf});
    segs.push_back(Silence{tf, kUnbounded});
    out.pulse = ControlPulse(std::move(segs));
    out.t_f = tf;
    out.design.construction = "circle-envelope";
    out.design.k_dn = k;
    out.design.n = n;
    out.design.g = g;
    out.design.t1 = t1;
    return out;
}

} // namespace

SynthesisResult synth_circle_continuous(const BlochPoint& p0, const BlochPoint& pf,
                                        const SystemParams& params, double t0, int n) {
    return envelope_transfer(p0, pf, params, t0, n, EnvelopePlan{false, false});
}

double case_time_bound(int budget_case, const SystemParams& params) {
    const double inv_g = kPi / params.g0();
    const double inv_w = kPi / params.omega0();
    switch (budget_case) {
    case 1: return 4.0 * inv_g + 8.0 * inv_w;
    case 2: return inv_g + 8.0 * inv_w;
    case 3: return 4.0 * inv_g + 6.0 * inv_w;
    case 4: return inv_g + 6.0 * inv_w;
    default: throw ParameterError("budget case must be 1..4");
    }
}

double transition_time_bound(std::optional<SignPair> case_inputs, const SystemParams& params,
                             ControlClass control_class) {
    const double inv_g = kPi / params.g0();
    const double inv_w = kPi / params.omega0();
    const double global_bc = 4.0 * inv_g + 8.0 * inv_w;
    const double global_b = std::min(inv_g + 8.0 * inv_w, 4.0 * inv_g + 6.0 * inv_w);
    if (!case_inputs) {
        return control_class == ControlClass::BoundedContinuous ? global_bc : global_b;
    }
    const double per_case = case_time_bound(budget_case(*case_inputs), params);
    return control_class == ControlClass::BoundedContinuous ? per_case
                                                            : std::min(per_case, global_b);
}

SynthesisResult synth_circle_case_plan(const BlochPoint& p0, const BlochPoint& pf,
                                       const SystemParams& params, double t0,
                                       std::optional<int> n) {
    const SignPair signs = sign_pair(p0, pf);
    const int which = budget_case(signs);
    const int order = n.value_or(minimal_envelope_order(params, signs.theta_ascending));
    SynthesisResult out = envelope_transfer(p0, pf, params, t0, order,
                                            EnvelopePlan{signs.phase_late, signs.theta_ascending});
    out.design.construction += "/budget";
    out.design.budget_case = which;
    out.claimed_bound = case_time_bound(which, params);
    return out;
}

SynthesisResult synth_circle_within_budget(const BlochPoint& p0, const BlochPoint& pf,
                                           const SystemParams& params, double t0, double ts,
                                           std::optional<int> n) {
    const double needed = transition_time_bound(std::nullopt, params, ControlClass::BoundedContinuous);
    if (!(ts >= needed)) {
        throw TimeBudgetInfeasible("time budget " + std::to_string(ts) +
                                   " is below the sufficient bound 4pi/g0 + 8pi/omega0 = " +
                                   std::to_string(needed));
    }
    return synth_circle_case_plan(p0, pf, params, t0, n);
}

// ---- time-energy constrained transfer --------------------------------------

TimeEnergyBounds time_energy_bounds(const BlochPoint& p0, const BlochPoint& pf, double omega0,
                                    double ts, double es) {
    const double c = 0.5 * (p0.theta() + pf.theta());
    const double s = std::sin(c);
    TimeEnergyBounds b;
    b.energy_lower = omega0 * kPi * s * s / (2.0 * es) + (pf.phi() - p0.phi()) / kTwoPi -
                     0.5 * std::cos(c);
    b.time_upper = (ts * omega0 + pf.phi() - p0.phi() - kPi * std::cos(c)) / kTwoPi;
    return b;
}

std::vector<int> feasible_k_time_energy(const BlochPoint& p0, const BlochPoint& pf,
                                        const SystemParams& params, double ts, double es) {
    if (!(ts > 0.0) || !(es > 0.0)) throw ParameterError("time and energy budgets must be positive");
    const TimeEnergyBounds b = time_energy_bounds(p0, pf, params.omega0(), ts, es);
    std::vector<int> ks;
    const double lo = std::ceil(b.energy_lower);
    const double hi = std::floor(b.time_upper);
    if (hi < lo) return ks;
    if (hi - lo > 1e7) throw ParameterError("time budget admits too many winding numbers");
    for (auto k = static_cast<int>(lo); k <= static_cast<int>(hi); ++k) {
        if (fap_phase(p0, pf, k) > 0.0) ks.push_back(k);
    }
    return ks;
}

double resonant_transfer_energy(const BlochPoint& p0, const BlochPoint& pf, double omega0, int k) {
    const double s = std::sin(0.5 * (p0.theta() + pf.theta()));
    return omega0 * kPi * kPi * s * s / fap_phase(p0, pf, k);
}

SynthesisResult synth_time_energy(const BlochPoint& p0, const BlochPoint& pf,
                                  const SystemParams& params, double t0, double ts, double es) {
    const std::vector<int> ks = feasible_k_time_energy(p0, pf, params, ts, es);
    const double w0 = params.omega0();
    for (int k : ks) {
        const double duration = fap_phase(p0, pf, k) / w0;
        const double energy = resonant_transfer_energy(p0, pf, w0, k);
        if (duration > ts || energy > es) continue; // rounding at an exact budget boundary
        const Resonant r = resonant_transfer(p0, pf, w0, k, t0);
        SynthesisResult out;
        out.pulse = ControlPulse({r, Silence{r.t_end, kUnbounded}});
        out.t0 = t0;
        out.t_f = r.t_end;
        out.target = TargetKind::Circle;
        out.control_class = ControlClass::Bounded;
        out.design.construction = "time-energy";
        out.design.k_fap = k;
        out.design.g = r.g;
        out.design.omega_rf = r.omega_rf;
        out.design.phi_fap = fap_phase(p0, pf, k);
        out.claimed_bound = ts;
        out.claimed_energy = energy;
        if (std::abs(r.g) > params.g0()) out.design.construction += "/exceeds-soft-bound";
        return out;
    }
    throw TimeBudgetInfeasible("no winding number satisfies both the time and energy budgets");
}

bool exceeds_soft_bound(const SynthesisResult& r, const SystemParams& params) {
    return std::abs(r.design.g) > params.g0();
}

} // namespace qstab
