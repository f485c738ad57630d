#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qstab/pulse.hpp"
#include "qstab/state.hpp"

namespace qstab {

/// Omega_B: bounded controls. Omega_BC: bounded and time-continuous.
enum class ControlClass { Bounded, BoundedContinuous };

/// What the pulse must hold after t_f: a single point, or the latitude
/// circle of constant theta_f.
enum class TargetKind { Point, Circle };

std::string to_string(ControlClass c);
std::string to_string(TargetKind k);
ControlClass control_class_from_string(const std::string& s);
TargetKind target_kind_from_string(const std::string& s);

/// Sign pattern that selects the time-bound case of the envelope transfer.
struct SignPair {
    bool phase_late;      // phi0 >= pi/2
    bool theta_ascending; // theta_f >= theta0
};

/// Cases 1-4: (early, descending), (early, ascending), (late, descending), (late, ascending).
int budget_case(const SignPair& s);
SignPair sign_pair(const BlochPoint& p0, const BlochPoint& pf);

/// Chosen integers and reals of a construction, echoed into reports.
struct Design {
    std::string construction;
    std::optional<int> k_fap;
    std::optional<int> k_dn;
    std::optional<int> n;
    std::optional<int> budget_case;
    double g = 0.0;
    std::optional<double> omega_rf;
    std::optional<double> phi_fap;
    std::optional<double> t1;
};

struct SynthesisResult {
    ControlPulse pulse;
    double t0 = 0.0;
    /// End of the last transfer segment; equals t0 for a degenerate transfer.
    double t_f = 0.0;
    TargetKind target = TargetKind::Point;
    ControlClass control_class = ControlClass::Bounded;
    Design design;
    std::optional<double> claimed_bound;
    std::optional<double> claimed_energy;
};

// ---- point stabilization by resonant transfer + static hold -------------

/// phi_k^fap = 2 k pi - phi_f + phi_0 + pi cos((theta0 + theta_f) / 2).
double fap_phase(const BlochPoint& p0, const BlochPoint& pf, int k);

/// Right-hand side of the k_fap admissibility inequality: g <= g0 iff k >= this.
double fap_k_lower_bound(const BlochPoint& p0, const BlochPoint& pf, const SystemParams& params);

/// Smallest k with k >= fap_k_lower_bound and fap_phase(k) > 0.
int minimal_k_fap(const BlochPoint& p0, const BlochPoint& pf, const SystemParams& params);

/// Resonant transfer of duration phi_k^fap / omega0 using winding number k.
Resonant resonant_transfer(const BlochPoint& p0, const BlochPoint& pf, double omega0, int k,
                           double t0);

/// Resonant transfer to pf followed by the static hold that makes pf an
/// eigenvector of the total generator. Throws NotStabilizable if pf admits no
/// bounded hold (including the equator).
SynthesisResult synth_point_hold(const BlochPoint& p0, const BlochPoint& pf,
                                 const SystemParams& params, double t0);

// ---- circle stabilization by polynomial-envelope transfer ----------------

/// Smallest order strictly above the threshold 8 omega0/g0 (full rotation)
/// or 2 omega0/g0 (reduced rotation).
int minimal_envelope_order(const SystemParams& params, bool reduced_rotation);

/// Silence until the state's phase reaches pi/2, envelope transfer around
/// the x axis of the rotating frame, then free drift on the target circle.
/// Controls are continuous everywhere. Requires n >= 1.
SynthesisResult synth_circle_continuous(const BlochPoint& p0, const BlochPoint& pf,
                                        const SystemParams& params, double t0, int n);

/// Time-budgeted envelope transfer: uses the shorter wait when phi0 >= pi/2
/// and the reduced rotation when theta_f >= theta0, with n chosen per case
/// unless given. Throws TimeBudgetInfeasible when ts is below
/// 4 pi/g0 + 8 pi/omega0.
SynthesisResult synth_circle_within_budget(const BlochPoint& p0, const BlochPoint& pf,
                                           const SystemParams& params, double t0, double ts,
                                           std::optional<int> n = std::nullopt);

/// The construction used by synth_circle_within_budget, without the budget
/// precondition. claimed_bound is the per-case bound.
SynthesisResult synth_circle_case_plan(const BlochPoint& p0, const BlochPoint& pf,
                                       const SystemParams& params, double t0,
                                       std::optional<int> n = std::nullopt);

/// Per-case sufficient transfer-time bound of the envelope construction.
double case_time_bound(int budget_case, const SystemParams& params);

/// Sufficient time bound for circle stabilization. Without a case: global
/// bound of the class (Omega_BC: 4pi/g0 + 8pi/omega0; Omega_B: the smaller
/// of pi/g0 + 8pi/omega0 and 4pi/g0 + 6pi/omega0). With a case: the per-case
/// bound, tightened by the Omega_B global bound for bounded controls.
double transition_time_bound(std::optional<SignPair> case_inputs, const SystemParams& params,
                             ControlClass control_class);

// ---- time-energy constrained transfer ----------------------------------

struct TimeEnergyBounds {
    double energy_lower; // k must be >= this for the energy budget
    double time_upper;   // k must be <= this for the time budget
};

TimeEnergyBounds time_energy_bounds(const BlochPoint& p0, const BlochPoint& pf, double omega0,
                                    double ts, double es);

/// All integers k meeting the energy lower bound, the time upper bound and
/// positivity of phi_k^fap. Empty when the budgets are incompatible.
std::vector<int> feasible_k_time_energy(const BlochPoint& p0, const BlochPoint& pf,
                                        const SystemParams& params, double ts, double es);

/// Closed-form energy g^2 (t_f - t0) of the resonant transfer with winding k.
double resonant_transfer_energy(const BlochPoint& p0, const BlochPoint& pf, double omega0, int k);

/// Resonant transfer with the smallest feasible k whose closed-form time and
/// energy meet the budgets, followed by free drift on the target circle. The
/// controls are not bounded by g0; params.g0() acts as a soft bound only
/// and design.construction records when it is exceeded.
SynthesisResult synth_time_energy(const BlochPoint& p0, const BlochPoint& pf,
                                  const SystemParams& params, double t0, double ts, double es);

/// True if the synthesized amplitude exceeds the soft bound g0.
bool exceeds_soft_bound(const SynthesisResult& r, const SystemParams& params);

} // namespace qstab
