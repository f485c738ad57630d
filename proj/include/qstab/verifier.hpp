#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qstab/propagator.hpp"
#include "qstab/pulse.hpp"
#include "qstab/synthesis.hpp"
#include "qstab/two_qubit.hpp"

namespace qstab {

struct Check {
    std::string name;
    double claimed = 0.0;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct VerificationReport {
    std::vector<Check> checks;
    bool overall = true;
    nlohmann::ordered_json provenance = nlohmann::ordered_json::object();

    void add(Check c);
    const Check* find(const std::string& name) const;
};

struct Budgets {
    std::optional<double> ts;
    std::optional<double> es;
};

struct VerifyOptions {
    double fidelity_tol = 1e-6;
    /// Oracle step as a fraction of the drift period.
    double dt_fraction = 1e-4;
    /// Residence horizon after t_f, in drift periods.
    int residence_periods = 10;
    double residence_tol = 1e-6;
    std::size_t stride = 1;
};

/// Supremum of max(|u_x|, |u_y|) over [t_from, t_to], from per-segment
/// closed-form extrema plus dense sampling and local refinement.
double control_sup(const ControlPulse& pulse, double t_from, double t_to,
                   std::size_t samples = 100000);

/// Pass iff control_sup <= g0 + 1e-12. Unbounded final segments are constant.
Check check_bounds(const ControlPulse& pulse, double g0);

/// Pass iff the one-sided limits of (u_x, u_y) agree within 1e-12 at every
/// internal segment boundary; measured is the largest jump.
Check check_continuity(const ControlPulse& pulse);

/// Pass iff |theta(t) - theta_f| <= tol for every sample at or after from_t.
/// Throws IntervalError if the trajectory ends before from_t.
Check check_circle_residence(const Trajectory& traj, double theta_f, double from_t, double tol);

/// Propagates the pulse with the RK4 oracle and certifies target fidelity at
/// t_f, control bounds, the claimed continuity class, residence on the target
/// point or circle for the configured number of drift periods, the claimed
/// per-case time bound, and the optional time and energy budgets.
VerificationReport verify_synthesis(const SynthesisResult& result, const BlochPoint& p0,
                                    const BlochPoint& pf, const SystemParams& params,
                                    const Budgets& budgets = {}, const VerifyOptions& options = {});

/// Two-qubit counterpart: 4-dim oracle propagation of the lifted pulse, E_M
/// membership and concurrence at t_f, leakage along the whole trajectory,
/// residence on E_M, bounds, continuity class and the budget.
VerificationReport verify_entangler(const EntanglerResult& result, const SystemParams& params,
                                    const VerifyOptions& options = {});

nlohmann::ordered_json design_to_json(const Design& d);

} // namespace qstab
