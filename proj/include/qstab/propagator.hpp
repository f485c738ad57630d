#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "qstab/pulse.hpp"
#include "qstab/state.hpp"

namespace qstab {

struct TrajectorySample {
    double t;
    StateVector state;
    double ux;
    double uy;
};

/// Ordered samples of a propagated state; times strictly increase.
class Trajectory {
public:
    void push(TrajectorySample s);

    const std::vector<TrajectorySample>& samples() const { return samples_; }
    bool empty() const { return samples_.empty(); }
    std::size_t size() const { return samples_.size(); }
    const TrajectorySample& front() const { return samples_.front(); }
    const TrajectorySample& back() const { return samples_.back(); }

    /// Sample recorded exactly at t; throws IntervalError if absent.
    const TrajectorySample& at(double t) const;

    /// Largest | ||psi|| - 1 | over all samples.
    double max_norm_drift() const;

private:
    std::vector<TrajectorySample> samples_;
};

/// Generator G(t) of d/dt|psi> = i G(t) |psi>, together with the controls
/// that produced it (recorded in trajectory samples). The generator takes the
/// evaluation time and a locator time strictly inside the current step; the
/// locator picks the active segment so one-sided limits at discontinuities
/// are respected.
struct Dynamics {
    std::function<Operator(double t, double locate)> generator;
    std::function<Controls(double)> controls;
    std::vector<double> breakpoints;
    double t_start;
    double t_end;
};

struct PropagationOptions {
    double dt;
    /// Keep every stride-th step; breakpoints and the final time are always kept.
    std::size_t stride = 1;
};

/// Default step: one ten-thousandth of a drift period.
double default_time_step(const SystemParams& params);

/// exp(i G h) for Hermitian G: Pauli closed form in dimension 2,
/// scaling-and-squaring in dimension 4.
Operator unitary_step(const Operator& generator, double h);

/// Midpoint-frozen exponential integrator. Unitary by construction; the
/// state is never renormalized.
Trajectory propagate(const Dynamics& dynamics, const StateVector& s0,
                     const PropagationOptions& options, double t_end);

/// Classical fourth-order Runge-Kutta on the same right-hand side, without
/// renormalization. Used as an independent cross-check only.
Trajectory oracle_propagate(const Dynamics& dynamics, const StateVector& s0,
                            const PropagationOptions& options, double t_end);

/// Single-qubit dynamics G(t) = omega0 S_z + u_x(t) S_x + u_y(t) S_y.
Dynamics qubit_dynamics(const ControlPulse& pulse, const SystemParams& params);

Trajectory propagate(const ControlPulse& pulse, const StateVector& s0,
                     const SystemParams& params, double dt, double t_end,
                     std::size_t stride = 1);

Trajectory oracle_propagate(const ControlPulse& pulse, const StateVector& s0,
                            const SystemParams& params, double dt, double t_end,
                            std::size_t stride = 1);

} // namespace qstab
