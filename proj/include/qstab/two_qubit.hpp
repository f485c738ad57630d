#pragma once

#include <optional>

#include "qstab/propagator.hpp"
#include "qstab/pulse.hpp"
#include "qstab/state.hpp"
#include "qstab/synthesis.hpp"

namespace qstab {

// Two-qubit basis order: |00>, |01>, |10>, |11>, qubit 1 most significant.

Operator kron(const Operator& a, const Operator& b);

/// Encoded qubit |0^L> = |0_1 1_2>, |1^L> = |1_1 0_2> with its Pauli operators.
struct LogicalFrame {
    StateVector zero;
    StateVector one;
    Operator sigma_x;
    Operator sigma_y;
    Operator sigma_z;
};

/// Builds the frame and checks the two-qubit operator identities entrywise
/// (throws std::logic_error if they fail):
///   sigma_z^L = (sigma_z x I - I x sigma_z) / 2
///   sigma_x^L = (sigma_x x sigma_x + sigma_y x sigma_y) / 2
///   sigma_y^L = (sigma_y x sigma_x - sigma_x x sigma_y) / 2
const LogicalFrame& build_logical_frame();

/// cos(theta/2)|0^L> + e^{i phi} sin(theta/2)|1^L>.
StateVector logical_state(const BlochPoint& p);

/// Logical Bloch point of a 4-dim state, from its projection on the encoded
/// subspace. Throws SubspaceError if the projection vanishes.
BlochPoint logical_bloch(const StateVector& s);

/// 2-dim logical state (<0^L|psi>, <1^L|psi>), not renormalized.
Vector logical_amplitudes(const StateVector& s);

/// 1 - |<0^L|psi>|^2 - |<1^L|psi>|^2.
double leakage(const StateVector& s);

struct LiftedCoefficients {
    double xx = 0.0;
    double xy = 0.0;
    double yx = 0.0;
    double yy = 0.0;
};

/// Logical pulse (u_x^L, u_y^L) and the map to the four coupling
/// coefficients u_ij of sigma_i x sigma_j.
class LiftedPulse {
public:
    explicit LiftedPulse(ControlPulse logical) : logical_(std::move(logical)) {}

    const ControlPulse& logical() const { return logical_; }

    /// u_xx = u_yy = u_x^L and u_yx = -u_xy = u_y^L.
    static LiftedCoefficients lift(const Controls& logical);
    LiftedCoefficients coefficients(double t) const;

private:
    ControlPulse logical_;
};

LiftedPulse lift_logical_controls(const ControlPulse& logical);

/// H0 + sum u_ij sigma_i x sigma_j with H0 = -omega0 sigma_z^1 + omega0 sigma_z^2.
Operator two_qubit_hamiltonian(double omega0, const LiftedCoefficients& u);

/// Effective qubit Hamiltonian on the encoded subspace:
/// 4[-omega0 S_z + u_x^L S_x + u_y^L S_y], with i d/dt|psi^L> = H^L|psi^L>.
Operator logical_hamiltonian(double omega0, const Controls& logical);

/// Full 4-dim dynamics of the coupled pair under a lifted pulse
/// (generator -H for d/dt|psi> = i G |psi>).
Dynamics two_qubit_dynamics(const LiftedPulse& pulse, double omega0);

/// 2-dim dynamics of the encoded qubit under the logical pulse.
Dynamics logical_dynamics(const ControlPulse& logical, double omega0);

/// Parameters of the equivalent single-qubit problem: frequency 4 omega0 and
/// bound 4 g0. Logical controls are the equivalent controls times -1/4.
SystemParams equivalent_qubit_params(const SystemParams& params);
inline constexpr double kLogicalControlScale = -0.25;

/// |<psi| sigma_y x sigma_y |psi*>|.
double concurrence(const StateVector& s);

/// Leakage and both logical amplitude moduli within tol of (0, 1/sqrt2, 1/sqrt2).
bool em_membership(const StateVector& s, double tol = 1e-6);

struct EntanglerResult {
    /// Synthesis in the equivalent single-qubit problem.
    SynthesisResult equivalent;
    LiftedPulse lifted;
    BlochPoint initial;
    BlochPoint target;
    std::optional<double> budget;
    /// Sufficient budget stated for the class; compared with the measured time.
    std::optional<double> required_budget;
};

/// Minimal sufficient budget for E_M stabilization: pi/g0 + 2pi/omega0 for
/// Omega_BC, min(pi/(4g0) + 2pi/omega0, pi/g0 + 3pi/(2 omega0)) for Omega_B.
double entangler_budget_bound(const SystemParams& params, ControlClass control_class);

/// Steers an encoded-subspace state onto the maximally entangled circle
/// (logical theta = pi/2, phase phi_f) and keeps it there. Throws
/// TimeBudgetInfeasible when the class's budget condition fails or the
/// measured transfer time exceeds the budget.
EntanglerResult synth_entangler(const BlochPoint& p0, const SystemParams& params,
                                std::optional<double> budget, ControlClass control_class,
                                double t0 = 0.0, double phi_f = 0.0);

/// Overload taking a 4-dim initial state; throws SubspaceError outside Sigma_s.
EntanglerResult synth_entangler(const StateVector& s0, const SystemParams& params,
                                std::optional<double> budget, ControlClass control_class,
                                double t0 = 0.0, double phi_f = 0.0, double subspace_tol = 1e-9);

} // namespace qstab
