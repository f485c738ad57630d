#include "qstab/two_qubit.hpp"

#include <cmath>
#include <stdexcept>

#include "qstab/errors.hpp"

namespace qstab {

Operator kron(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

namespace {

constexpr int kZeroL = 1; // |01>
constexpr int kOneL = 2;  // |10>

LogicalFrame make_frame() {
    const StateVector zero = StateVector::basis(4, kZeroL);
    const StateVector one = StateVector::basis(4, kOneL);
    const Vector& z = zero.amplitudes();
    const Vector& o = one.amplitudes();
    const Complex i(0.0, 1.0);

    LogicalFrame f{zero, one,
                   o * z.adjoint() + z * o.adjoint(),
                   i * (o * z.adjoint() - z * o.adjoint()),
                   z * z.adjoint() - o * o.adjoint()};

    const Operator id = identity(2);
    const Operator sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
    const Operator lz = 0.5 * (kron(sz, id) - kron(id, sz));
    const Operator lx = 0.5 * (kron(sx, sx) + kron(sy, sy));
    const Operator ly = 0.5 * (kron(sy, sx) - kron(sx, sy));
    const auto close = [](const Operator& a, const Operator& b) {
        return (a - b).cwiseAbs().maxCoeff() <= 1e-14;
    };
    if (!close(f.sigma_z, lz) || !close(f.sigma_x, lx) || !close(f.sigma_y, ly)) {
        throw std::logic_error("logical Pauli operators do not match their two-qubit forms");
    }
    return f;
}

} // namespace

const LogicalFrame& build_logical_frame() {
    static const LogicalFrame frame = make_frame();
    return frame;
}

StateVector logical_state(const BlochPoint& p) {
    Vector v = Vector::Zero(4);
    v[kZeroL] = std::cos(0.5 * p.theta());
    v[kOneL] = std::polar(std::sin(0.5 * p.theta()), p.phi());
    return StateVector::unchecked(std::move(v));
}

Vector logical_amplitudes(const StateVector& s) {
    if (s.dimension() != 4) throw DimensionError("logical amplitudes need a two-qubit state");
    Vector v(2);
    v[0] = s[kZeroL];
    v[1] = s[kOneL];
    return v;
}

BlochPoint logical_bloch(const StateVector& s) {
    const Vector v = logical_amplitudes(s);
    const double n = v.norm();
    if (n < 1e-12) throw SubspaceError("state has no weight on the encoded subspace");
    return state_to_bloch(StateVector::unchecked(v / n));
}

double leakage(const StateVector& s) {
    if (s.dimension() != 4) throw DimensionError("leakage needs a two-qubit state");
    return 1.0 - (std::norm(s[kZeroL]) + std::norm(s[kOneL]));
}

LiftedCoefficients LiftedPulse::lift(const Controls& logical) {
    return LiftedCoefficients{logical.ux, -logical.uy, logical.uy, logical.ux};
}

LiftedCoefficients LiftedPulse::coefficients(double t) const {
    return lift(eval_pulse(logical_, t));
}

LiftedPulse lift_logical_controls(const ControlPulse& logical) { return LiftedPulse(logical); }

Operator two_qubit_hamiltonian(double omega0, const LiftedCoefficients& u) {
    // everything here is real or purely imaginary in the computational basis,
    // so build entries directly instead of four Kronecker products per step
    const Complex i(0.0, 1.0);
    Operator h = Operator::Zero(4, 4);
    // H0 = -omega0 sz x I + omega0 I x sz
    h(0, 0) = 0.0;
    h(1, 1) = -2.0 * omega0;
    h(2, 2) = 2.0 * omega0;
    h(3, 3) = 0.0;
    // sx x sx: |00><11| + |01><10| + h.c.; sy x sy: -|00><11| + |01><10| + h.c.
    // sx x sy: |00> <-> |11| with -i/+i, |01> <-> |10> with +i/-i; sy x sx likewise
    const Complex c0311 = (u.xx - u.yy) + i * (-u.xy - u.yx);  // <00|H|11>
    const Complex c0110 = (u.xx + u.yy) + i * (u.xy - u.yx);   // <01|H|10>
    h(0, 3) = c0311;
    h(3, 0) = std::conj(c0311);
    h(1, 2) = c0110;
    h(2, 1) = std::conj(c0110);
    return h;
}

Operator logical_hamiltonian(double omega0, const Controls& logical) {
    return 4.0 * (-omega0 * spin_z() + logical.ux * spin_x() + logical.uy * spin_y());
}

Dynamics two_qubit_dynamics(const LiftedPulse& pulse, double omega0) {
    const ControlPulse& logical = pulse.logical();
    return Dynamics{
        [logical, omega0](double t, double locate) {
            const Controls u = segment_controls(logical.segments()[logical.segment_index(locate)], t);
            return Operator(-two_qubit_hamiltonian(omega0, LiftedPulse::lift(u)));
        },
        [logical](double t) { return eval_pulse(logical, t); },
        logical.breakpoints(),
        logical.t_start(),
        logical.t_end(),
    };
}

Dynamics logical_dynamics(const ControlPulse& logical, double omega0) {
    return Dynamics{
        [logical, omega0](double t, double locate) {
            const Controls u = segment_controls(logical.segments()[logical.segment_index(locate)], t);
            return Operator(-logical_hamiltonian(omega0, u));
        },
        [logical](double t) { return eval_pulse(logical, t); },
        logical.breakpoints(),
        logical.t_start(),
        logical.t_end(),
    };
}

SystemParams equivalent_qubit_params(const SystemParams& params) {
    return SystemParams(4.0 * params.omega0(), 4.0 * params.g0());
}

double concurrence(const StateVector& s) {
    if (s.dimension() != 4) throw DimensionError("concurrence needs a two-qubit state");
    return 2.0 * std::abs(s[0] * s[3] - s[1] * s[2]);
}

bool em_membership(const StateVector& s, double tol) {
    if (s.dimension() != 4) throw DimensionError("E_M membership needs a two-qubit state");
    const double half = std::sqrt(0.5);
    return leakage(s) <= tol && std::abs(std::abs(s[kZeroL]) - half) <= tol &&
           std::abs(std::abs(s[kOneL]) - half) <= tol;
}

double entangler_budget_bound(const SystemParams& params, ControlClass control_class) {
    const double w = params.omega0();
    const double g = params.g0();
    if (control_class == ControlClass::BoundedContinuous) return kPi / g + kTwoPi / w;
    return std::min(kPi / (4.0 * g) + kTwoPi / w, kPi / g + 1.5 * kPi / w);
}

EntanglerResult synth_entangler(const BlochPoint& p0, const SystemParams& params,
                                std::optional<double> budget, ControlClass control_class,
                                double t0, double phi_f) {
    const SystemParams eq = equivalent_qubit_params(params);
    const BlochPoint target(kHalfPi, phi_f);
    SynthesisResult synth;
    std::optional<double> required;
    if (budget) {
        required = entangler_budget_bound(params, control_class);
        if (!(*budget >= *required)) {
            throw TimeBudgetInfeasible("time budget " + std::to_string(*budget) +
                                       " is below the sufficient bound " +
                                       std::to_string(*required) + " for class " +
                                       to_string(control_class));
        }
        synth = synth_circle_case_plan(p0, target, eq, t0);
        if (synth.t_f - t0 > *budget) {
            throw TimeBudgetInfeasible(
                "the envelope construction needs " + std::to_string(synth.t_f - t0) +
                " for this initial state, which exceeds the budget; no faster bounded "
                "construction is implemented");
        }
    } else {
        synth = synth_circle_continuous(p0, target, eq, t0, minimal_envelope_order(eq, false));
    }
    synth.control_class = control_class;
    ControlPulse logical = synth.pulse.scaled(kLogicalControlScale);
    return EntanglerResult{std::move(synth), LiftedPulse(std::move(logical)), p0, target, budget,
                           required};
}

EntanglerResult synth_entangler(const StateVector& s0, const SystemParams& params,
                                std::optional<double> budget, ControlClass control_class,
                                double t0, double phi_f, double subspace_tol) {
    if (s0.dimension() != 4) throw DimensionError("entangler needs a two-qubit initial state");
    if (leakage(s0) > subspace_tol) {
        throw SubspaceError("initial state lies outside span{|01>, |10>}");
    }
    return synth_entangler(logical_bloch(s0), params, budget, control_class, t0, phi_f);
}

} // namespace qstab
