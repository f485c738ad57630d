#include "qstab/state.hpp"

#include <cmath>
#include <string>

#include "qstab/errors.hpp"

namespace qstab {

double wrap_phase(double phi) {
    double w = std::fmod(phi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    // fmod of a tiny negative value can round up to exactly 2pi
    if (w >= kTwoPi) w = 0.0;
    return w;
}

double phase_difference(double a, double b) {
    double d = std::remainder(a - b, kTwoPi);
    if (d <= -kPi) d += kTwoPi;
    return d;
}

BlochPoint::BlochPoint(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw ParameterError("Bloch angles must be finite");
    }
    if (theta < 0.0 || theta > kPi) {
        throw ParameterError("theta must lie in [0, pi], got " + std::to_string(theta));
    }
    theta_ = theta;
    const double pole_weight = std::sin(0.5 * theta) * std::cos(0.5 * theta);
    phi_ = pole_weight < kPoleTolerance ? 0.0 : wrap_phase(phi);
}

StateVector::StateVector(Vector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() != 2 && amps_.size() != 4) {
        throw DimensionError("state dimension must be 2 or 4, got " +
                             std::to_string(amps_.size()));
    }
    const double n = amps_.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > kNormTolerance) {
        throw ParameterError("state vector is not normalized (norm " + std::to_string(n) + ")");
    }
}

StateVector::StateVector(Vector amplitudes, NoCheck) : amps_(std::move(amplitudes)) {
    if (amps_.size() != 2 && amps_.size() != 4) {
        throw DimensionError("state dimension must be 2 or 4, got " +
                             std::to_string(amps_.size()));
    }
}

StateVector StateVector::unchecked(Vector amplitudes) {
    return StateVector(std::move(amplitudes), NoCheck{});
}

StateVector StateVector::basis(int dimension, int index) {
    if (index < 0 || index >= dimension) throw DimensionError("basis index out of range");
    Vector v = Vector::Zero(dimension);
    v[index] = 1.0;
    return StateVector(std::move(v));
}

SystemParams::SystemParams(double omega0, double g0) : omega0_(omega0), g0_(g0) {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
        throw ParameterError("omega0 must be positive and finite");
    }
    if (!(g0 > 0.0) || !std::isfinite(g0)) {
        throw ParameterError("g0 must be positive and finite");
    }
}

Operator pauli_x() {
    Operator m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Operator pauli_y() {
    const Complex i(0.0, 1.0);
    Operator m(2, 2);
    m << 0.0, -i, i, 0.0;
    return m;
}

Operator pauli_z() {
    Operator m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

Operator identity(int dimension) { return Operator::Identity(dimension, dimension); }

Operator spin_x() { return 0.5 * pauli_x(); }
Operator spin_y() { return 0.5 * pauli_y(); }
Operator spin_z() { return 0.5 * pauli_z(); }

StateVector bloch_to_state(const BlochPoint& p) {
    Vector v(2);
    v[0] = std::cos(0.5 * p.theta());
    v[1] = std::polar(std::sin(0.5 * p.theta()), p.phi());
    return StateVector::unchecked(std::move(v));
}

BlochPoint state_to_bloch(const StateVector& s) {
    if (s.dimension() != 2) {
        throw DimensionError("state_to_bloch requires a qubit state");
    }
    const double a = std::abs(s[0]);
    const double b = std::abs(s[1]);
    const double theta = std::min(kPi, 2.0 * std::atan2(b, a));
    double phi = 0.0;
    if (a * b >= kPoleTolerance * (a * a + b * b)) {
        phi = std::arg(s[1]) - std::arg(s[0]);
    }
    return BlochPoint(theta, phi);
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (a.dimension() != b.dimension()) {
        throw DimensionError("fidelity of states with different dimensions");
    }
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

Operator effective_hamiltonian(double omega0, double ux, double uy) {
    // omega0 S_z + ux S_x + uy S_y written out entrywise
    Operator g(2, 2);
    g(0, 0) = 0.5 * omega0;
    g(1, 1) = -0.5 * omega0;
    g(0, 1) = Complex(0.5 * ux, -0.5 * uy);
    g(1, 0) = Complex(0.5 * ux, 0.5 * uy);
    return g;
}

Operator effective_hamiltonian(const SystemParams& params, double ux, double uy) {
    return effective_hamiltonian(params.omega0(), ux, uy);
}

bool is_hermitian(const Operator& h, double tol) {
    if (h.rows() != h.cols()) return false;
    return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double commutator_norm(const Operator& h, const StateVector& s) {
    if (h.rows() != s.dimension() || h.cols() != s.dimension()) {
        throw DimensionError("operator and state dimensions differ");
    }
    const Operator rho = s.amplitudes() * s.amplitudes().adjoint();
    return (h * rho - rho * h).norm();
}

bool is_equilibrium(const Operator& h, const StateVector& s, double tol) {
    if (!(tol > 0.0)) throw ParameterError("equilibrium tolerance must be positive");
    if (!is_hermitian(h)) throw HermiticityError("is_equilibrium requires a Hermitian operator");
    return commutator_norm(h, s) <= tol;
}

double eigen_residual(const Operator& h, const StateVector& s) {
    if (h.rows() != s.dimension() || h.cols() != s.dimension()) {
        throw DimensionError("operator and state dimensions differ");
    }
    const Vector hs = h * s.amplitudes();
    const Complex mean = s.amplitudes().dot(hs);
    return (hs - mean * s.amplitudes()).norm();
}

} // namespace qstab
