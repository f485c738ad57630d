#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace qstab {

using Complex = std::complex<double>;

// Small dense storage: dimension is 2 (qubit) or 4 (two qubits), never more.
using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, 4, 1>;
using Operator = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;

// Tolerance below which sin(theta/2)cos(theta/2) counts as a pole.
inline constexpr double kPoleTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kDefaultEquilibriumTolerance = 1e-9;

/// Wraps an angle into [0, 2pi).
double wrap_phase(double phi);

/// Signed distance between two phases, in (-pi, pi].
double phase_difference(double a, double b);

/// Point (theta, phi) on the Bloch sphere, always canonical: theta in [0, pi],
/// phi in [0, 2pi), and phi = 0 at the poles.
class BlochPoint {
public:
    BlochPoint() = default;
    /// Throws ParameterError when theta is outside [0, pi] or not finite.
    BlochPoint(double theta, double phi);

    double theta() const { return theta_; }
    double phi() const { return phi_; }

    friend bool operator==(const BlochPoint&, const BlochPoint&) = default;

private:
    double theta_ = 0.0;
    double phi_ = 0.0;
};

/// Unit-norm state of a qubit (dimension 2) or a qubit pair (dimension 4).
class StateVector {
public:
    /// Validates dimension and unit norm (within 1e-12).
    explicit StateVector(Vector amplitudes);

    /// Skips the norm check. Used for integrator output, whose norm is
    /// certified separately against the propagator's own tolerance.
    static StateVector unchecked(Vector amplitudes);

    static StateVector basis(int dimension, int index);

    const Vector& amplitudes() const { return amps_; }
    Eigen::Index dimension() const { return amps_.size(); }
    Complex operator[](Eigen::Index i) const { return amps_[i]; }
    double norm() const { return amps_.norm(); }

private:
    struct NoCheck {};
    StateVector(Vector amplitudes, NoCheck);

    Vector amps_;
};

/// Larmor frequency omega0 and control bound g0, both strictly positive.
class SystemParams {
public:
    SystemParams(double omega0, double g0);

    double omega0() const { return omega0_; }
    double g0() const { return g0_; }
    double drift_period() const { return kTwoPi / omega0_; }

private:
    double omega0_;
    double g0_;
};

// Spin-1/2 operators S = sigma / 2.
Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
Operator identity(int dimension);
Operator spin_x();
Operator spin_y();
Operator spin_z();

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
StateVector bloch_to_state(const BlochPoint& p);

/// Inverse of bloch_to_state up to a global phase. Requires dimension 2.
BlochPoint state_to_bloch(const StateVector& s);

/// |<a|b>|^2. Throws DimensionError on mismatched dimensions.
double fidelity(const StateVector& a, const StateVector& b);

/// G = omega0 S_z + ux S_x + uy S_y, with d/dt|psi> = +i G |psi>.
Operator effective_hamiltonian(double omega0, double ux, double uy);
Operator effective_hamiltonian(const SystemParams& params, double ux, double uy);

bool is_hermitian(const Operator& h, double tol = 1e-12);

/// Frobenius norm of [H, |s><s|].
double commutator_norm(const Operator& h, const StateVector& s);

/// True iff |s> is a stationary point of the dynamics generated by H, i.e.
/// the commutator [H, |s><s|] vanishes to within tol (Frobenius norm).
/// Throws HermiticityError for non-Hermitian H and DimensionError when the
/// sizes disagree.
bool is_equilibrium(const Operator& h, const StateVector& s,
                    double tol = kDefaultEquilibriumTolerance);

/// ||H s - <s|H|s> s||, the eigenvector residual.
double eigen_residual(const Operator& h, const StateVector& s);

} // namespace qstab
