#include "qstab/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "qstab/errors.hpp"

namespace qstab {

void Trajectory::push(TrajectorySample s) {
    if (!samples_.empty() && !(s.t > samples_.back().t)) {
        throw ParameterError("trajectory times must strictly increase");
    }
    samples_.push_back(std::move(s));
}

const TrajectorySample& Trajectory::at(double t) const {
    auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                               [](const TrajectorySample& s, double v) { return s.t < v; });
    if (it == samples_.end() || it->t != t) {
        throw IntervalError("no trajectory sample at t = " + std::to_string(t));
    }
    return *it;
}

double Trajectory::max_norm_drift() const {
    double worst = 0.0;
    for (const auto& s : samples_) worst = std::max(worst, std::abs(s.state.norm() - 1.0));
    return worst;
}

double default_time_step(const SystemParams& params) { return params.drift_period() / 10000.0; }

Operator unitary_step(const Operator& generator, double h) {
    if (generator.rows() == 2) {
        // G = c I + a.sigma  =>  exp(i h G) = e^{i h c}[cos(h|a|) I + i sin(h|a|) a.sigma/|a|]
        const Complex c = 0.5 * (generator(0, 0) + generator(1, 1));
        const double az = 0.5 * (generator(0, 0) - generator(1, 1)).real();
        const double ax = generator(1, 0).real();
        const double ay = generator(1, 0).imag();
        const double norm = std::sqrt(ax * ax + ay * ay + az * az);
        const double angle = h * norm;
        const double cs = std::cos(angle);
        // sin(angle)/norm, stable as norm -> 0
        const double sn = norm > 0.0 ? std::sin(angle) / norm : h;
        const Complex i(0.0, 1.0);
        const Complex phase = std::exp(i * (h * c));
        Operator u(2, 2);
        u(0, 0) = phase * Complex(cs, sn * az);
        u(1, 1) = phase * Complex(cs, -sn * az);
        u(0, 1) = phase * (i * sn) * Complex(ax, -ay);
        u(1, 0) = phase * (i * sn) * Complex(ax, ay);
        return u;
    }
    if (generator.rows() == 4) {
        const Eigen::Matrix4cd a = Complex(0.0, h) * Eigen::Matrix4cd(generator);
        return Operator(a.exp());
    }
    throw DimensionError("unitary_step supports dimension 2 or 4");
}

namespace {

Vector midpoint_step(const Dynamics& d, const Vector& psi, double t, double h) {
    const double mid = t + 0.5 * h;
    return unitary_step(d.generator(mid, mid), h) * psi;
}

Vector rk4_step(const Dynamics& d, const Vector& psi, double t, double h) {
    const Complex i(0.0, 1.0);
    const double mid = t + 0.5 * h;
    const Operator g0 = d.generator(t, mid);
    const Operator gm = d.generator(mid, mid);
    const Operator g1 = d.generator(t + h, mid);
    const Vector k1 = i * (g0 * psi);
    const Vector k2 = i * (gm * (psi + (0.5 * h) * k1));
    const Vector k3 = i * (gm * (psi + (0.5 * h) * k2));
    const Vector k4 = i * (g1 * (psi + h * k3));
    return psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate(const Dynamics& d, const StateVector& s0, const PropagationOptions& opt,
                     double t_end, Vector (*step)(const Dynamics&, const Vector&, double, double)) {
    if (!(opt.dt > 0.0) || !std::isfinite(opt.dt)) throw ParameterError("dt must be positive");
    if (opt.stride == 0) throw ParameterError("stride must be at least 1");
    if (!(t_end >= d.t_start)) throw IntervalError("t_end precedes the pulse start");
    if (t_end > d.t_end) throw IntervalError("t_end is beyond the pulse domain");
    if (s0.dimension() != d.generator(d.t_start, d.t_start).rows()) {
        throw DimensionError("initial state does not match the system dimension");
    }

    std::vector<double> marks{d.t_start};
    for (double b : d.breakpoints) {
        if (b > d.t_start && b < t_end) marks.push_back(b);
    }
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    if (t_end > marks.back()) marks.push_back(t_end);

    Trajectory traj;
    auto record = [&](double t, const Vector& psi) {
        const Controls u = d.controls(t);
        traj.push({t, StateVector::unchecked(psi), u.ux, u.uy});
    };

    Vector psi = s0.amplitudes();
    record(marks.front(), psi);
    std::size_t counter = 0;
    for (std::size_t m = 0; m + 1 < marks.size(); ++m) {
        const double a = marks[m];
        const double b = marks[m + 1];
        const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / opt.dt - 1e-9)));
        const double h = (b - a) / static_cast<double>(steps);
        for (std::size_t k = 0; k < steps; ++k) {
            const double t = a + static_cast<double>(k) * h;
            psi = step(d, psi, t, h);
            ++counter;
            if (k + 1 == steps) {
                record(b, psi);
            } else if (counter % opt.stride == 0) {
                record(a + static_cast<double>(k + 1) * h, psi);
            }
        }
    }
    return traj;
}

} // namespace

Trajectory propagate(const Dynamics& dynamics, const StateVector& s0,
                     const PropagationOptions& options, double t_end) {
    return integrate(dynamics, s0, options, t_end, &midpoint_step);
}

Trajectory oracle_propagate(const Dynamics& dynamics, const StateVector& s0,
                            const PropagationOptions& options, double t_end) {
    return integrate(dynamics, s0, options, t_end, &rk4_step);
}

Dynamics qubit_dynamics(const ControlPulse& pulse, const SystemParams& params) {
    const double omega0 = params.omega0();
    return Dynamics{
        [pulse, omega0](double t, double locate) {
            const Controls u = segment_controls(pulse.segments()[pulse.segment_index(locate)], t);
            return effective_hamiltonian(omega0, u.ux, u.uy);
        },
        [pulse](double t) { return eval_pulse(pulse, t); },
        pulse.breakpoints(),
        pulse.t_start(),
        pulse.t_end(),
    };
}

Trajectory propagate(const ControlPulse& pulse, const StateVector& s0, const SystemParams& params,
                     double dt, double t_end, std::size_t stride) {
    return propagate(qubit_dynamics(pulse, params), s0, {dt, stride}, t_end);
}

Trajectory oracle_propagate(const ControlPulse& pulse, const StateVector& s0,
                            const SystemParams& params, double dt, double t_end,
                            std::size_t stride) {
    return oracle_propagate(qubit_dynamics(pulse, params), s0, {dt, stride}, t_end);
}

} // namespace qstab
