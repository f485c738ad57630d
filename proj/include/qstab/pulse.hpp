#pragma once

#include <limits>
#include <string_view>
#include <variant>
#include <vector>

namespace qstab {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct Controls {
    double ux = 0.0;
    double uy = 0.0;
};

/// u_x = g cos[omega_rf (t - t_start) + phi1], u_y = g sin[...].
/// g is signed; a negative amplitude inverts the drive.
struct Resonant {
    double g = 0.0;
    double omega_rf = 0.0;
    double phi1 = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
};

/// Constant controls; the last segment of a pulse may run forever.
struct StaticHold {
    double ux = 0.0;
    double uy = 0.0;
    double t_start = 0.0;
    double t_end = kUnbounded;
};

/// Polynomial-envelope carrier:
///   u_x = g(t) cos[carrier_omega (t - carrier_t_ref)]
///   u_y = sign_y g(t) sin[carrier_omega (t - carrier_t_ref)]
/// with g(t) = g [1 - |(2t - t_start - t_end) / (t_end - t_start)|^n], which
/// vanishes at both ends and peaks at g in the middle.
struct Envelope {
    double g = 0.0;
    int n = 1;
    double carrier_omega = 0.0;
    double carrier_t_ref = 0.0;
    int sign_y = -1;
    double t_start = 0.0;
    double t_end = 0.0;
};

struct Silence {
    double t_start = 0.0;
    double t_end = kUnbounded;
};

using Segment = std::variant<Resonant, StaticHold, Envelope, Silence>;

double segment_start(const Segment& s);
double segment_end(const Segment& s);
std::string_view segment_kind(const Segment& s);

/// Closed-form controls of a single segment. Does not check the domain, so
/// it can be used for one-sided limits at segment boundaries.
Controls segment_controls(const Segment& s, double t);

/// Envelope amplitude profile g(t) on [t_start, t_end].
double envelope_amplitude(const Envelope& e, double t);

/// Time-ordered sequence of contiguous control segments.
class ControlPulse {
public:
    ControlPulse() = default;
    /// Throws ParameterError if segments are empty, overlapping, not
    /// contiguous, have t_start >= t_end, or have an unbounded end anywhere
    /// but the final StaticHold/Silence.
    explicit ControlPulse(std::vector<Segment> segments);

    const std::vector<Segment>& segments() const { return segments_; }
    bool empty() const { return segments_.empty(); }
    double t_start() const;
    double t_end() const;

    /// Index of the segment active at t; boundaries belong to the later segment.
    std::size_t segment_index(double t) const;

    /// Internal boundary times plus any points where a segment's formula has
    /// a kink (the midpoint of an Envelope).
    std::vector<double> breakpoints() const;

    /// Copy with every control value multiplied by factor.
    ControlPulse scaled(double factor) const;

private:
    std::vector<Segment> segments_;
};

/// Controls at t. Throws IntervalError if t is outside the pulse domain.
Controls eval_pulse(const ControlPulse& pulse, double t);

/// Integral of u_x^2 + u_y^2 over [t0, tf], in closed form per segment.
double pulse_energy(const ControlPulse& pulse, double t0, double tf);

/// Closed-form energy of one segment restricted to [a, b].
double segment_energy(const Segment& s, double a, double b);

} // namespace qstab
