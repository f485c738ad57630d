#include "qstab/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qstab/errors.hpp"

namespace qstab {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

// Signed normalized distance from the envelope midpoint, in [-1, 1].
double envelope_coordinate(const Envelope& e, double t) {
    return ((t - e.t_start) + (t - e.t_end)) / (e.t_end - e.t_start);
}

// Antiderivative of (1 - x^n)^2 in x.
double envelope_square_primitive(int n, double x) {
    return x - 2.0 * std::pow(x, n + 1) / (n + 1) + std::pow(x, 2 * n + 1) / (2 * n + 1);
}

} // namespace

double segment_start(const Segment& s) {
    return std::visit([](const auto& seg) { return seg.t_start; }, s);
}

double segment_end(const Segment& s) {
    return std::visit([](const auto& seg) { return seg.t_end; }, s);
}

std::string_view segment_kind(const Segment& s) {
    return std::visit(Overloaded{
                          [](const Resonant&) { return std::string_view("resonant"); },
                          [](const StaticHold&) { return std::string_view("static_hold"); },
                          [](const Envelope&) { return std::string_view("envelope"); },
                          [](const Silence&) { return std::string_view("silence"); },
                      },
                      s);
}

double envelope_amplitude(const Envelope& e, double t) {
    const double x = std::abs(envelope_coordinate(e, t));
    return e.g * (1.0 - std::pow(x, e.n));
}

Controls segment_controls(const Segment& s, double t) {
    return std::visit(Overloaded{
                          [t](const Resonant& r) {
                              const double a = r.omega_rf * (t - r.t_start) + r.phi1;
                              return Controls{r.g * std::cos(a), r.g * std::sin(a)};
                          },
                          [](const StaticHold& h) { return Controls{h.ux, h.uy}; },
                          [t](const Envelope& e) {
                              const double amp = envelope_amplitude(e, t);
                              const double a = e.carrier_omega * (t - e.carrier_t_ref);
                              return Controls{amp * std::cos(a), e.sign_y * amp * std::sin(a)};
                          },
                          [](const Silence&) { return Controls{}; },
                      },
                      s);
}

ControlPulse::ControlPulse(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw ParameterError("a pulse needs at least one segment");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        const double a = segment_start(s);
        const double b = segment_end(s);
        if (!std::isfinite(a)) throw ParameterError("segment start must be finite");
        if (!(a < b)) {
            throw ParameterError("segment " + std::to_string(i) + " has t_start >= t_end");
        }
        if (std::isinf(b)) {
            const bool open_kind =
                std::holds_alternative<StaticHold>(s) || std::holds_alternative<Silence>(s);
            if (i + 1 != segments_.size() || !open_kind) {
                throw ParameterError("only a final hold or silence segment may be unbounded");
            }
        }
        if (i > 0 && segment_end(segments_[i - 1]) != a) {
            throw ParameterError("segments " + std::to_string(i - 1) + " and " +
                                 std::to_string(i) + " are not contiguous");
        }
        if (const auto* e = std::get_if<Envelope>(&s)) {
            if (e->n < 1) throw ParameterError("envelope order must be >= 1");
            if (e->sign_y != 1 && e->sign_y != -1) {
                throw ParameterError("envelope sign_y must be +1 or -1");
            }
        }
    }
}

double ControlPulse::t_start() const {
    if (segments_.empty()) throw IntervalError("empty pulse has no domain");
    return segment_start(segments_.front());
}

double ControlPulse::t_end() const {
    if (segments_.empty()) throw IntervalError("empty pulse has no domain");
    return segment_end(segments_.back());
}

std::size_t ControlPulse::segment_index(double t) const {
    if (segments_.empty() || !(t >= t_start()) || t > t_end()) {
        throw IntervalError("time " + std::to_string(t) + " outside pulse domain");
    }
    // first segment whose end is strictly after t; the closing instant of a
    // finite pulse belongs to the last segment
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& s) { return v < segment_end(s); });
    if (it == segments_.end()) return segments_.size() - 1;
    return static_cast<std::size_t>(it - segments_.begin());
}

std::vector<double> ControlPulse::breakpoints() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (i > 0) out.push_back(segment_start(segments_[i]));
        if (const auto* e = std::get_if<Envelope>(&segments_[i])) {
            out.push_back(0.5 * (e->t_start + e->t_end));
        }
    }
    return out;
}

ControlPulse ControlPulse::scaled(double factor) const {
    std::vector<Segment> out;
    out.reserve(segments_.size());
    for (const Segment& s : segments_) {
        out.push_back(std::visit(Overloaded{
                                     [factor](Resonant r) -> Segment {
                                         r.g *= factor;
                                         return r;
                                     },
                                     [factor](StaticHold h) -> Segment {
                                         h.ux *= factor;
                                         h.uy *= factor;
                                         return h;
                                     },
                                     [factor](Envelope e) -> Segment {
                                         e.g *= factor;
                                         return e;
                                     },
                                     [](Silence s) -> Segment { return s; },
                                 },
                                 s));
    }
    return ControlPulse(std::move(out));
}

Controls eval_pulse(const ControlPulse& pulse, double t) {
    return segment_controls(pulse.segments()[pulse.segment_index(t)], t);
}

double segment_energy(const Segment& s, double a, double b) {
    a = std::max(a, segment_start(s));
    b = std::min(b, segment_end(s));
    if (!(a < b)) return 0.0;
    return std::visit(
        Overloaded{
            [&](const Resonant& r) { return r.g * r.g * (b - a); },
            [&](const StaticHold& h) {
                const double p = h.ux * h.ux + h.uy * h.uy;
                return p == 0.0 ? 0.0 : p * (b - a);
            },
            [&](const Envelope& e) {
                // u_x^2 + u_y^2 = g(t)^2; integrate each half in x = |coordinate|
                const double half = 0.5 * (e.t_end - e.t_start);
                const double mid = e.t_start + half;
                double total = 0.0;
                if (a < mid) {
                    const double lo = std::abs(envelope_coordinate(e, std::min(b, mid)));
                    const double hi = std::abs(envelope_coordinate(e, a));
                    total += envelope_square_primitive(e.n, hi) - envelope_square_primitive(e.n, lo);
                }
                if (b > mid) {
                    const double lo = std::abs(envelope_coordinate(e, std::max(a, mid)));
                    const double hi = std::abs(envelope_coordinate(e, b));
                    total += envelope_square_primitive(e.n, hi) - envelope_square_primitive(e.n, lo);
                }
                return e.g * e.g * half * total;
            },
            [](const Silence&) { return 0.0; },
        },
        s);
}

double pulse_energy(const ControlPulse& pulse, double t0, double tf) {
    if (pulse.empty() || t0 < pulse.t_start() || tf > pulse.t_end() || tf < t0) {
        throw IntervalError("energy interval outside pulse domain");
    }
    double total = 0.0;
    for (const Segment& s : pulse.segments()) total += segment_energy(s, t0, tf);
    return total;
}

} // namespace qstab
