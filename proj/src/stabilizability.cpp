#include "qstab/stabilizability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qstab/errors.hpp"

namespace qstab {

namespace {

// |tan theta| on the folded angle min(theta, pi - theta); keeps the
// evaluation identical for mirrored targets.
double folded_abs_tan(double theta) {
    const double folded = theta <= kHalfPi ? theta : kPi - theta;
    return std::tan(folded);
}

// max(|sin phi|, |cos phi|) evaluated on phi reduced into [0, pi/4].
double phase_weight(double phi) {
    double r = std::fmod(phi, kHalfPi);
    if (r < 0.0) r += kHalfPi;
    r = std::min(r, kHalfPi - r);
    return std::cos(r);
}

bool on_equator(double theta) { return std::abs(std::cos(theta)) < 1e-12; }

} // namespace

bool check_point_stabilizable(const BlochPoint& pf, const SystemParams& params) {
    if (on_equator(pf.theta())) return false;
    return params.omega0() * folded_abs_tan(pf.theta()) * phase_weight(pf.phi()) <= params.g0();
}

Controls hold_controls(const BlochPoint& pf, const SystemParams& params) {
    if (!check_point_stabilizable(pf, params)) {
        throw NotStabilizable(
            "target violates omega0 |tan theta_f| max(|sin phi_f|, |cos phi_f|) <= g0; "
            "no bounded static hold exists");
    }
    const double gamma_sin = params.omega0() * std::tan(pf.theta());
    return Controls{gamma_sin * std::cos(pf.phi()), gamma_sin * std::sin(pf.phi())};
}

std::vector<double> single_axis_stabilizable_phases(ControlAxis axis) {
    if (axis == ControlAxis::X) return {0.0, kPi};
    return {kHalfPi, 3.0 * kHalfPi};
}

bool single_axis_stabilizable(const BlochPoint& pf, const SystemParams& params, ControlAxis axis,
                              double phase_tol) {
    if (std::sin(pf.theta()) < kPoleTolerance) return true; // poles are free-drift equilibria
    if (on_equator(pf.theta())) return false;
    const auto phases = single_axis_stabilizable_phases(axis);
    const bool aligned = std::any_of(phases.begin(), phases.end(), [&](double p) {
        return std::abs(phase_difference(pf.phi(), p)) <= phase_tol;
    });
    if (!aligned) return false;
    return params.omega0() * std::abs(std::tan(pf.theta())) <= params.g0();
}

RegionGrid::RegionGrid(double ratio, int n_theta, int n_phi, std::vector<std::uint8_t> cells)
    : ratio_(ratio), n_theta_(n_theta), n_phi_(n_phi), cells_(std::move(cells)) {
    if (cells_.size() != static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_phi)) {
        throw ParameterError("region grid cell count does not match its resolution");
    }
}

double grid_theta(int i, int n_theta) {
    // mirrored construction so theta(i) and theta(n-1-i) fold to the same angle
    const int mirror = n_theta - 1 - i;
    if (i <= mirror) return kPi * i / (n_theta - 1);
    return kPi - kPi * mirror / (n_theta - 1);
}

double grid_phi(int j, int n_phi) { return kTwoPi * j / n_phi; }

double RegionGrid::theta(int i) const { return grid_theta(i, n_theta_); }
double RegionGrid::phi(int j) const { return grid_phi(j, n_phi_); }

double RegionGrid::fraction() const {
    const auto count = std::accumulate(cells_.begin(), cells_.end(), std::size_t{0});
    return static_cast<double>(count) / static_cast<double>(cells_.size());
}

double RegionGrid::column_fraction(int j) const {
    int count = 0;
    for (int i = 0; i < n_theta_; ++i) count += cell(i, j) ? 1 : 0;
    return static_cast<double>(count) / n_theta_;
}

RegionGrid region_grid(double ratio, int n_theta, int n_phi) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) throw ParameterError("ratio must be positive");
    if (n_theta < 2 || n_phi < 2) throw ParameterError("grid counts must be at least 2");
    const SystemParams params(1.0, ratio);
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        const double theta = grid_theta(i, n_theta);
        for (int j = 0; j < n_phi; ++j) {
            cells[static_cast<std::size_t>(i) * n_phi + j] =
                check_point_stabilizable(BlochPoint(theta, grid_phi(j, n_phi)), params) ? 1 : 0;
        }
    }
    return RegionGrid(ratio, n_theta, n_phi, std::move(cells));
}

} // namespace qstab
