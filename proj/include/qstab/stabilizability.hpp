#pragma once

#include <cstdint>
#include <vector>

#include "qstab/pulse.hpp"
#include "qstab/state.hpp"

namespace qstab {

/// omega0 |tan theta_f| max(|sin phi_f|, |cos phi_f|) <= g0, with equality
/// counted as stabilizable. The equator is never stabilizable.
bool check_point_stabilizable(const BlochPoint& pf, const SystemParams& params);

/// Static controls (omega0 tan theta_f cos phi_f, omega0 tan theta_f sin phi_f)
/// that make pf an eigenvector of the total generator. Throws
/// NotStabilizable when the bound g0 cannot accommodate them.
Controls hold_controls(const BlochPoint& pf, const SystemParams& params);

enum class ControlAxis { X, Y };

/// Phases phi_f admitting a static hold off the poles when only one control
/// is available: {0, pi} for x, {pi/2, 3pi/2} for y.
std::vector<double> single_axis_stabilizable_phases(ControlAxis axis);

/// True if a static single-axis control within [-g0, g0] holds pf.
bool single_axis_stabilizable(const BlochPoint& pf, const SystemParams& params, ControlAxis axis,
                              double phase_tol = 1e-12);

/// Boolean map of point-stabilizable targets over a uniform (theta, phi) grid.
/// theta samples include both endpoints; phi samples exclude 2pi.
class RegionGrid {
public:
    RegionGrid(double ratio, int n_theta, int n_phi, std::vector<std::uint8_t> cells);

    double ratio() const { return ratio_; }
    int n_theta() const { return n_theta_; }
    int n_phi() const { return n_phi_; }
    double theta(int i) const;
    double phi(int j) const;
    bool cell(int i, int j) const { return cells_[static_cast<std::size_t>(i) * n_phi_ + j] != 0; }

    /// Fraction of all cells that are stabilizable.
    double fraction() const;
    /// Fraction of the theta samples in column j that are stabilizable.
    double column_fraction(int j) const;

private:
    double ratio_;
    int n_theta_;
    int n_phi_;
    std::vector<std::uint8_t> cells_;
};

double grid_theta(int i, int n_theta);
double grid_phi(int j, int n_phi);

/// Evaluates check_point_stabilizable with g0/omega0 = ratio on the grid.
/// Requires ratio > 0 and both counts >= 2.
RegionGrid region_grid(double ratio, int n_theta, int n_phi);

} // namespace qstab
