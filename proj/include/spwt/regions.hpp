// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "spwt/geometry.hpp"
#include "spwt/scenario.hpp"

namespace spwt {

/// Axis-aligned rectangle in (angle, range) space.
struct RegionRect {
    double angle_lo = 0.0;  // [rad]
    double angle_hi = 0.0;  // [rad]
    double range_lo = 0.0;  // [m]
    double range_hi = 0.0;  // [m]

    double angle_span() const { return angle_hi - angle_lo; }
    double range_span() const { return range_hi - range_lo; }
    double area() const { return angle_span() * range_span(); }  // [rad*m]
    bool contains(const GroundPosition& p) const {
        return p.angle >= angle_lo && p.angle <= angle_hi &&
               p.range >= range_lo && p.range <= range_hi;
    }
    void validate() const;
};

/// Observation window [0, theta_max] x (0, r_max] as a rectangle.
RegionRect observation_window(double theta_max, double r_max);

/// Uniform-grid midpoint-rule step sizes.
struct QuadratureSpec {
    double angle_step = deg2rad(0.5);  // [rad]
    double range_step = 5.0;           // [m]

    void validate() const;
    static QuadratureSpec desired_default() { return {deg2rad(0.5), 5.0}; }
    static QuadratureSpec window_default() { return {deg2rad(1.0), 10.0}; }
};

/// Midpoint nodes of a uniform grid; every node carries the same weight.
struct QuadratureGrid {
    std::vector<GroundPosition> nodes;
    double cell_weight = 0.0;  // [rad*m]

    double measure() const { return cell_weight * static_cast<double>(nodes.size()); }
};

/// Grid tiling a rectangle. Step sizes are snapped so an integer number of
/// cells covers each axis exactly; the snapped cell weight is reported.
QuadratureGrid region_grid(const RegionRect& region, const QuadratureSpec& quad);

/// Window grid with every cell whose center falls inside some desired region
/// removed. Throws if nothing remains.
QuadratureGrid wiretap_grid(const RegionRect& window,
                            const std::vector<RegionRect>& desired,
                            const QuadratureSpec& quad);

/// Hermitian PSD accumulation of steering outer products over a region or
/// point set, together with the total quadrature weight it represents.
struct CovarianceMatrix {
    Eigen::MatrixXcd entries;
    double measure = 0.0;
};

/// Error rectangle around an estimated position, clipped to the window.
/// Throws if the clipped rectangle is empty.
RegionRect desired_region(const GroundPosition& est, double dtheta_max, double dr_max,
                          const RegionRect& window);

/// Clamps a position into the window (the range interval is open at zero,
/// so the clamp stops a hair above it).
GroundPosition clip_position(GroundPosition p, const RegionRect& window);

CovarianceMatrix covariance_from_grid(const ScenarioConfig& cfg,
                                      const SubcarrierAllocation& alloc,
                                      const QuadratureGrid& grid);

/// Midpoint-rule integral of h h^H over a desired region.
CovarianceMatrix regional_covariance(const ScenarioConfig& cfg,
                                     const SubcarrierAllocation& alloc,
                                     const RegionRect& region,
                                     const QuadratureSpec& quad);

/// Midpoint-rule integral of h h^H over the window minus all desired regions.
CovarianceMatrix wiretap_covariance(const ScenarioConfig& cfg,
                                    const SubcarrierAllocation& alloc,
                                    const RegionRect& window,
                                    const std::vector<RegionRect>& desired,
                                    const QuadratureSpec& quad);

/// First-null beam widths of the array pattern: full angular width
/// 2 lambda / (N_T d) and range half-width c / B.
struct MainlobeWidths {
    double theta_bw = 0.0;          // [rad]
    double range_halfwidth = 0.0;   // [m]
};

MainlobeWidths mainlobe_widths(const ScenarioConfig& cfg);

/// True when an error rectangle of +-dtheta_max by +-dr_max fits inside the
/// main lobe, i.e. 2 dtheta_max <= theta_bw and dr_max <= c/B.
bool mainlobe_contains_error_region(const ScenarioConfig& cfg, double dtheta_max,
                                    double dr_max);

enum class PointRole { DesiredSample, SidelobeEavesdrop };

struct TaggedPoint {
    GroundPosition pos;
    PointRole role = PointRole::DesiredSample;
};

struct SamplePointSet {
    std::vector<TaggedPoint> points;
};

/// The four error-rectangle extreme points (theta_hat +- dtheta, r_hat) and
/// (theta_hat, r_hat +- dr), clipped to the window.
SamplePointSet sample_points_desired(const GroundPosition& est, double dtheta_max,
                                     double dr_max, const RegionRect& window);

/// side x side uniform grid spanning the error rectangle, edges included;
/// generalizes the four-point pattern to 16- and 64-point sampling.
SamplePointSet sample_points_desired_grid(const GroundPosition& est, double dtheta_max,
                                          double dr_max, int side,
                                          const RegionRect& window);

/// First-sidelobe maxima around the estimate: two in angle at
/// arccos(cos(theta_hat) -+ 3/N_T) and two in range at r_hat -+ 3c/(2B).
/// arccos arguments are clamped to [-1, 1], ranges clipped to the window.
SamplePointSet sample_points_sidelobe(const ScenarioConfig& cfg, const GroundPosition& est,
                                      const RegionRect& window);

/// Unweighted sum of h h^H over the point set; measure equals the point count.
CovarianceMatrix point_covariance(const ScenarioConfig& cfg,
                                  const SubcarrierAllocation& alloc,
                                  const SamplePointSet& points);

}  // namespace spwt
