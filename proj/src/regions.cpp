// SPDX-License-Identifier: Apache-2.0
#include "spwt/regions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spwt {

void RegionRect::validate() const {
    if (!(angle_lo < angle_hi)) throw std::invalid_argument("region needs angle_lo < angle_hi");
    if (!(range_lo < range_hi)) throw std::invalid_argument("region needs range_lo < range_hi");
    if (angle_lo < 0.0 || angle_hi > kPi) throw std::invalid_argument("region angle outside [0, pi]");
    if (range_lo < 0.0) throw std::invalid_argument("region range outside (0, r_max]");
}

RegionRect observation_window(double theta_max, double r_max) {
    RegionRect w{0.0, theta_max, 0.0, r_max};
    w.validate();
    return w;
}

void QuadratureSpec::validate() const {
    if (!(angle_step > 0.0) || !(range_step > 0.0))
        throw std::invalid_argument("quadrature steps must be > 0");
}

namespace {

// Cell count that tiles a span exactly; never below one cell.
long cells_for_span(double span, double step) {
    return std::max(1L, std::lround(span / step));
}

}  // namespace

QuadratureGrid region_grid(const RegionRect& region, const QuadratureSpec& quad) {
    region.validate();
    quad.validate();
    const long n_angle = cells_for_span(region.angle_span(), quad.angle_step);
    const long n_range = cells_for_span(region.range_span(), quad.range_step);
    const double h_angle = region.angle_span() / static_cast<double>(n_angle);
    const double h_range = region.range_span() / static_cast<double>(n_range);

    QuadratureGrid grid;
    grid.cell_weight = h_angle * h_range;
    grid.nodes.reserve(static_cast<std::size_t>(n_angle * n_range));
    for (long i = 0; i < n_angle; ++i) {
        const double theta = region.angle_lo + (static_cast<double>(i) + 0.5) * h_angle;
        for (long j = 0; j < n_range; ++j) {
            const double r = region.range_lo + (static_cast<double>(j) + 0.5) * h_range;
            grid.nodes.push_back({theta, r});
        }
    }
    return grid;
}

QuadratureGrid wiretap_grid(const RegionRect& window,
                            const std::vector<RegionRect>& desired,
                            const QuadratureSpec& quad) {
    QuadratureGrid grid = region_grid(window, quad);
    auto inside_desired = [&desired](const GroundPosition& p) {
        return std::any_of(desired.begin(), desired.end(),
                           [&p](const RegionRect& r) { return r.contains(p); });
    };
    std::erase_if(grid.nodes, inside_desired);
    if (grid.nodes.empty())
        throw std::invalid_argument("desired regions cover the whole window; wiretap region is empty");
    return grid;
}

RegionRect desired_region(const GroundPosition& est, double dtheta_max, double dr_max,
                          const RegionRect& window) {
    validate_position(est);
    window.validate();
    if (!(dtheta_max > 0.0) || !(dr_max > 0.0))
        throw std::invalid_argument("maximal estimation errors must be > 0");
    RegionRect r;
    r.angle_lo = std::max(est.angle - dtheta_max, window.angle_lo);
    r.angle_hi = std::min(est.angle + dtheta_max, window.angle_hi);
    r.range_lo = std::max(est.range - dr_max, window.range_lo);
    r.range_hi = std::min(est.range + dr_max, window.range_hi);
    if (!(r.angle_lo < r.angle_hi) || !(r.range_lo < r.range_hi))
        throw std::invalid_argument("desired region is empty after clipping to the window");
    return r;
}

CovarianceMatrix covariance_from_grid(const ScenarioConfig& cfg,
                                      const SubcarrierAllocation& alloc,
                                      const QuadratureGrid& grid) {
    CovarianceMatrix cov;
    cov.entries = Eigen::MatrixXcd::Zero(cfg.n_antennas, cfg.n_antennas);
    if (grid.nodes.empty()) return cov;
    const Eigen::MatrixXcd h = steering_matrix(cfg, alloc, grid.nodes);
    cov.entries.selfadjointView<Eigen::Lower>().rankUpdate(h, grid.cell_weight);
    cov.entries = cov.entries.selfadjointView<Eigen::Lower>();
    cov.measure = grid.measure();
    return cov;
}

CovarianceMatrix regional_covariance(const ScenarioConfig& cfg,
                                     const SubcarrierAllocation& alloc,
                                     const RegionRect& region,
                                     const QuadratureSpec& quad) {
    return covariance_from_grid(cfg, alloc, region_grid(region, quad));
}

CovarianceMatrix wiretap_covariance(const ScenarioConfig& cfg,
                                    const SubcarrierAllocation& alloc,
                                    const RegionRect& window,
                                    const std::vector<RegionRect>& desired,
                                    const QuadratureSpec& quad) {
    return covariance_from_grid(cfg, alloc, wiretap_grid(window, desired, quad));
}

MainlobeWidths mainlobe_widths(const ScenarioConfig& cfg) {
    cfg.validate();
    MainlobeWidths w;
    w.theta_bw = 2.0 * cfg.wavelength() / (cfg.n_antennas * cfg.element_spacing);
    w.range_halfwidth = kSpeedOfLight / cfg.total_bandwidth;
    return w;
}

bool mainlobe_contains_error_region(const ScenarioConfig& cfg, double dtheta_max,
                                    double dr_max) {
    const MainlobeWidths w = mainlobe_widths(cfg);
    return 2.0 * dtheta_max <= w.theta_bw && dr_max <= w.range_halfwidth;
}

GroundPosition clip_position(GroundPosition p, const RegionRect& window) {
    p.angle = std::clamp(p.angle, window.angle_lo, window.angle_hi);
    const double r_floor = std::max(window.range_lo, 1e-9 * window.range_hi);
    p.range = std::clamp(p.range, r_floor, window.range_hi);
    return p;
}

SamplePointSet sample_points_desired(const GroundPosition& est, double dtheta_max,
                                     double dr_max, const RegionRect& window) {
    validate_position(est);
    window.validate();
    SamplePointSet set;
    set.points = {
        {clip_position({est.angle - dtheta_max, est.range}, window), PointRole::DesiredSample},
        {clip_position({est.angle + dtheta_max, est.range}, window), PointRole::DesiredSample},
        {clip_position({est.angle, est.range - dr_max}, window), PointRole::DesiredSample},
        {clip_position({est.angle, est.range + dr_max}, window), PointRole::DesiredSample},
    };
    return set;
}

SamplePointSet sample_points_desired_grid(const GroundPosition& est, double dtheta_max,
                                          double dr_max, int side,
                                          const RegionRect& window) {
    validate_position(est);
    window.validate();
    if (side < 2) throw std::invalid_argument("sample grid needs side >= 2");
    SamplePointSet set;
    set.points.reserve(static_cast<std::size_t>(side) * side);
    for (int i = 0; i < side; ++i) {
        const double f_i = static_cast<double>(i) / (side - 1);
        const double theta = est.angle - dtheta_max + 2.0 * dtheta_max * f_i;
        for (int j = 0; j < side; ++j) {
            const double f_j = static_cast<double>(j) / (side - 1);
            const double r = est.range - dr_max + 2.0 * dr_max * f_j;
            set.points.push_back({clip_position({theta, r}, window), PointRole::DesiredSample});
        }
    }
    return set;
}

SamplePointSet sample_points_sidelobe(const ScenarioConfig& cfg, const GroundPosition& est,
                                      const RegionRect& window) {
    validate_position(est);
    window.validate();
    cfg.validate();
    const double dc = 3.0 / static_cast<double>(cfg.n_antennas);
    const double dr = 3.0 * kSpeedOfLight / (2.0 * cfg.total_bandwidth);
    const double angle_lo = std::acos(std::clamp(std::cos(est.angle) + dc, -1.0, 1.0));
    const double angle_hi = std::acos(std::clamp(std::cos(est.angle) - dc, -1.0, 1.0));
    SamplePointSet set;
    set.points = {
        {clip_position({angle_hi, est.range}, window), PointRole::SidelobeEavesdrop},
        {clip_position({angle_lo, est.range}, window), PointRole::SidelobeEavesdrop},
        {clip_position({est.angle, est.range - dr}, window), PointRole::SidelobeEavesdrop},
        {clip_position({est.angle, est.range + dr}, window), PointRole::SidelobeEavesdrop},
    };
    return set;
}

CovarianceMatrix point_covariance(const ScenarioConfig& cfg,
                                  const SubcarrierAllocation& alloc,
                                  const SamplePointSet& points) {
    if (points.points.empty())
        throw std::invalid_argument("point covariance needs a nonempty point set");
    std::vector<GroundPosition> positions;
    positions.reserve(points.points.size());
    for (const TaggedPoint& p : points.points) positions.push_back(p.pos);

    CovarianceMatrix cov;
    cov.entries = Eigen::MatrixXcd::Zero(cfg.n_antennas, cfg.n_antennas);
    const Eigen::MatrixXcd h = steering_matrix(cfg, alloc, positions);
    cov.entries.selfadjointView<Eigen::Lower>().rankUpdate(h, 1.0);
    cov.entries = cov.entries.selfadjointView<Eigen::Lower>();
    cov.measure = static_cast<double>(positions.size());
    return cov;
}

}  // namespace spwt
