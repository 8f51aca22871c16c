// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spwt/solver.hpp"

namespace spwt {

/// Truncated-Gaussian position-error model: independent zero-mean Gaussians
/// redrawn until they land inside [-dtheta_max, dtheta_max] x [-dr_max, dr_max].
struct ErrorModel {
    double dtheta_max = deg2rad(6.0);  // [rad]
    double dr_max = 50.0;              // [m]
    double sigma_theta = deg2rad(2.0); // [rad]
    double sigma_r = 50.0 / 3.0;       // [m]

    /// sigma = bound / 3 on both axes.
    static ErrorModel from_bounds(double dtheta_max, double dr_max);
    void validate() const;
};

struct PositionError {
    double dtheta = 0.0;
    double dr = 0.0;
};

/// Deterministic for a given (seed, trial) pair.
PositionError draw_error(const ErrorModel& model, std::uint64_t seed, std::uint64_t trial);

/// max(0, min_m log2(1+SINR_dm) - max_k log2(1+SINR_ek)); the subtrahend is
/// zero when no eavesdropper positions are given.
double secrecy_rate(const ScenarioConfig& cfg, const BeamformerPair& pair,
                    const std::vector<GroundPosition>& users,
                    const std::vector<GroundPosition>& eaves,
                    const SubcarrierAllocation& alloc);

/// SINR of a fixed design evaluated over a grid; row-major, angle outer.
struct SinrField {
    std::vector<GroundPosition> nodes;
    std::vector<double> sinr;
    std::size_t n_angle = 0;
    std::size_t n_range = 0;
};

SinrField sinr_surface(const ScenarioConfig& cfg, const BeamformerPair& pair,
                       const SubcarrierAllocation& alloc, const RegionRect& window,
                       const QuadratureSpec& grid_steps);

/// Mean SINR over the field nodes that lie inside (or, with inside=false,
/// outside) every one of the given rectangles.
double mean_sinr(const SinrField& field, const std::vector<RegionRect>& regions, bool inside);

GroundPosition peak_position(const SinrField& field);

/// Largest received SINR over the wiretap grid nodes for a fixed design.
double worst_eavesdropper_sinr(const ScenarioConfig& cfg, const BeamformerPair& pair,
                               const Eigen::MatrixXcd& eaves_steering);

struct ResultRecord {
    int trial = 0;
    double snr_db = 0.0;
    SchemeSpec scheme;
    std::vector<GroundPosition> estimates;
    std::vector<GroundPosition> true_positions;
    std::vector<double> user_sinr;
    double worst_eaves_sinr = 0.0;
    double secrecy = 0.0;   // [bits/s/Hz]
    bool ok = false;
    std::string message;    // failure reason when !ok
};

struct SweepPoint {
    double snr_db = 0.0;
    double mean_sr = 0.0;
    double std_sr = 0.0;
    int n_ok = 0;
};

struct MonteCarloResult {
    std::vector<SweepPoint> per_snr;
    std::vector<ResultRecord> records;  // (snr, trial) lexicographic order
};

/// Per trial: fresh subcarrier allocation, per-user truncated-Gaussian errors,
/// true position = estimate + error, beamformers designed from the estimates,
/// SR evaluated with users at the true positions against the worst wiretap
/// grid node. Trial randomness derives from (seed, trial), so results are
/// identical for any thread count.
MonteCarloResult monte_carlo_sr(const ScenarioConfig& base, const RegionRect& window,
                                const std::vector<GroundPosition>& estimates,
                                const SchemeSpec& scheme,
                                const std::vector<double>& snr_db_list, int n_trials,
                                const ErrorModel& error_model, const QuadratureSettings& quad,
                                const SolverSettings& settings, std::uint64_t seed,
                                int n_threads);

/// Covariance-construction work per design. Regional cost scales with the
/// window node count; point-scheme cost never reads the quadrature spec.
struct OpCountReport {
    std::uint64_t quadrature_nodes = 0;  // nodes feeding the covariance pass
    std::uint64_t covariance_ops = 0;    // nodes * (2 N_T - 1)
    bool quad_dependent = false;
};

OpCountReport op_count_report(const ScenarioConfig& cfg, const RegionRect& window,
                              int n_users, const SchemeSpec& scheme,
                              const QuadratureSpec& window_quad);

}  // namespace spwt
