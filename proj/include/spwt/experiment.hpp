// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spwt/evaluation.hpp"

namespace spwt {

/// Raised for malformed configuration files, keys, or values.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat experiment description parsed from key=value text. Angles are in
/// degrees at this boundary and converted to radians by the accessors.
struct ExperimentConfig {
    // scenario
    int n_antennas = 16;
    double carrier_freq_hz = 3.0e9;
    int n_subcarriers = 1024;
    double bandwidth_hz = 5.0e6;
    double total_power_w = 1.0;
    double alpha1 = 0.5;
    double alpha2 = 0.5;
    double snr_db = 15.0;
    double uav_height_m = 100.0;
    double element_spacing_m = 0.0;  // 0 = lambda/2

    // geometry
    std::vector<std::pair<double, double>> users_deg_m = {{45.0, 300.0}, {120.0, 600.0}};
    double theta_max_deg = 180.0;
    double r_max_m = 1000.0;
    double dtheta_max_deg = 6.0;
    double dr_max_m = 50.0;
    double sigma_theta_deg = 0.0;  // 0 = dtheta_max/3
    double sigma_r_m = 0.0;        // 0 = dr_max/3

    // quadrature
    double desired_dtheta_deg = 0.5;
    double desired_dr_m = 5.0;
    double window_dtheta_deg = 1.0;
    double window_dr_m = 10.0;

    // experiment
    std::vector<SchemeSpec> schemes = {{Scheme::Regional, 4}};
    std::vector<double> snr_list_db = {0.0, 3.0, 6.0, 9.0, 12.0, 15.0};
    int trials = 200;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    int threads = 1;

    // solver
    double bisection_tol = 1e-6;
    int max_outer_iters = 200;
    double sca_tol = 1e-9;
    int randomization_count = 1000;
    bool use_sca_engine = false;

    void validate() const;  // throws ConfigError

    ScenarioConfig scenario() const;
    RegionRect window() const;
    std::vector<GroundPosition> estimates() const;
    ErrorModel error_model() const;
    QuadratureSettings quadrature() const;
    SolverSettings solver() const;
};

/// The embedded simulation default (two users at (45 deg, 300 m) and
/// (120 deg, 600 m), the 180 deg x 1000 m window, and so on).
ExperimentConfig default_experiment();

/// Renders a config as the key=value text the parser accepts.
std::string config_text(const ExperimentConfig& cfg);

/// Parses a key=value file ('#' comments, blank lines ignored). Unknown keys
/// are rejected.
ExperimentConfig parse_config_file(const std::string& path);

/// Applies a single "key=value" override.
void apply_override(ExperimentConfig& cfg, const std::string& key_value);

/// Writes <out_dir>/surface.csv (header theta_deg,range_m,sinr_db) for the
/// first configured scheme and returns the path.
std::string run_surface(const ExperimentConfig& cfg);

/// Writes <out_dir>/sweep.csv (header snr_db,scheme,n_points,trials,mean_sr,
/// std_sr), one row per scheme x SNR, and returns the path.
std::string run_sweep(const ExperimentConfig& cfg);

/// Designs beamformers for the first configured scheme, writes
/// <out_dir>/design.csv (header part,index,re,im), and returns the pair.
BeamformerPair run_design(const ExperimentConfig& cfg, std::string* path_out = nullptr);

// ---------------------------------------------------------------------------
// Oracle suite: the independent checks that gate a release.
// ---------------------------------------------------------------------------

struct OracleCheck {
    std::string name;
    double tolerance = 0.0;
    double measured = 0.0;
    bool pass = false;
};

struct OracleReport {
    std::vector<OracleCheck> checks;
    bool all_pass = true;
};

struct OracleSuiteOptions {
    std::uint64_t seed = 1;
    int eig_instances = 20;
    // test hook: flips the sign of one off-diagonal covariance entry so the
    // suite's sensitivity can itself be verified
    bool inject_covariance_fault = false;
};

/// Runs every derived-value oracle (generalized-eigenvalue check, SCA vs
/// bisection, quadrature refinement, duplicate evaluations, covariance
/// invariants) and prints one line per check to `out` when given.
OracleReport run_oracle_suite(const OracleSuiteOptions& options, std::ostream* out);

/// Random Hermitian test instance with PD denominators, used by the oracle
/// suite and the acceptance checks.
MaxMinRatioProblem random_ratio_problem(int dim, int n_ratios, std::uint64_t seed);

/// Independent route to max_u (u^H A u)/(u^H B u) via the generalized
/// Hermitian eigendecomposition; never used by the solvers themselves.
double generalized_rayleigh_max(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace spwt
