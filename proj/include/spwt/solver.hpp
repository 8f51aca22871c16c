// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "spwt/regions.hpp"

namespace spwt {

/// max over unit-trace PSD R of min_m tr(R A_m) / tr(R B_m).
/// Power and noise scalings are pre-applied to the matrices.
struct MaxMinRatioProblem {
    std::vector<Eigen::MatrixXcd> numerators;    // A_m, Hermitian PSD
    std::vector<Eigen::MatrixXcd> denominators;  // B_m, Hermitian PD

    int dim() const { return numerators.empty() ? 0 : static_cast<int>(numerators.front().rows()); }
    int n_ratios() const { return static_cast<int>(numerators.size()); }

    /// Throws std::invalid_argument on shape mismatch, non-Hermitian input,
    /// or a denominator that is not positive definite.
    void validate() const;

    double min_ratio(const Eigen::MatrixXcd& R) const;
    double min_ratio(const Eigen::VectorXcd& u) const;
};

/// SLNR problem for the confidential beamformer v:
///   A_m = alpha1 P R_dm,  B_m = alpha1 P R_e + sigma^2 I (shared).
MaxMinRatioProblem slnr_problem(const ScenarioConfig& cfg,
                                const std::vector<CovarianceMatrix>& desired,
                                const CovarianceMatrix& wiretap);

/// ANLNR problem for the artificial-noise vector w:
///   A_m = alpha2 P R_e (shared),  B_m = alpha2 P R_dm + sigma^2 I.
MaxMinRatioProblem anlnr_problem(const ScenarioConfig& cfg,
                                 const std::vector<CovarianceMatrix>& desired,
                                 const CovarianceMatrix& wiretap);

struct SolverSettings {
    double bisection_tol = 1e-6;     // relative bracket width on the ratio level
    int max_outer_iters = 200;       // bisection steps / SCA outer iterations
    double sca_tol = 1e-9;           // relative objective-change stop for SCA
    int randomization_count = 1000;  // rank-one extraction candidates
    bool use_sca_engine = false;     // design_beamformers solver selection
    bool sca_random_init = false;    // seed-dependent SCA start instead of I/N

    void validate() const;
};

struct SolverReport {
    std::vector<double> objective_trace;  // min-ratio per outer iteration
    double relaxed_value = 0.0;           // optimum of the PSD relaxation
    double achieved_min_ratio = 0.0;      // min-ratio of the extracted vector
    double relaxation_gap = 0.0;          // (relaxed - achieved) / relaxed
    int iterations = 0;
    bool converged = true;
};

struct RelaxedSolution {
    Eigen::MatrixXcd R;  // unit-trace PSD maximizer
    double value = 0.0;
    SolverReport report;
};

/// Quasi-convex bisection on the achievable ratio level t. Feasibility of a
/// level is certified by min over the probability simplex of the largest
/// eigenvalue of sum_m lambda_m (A_m - t B_m); the maximizing R is rebuilt
/// from the top eigenspace of the optimal certificate matrix.
RelaxedSolution solve_maxmin_ratio(const MaxMinRatioProblem& problem,
                                   const SolverSettings& settings);

/// Successive convex approximation: exponential-variable substitution, the
/// shared log-denominator linearized at the previous iterate, and the
/// resulting concave subproblem maximized over the spectrahedron. The seed
/// only matters with SolverSettings::sca_random_init.
RelaxedSolution sca_solve(const MaxMinRatioProblem& problem,
                          const SolverSettings& settings, std::uint64_t seed);

/// Rank-one extraction: the top eigenvector when R is numerically rank one,
/// otherwise the best of `randomization_count` Gaussian candidates shaped by
/// R (ties broken toward the lowest candidate index).
Eigen::VectorXcd rank_one_extract(const Eigen::MatrixXcd& R,
                                  const MaxMinRatioProblem& problem,
                                  const SolverSettings& settings, std::uint64_t seed);

enum class Scheme { Regional, Point, NonRobust };

/// Scheme selector plus the per-user desired sample count for Scheme::Point
/// (4 = error-rectangle extreme points, 16/64 = square sample grids).
struct SchemeSpec {
    Scheme kind = Scheme::Regional;
    int n_points = 4;

    void validate() const;
};

const char* scheme_name(Scheme kind);

struct QuadratureSettings {
    QuadratureSpec desired = QuadratureSpec::desired_default();
    QuadratureSpec window = QuadratureSpec::window_default();
};

struct BeamformerPair {
    Eigen::VectorXcd v;  // confidential beamformer, unit norm
    Eigen::VectorXcd w;  // artificial-noise vector, unit norm
    SolverReport v_report;
    SolverReport w_report;
};

/// Covariance pair feeding the two design problems.
struct DesignCovariances {
    std::vector<CovarianceMatrix> desired;  // one per user
    CovarianceMatrix wiretap;
};

DesignCovariances build_design_covariances(const ScenarioConfig& cfg,
                                           const SubcarrierAllocation& alloc,
                                           const SchemeSpec& scheme,
                                           const std::vector<GroundPosition>& estimates,
                                           double dtheta_max, double dr_max,
                                           const RegionRect& window,
                                           const QuadratureSettings& quad);

/// Designs v by max-min SLNR, then w by max-min ANLNR on the same
/// covariances, both followed by rank-one extraction.
BeamformerPair design_beamformers(const ScenarioConfig& cfg, const SchemeSpec& scheme,
                                  const std::vector<GroundPosition>& estimates,
                                  const SubcarrierAllocation& alloc,
                                  double dtheta_max, double dr_max,
                                  const RegionRect& window, const QuadratureSettings& quad,
                                  const SolverSettings& settings, std::uint64_t seed);

}  // namespace spwt
