// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "spwt/scenario.hpp"

namespace spwt {

/// Geometry of a ground position as seen by the elevated array: slant range
/// r' = sqrt(r^2 + d_h^2) and the cone angle theta' between the incoming ray
/// and the array axis, satisfying r' cos(theta') = r cos(theta).
struct EffectiveGeometry {
    double angle = 0.0;  // theta' [rad]
    double range = 0.0;  // r' [m]
};

EffectiveGeometry effective_geometry(const GroundPosition& pos, double uav_height);

/// Distance from element n (1-based, element 1 is the reference) to the
/// receiver under the far-field linear-array approximation.
double element_range(double eff_range, double eff_angle, int antenna_index,
                     double element_spacing);

/// Per-antenna subcarrier indices k_n, each in [0, N-1], all distinct.
struct SubcarrierAllocation {
    std::vector<int> indices;

    int size() const { return static_cast<int>(indices.size()); }
};

/// Draws N_T distinct subcarrier indices uniformly without replacement.
/// Identical seeds give identical allocations. Throws if N < N_T.
SubcarrierAllocation draw_allocation(const ScenarioConfig& cfg, std::uint64_t seed);

void validate_allocation(const ScenarioConfig& cfg, const SubcarrierAllocation& alloc);

/// Phase of element n at (theta, r) relative to the reference phase of
/// element 1 on the carrier, reduced into [0, 2*pi). Element 1 on subcarrier
/// index 0 has zero phase shift by construction.
double phase_shift(const ScenarioConfig& cfg, const SubcarrierAllocation& alloc,
                   const GroundPosition& pos, int antenna_index);

/// Normalized steering vector h(theta, r): entry n is exp(j psi_n)/sqrt(N_T).
Eigen::VectorXcd steering_vector(const ScenarioConfig& cfg,
                                 const SubcarrierAllocation& alloc,
                                 const GroundPosition& pos);

/// Steering vectors for a batch of positions, one column per position.
Eigen::MatrixXcd steering_matrix(const ScenarioConfig& cfg,
                                 const SubcarrierAllocation& alloc,
                                 const std::vector<GroundPosition>& positions);

/// SINR at a receiver with steering vector h when the array transmits
/// beamformer v and artificial noise w:
///   alpha1 P |h^H v|^2 / (alpha2 P |h^H w|^2 + sigma^2).
double received_sinr(const ScenarioConfig& cfg, const Eigen::VectorXcd& v,
                     const Eigen::VectorXcd& w, const Eigen::VectorXcd& h);

}  // namespace spwt
