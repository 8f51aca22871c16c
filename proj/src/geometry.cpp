// SPDX-License-Identifier: Apache-2.0
#include "spwt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "spwt/rng.hpp"

namespace spwt {

void ScenarioConfig::validate() const {
    if (n_antennas < 1) throw std::invalid_argument("n_antennas must be >= 1");
    if (element_spacing <= 0.0) throw std::invalid_argument("element_spacing must be > 0");
    if (carrier_freq <= 0.0) throw std::invalid_argument("carrier_freq must be > 0");
    if (n_subcarriers < 1) throw std::invalid_argument("n_subcarriers must be >= 1");
    if (subcarrier_spacing <= 0.0) throw std::invalid_argument("subcarrier_spacing must be > 0");
    if (uav_height < 0.0) throw std::invalid_argument("uav_height must be >= 0");
    if (total_power <= 0.0) throw std::invalid_argument("total_power must be > 0");
    if (noise_power <= 0.0) throw std::invalid_argument("noise_power must be > 0");
    if (!(alpha1 > 0.0 && alpha1 < 1.0 && alpha2 > 0.0 && alpha2 < 1.0))
        throw std::invalid_argument("power fractions must lie in (0, 1)");
    if (std::abs(alpha1 + alpha2 - 1.0) > 1e-12)
        throw std::invalid_argument("power fractions must sum to 1");
    const double b = static_cast<double>(n_subcarriers) * subcarrier_spacing;
    if (std::abs(b - total_bandwidth) > 1e-9 * total_bandwidth)
        throw std::invalid_argument("total_bandwidth must equal n_subcarriers * subcarrier_spacing");
}

double noise_power_for_snr(double total_power, double snr_db) {
    return total_power / std::pow(10.0, snr_db / 10.0);
}

ScenarioConfig default_scenario(double snr_db, double uav_height_m) {
    ScenarioConfig cfg;
    cfg.uav_height = uav_height_m;
    cfg.noise_power = noise_power_for_snr(cfg.total_power, snr_db);
    cfg.element_spacing = cfg.wavelength() / 2.0;
    cfg.validate();
    return cfg;
}

void validate_position(const GroundPosition& pos) {
    if (!(pos.angle >= 0.0 && pos.angle <= kPi))
        throw std::invalid_argument("position angle must lie in [0, pi]");
    if (!(pos.range > 0.0))
        throw std::invalid_argument("position range must be > 0");
}

EffectiveGeometry effective_geometry(const GroundPosition& pos, double uav_height) {
    validate_position(pos);
    if (uav_height < 0.0) throw std::invalid_argument("uav_height must be >= 0");
    EffectiveGeometry eff;
    eff.range = std::hypot(pos.range, uav_height);
    // |r cos(theta)| <= r <= r', so the argument is always in [-1, 1].
    eff.angle = std::acos(pos.range / eff.range * std::cos(pos.angle));
    return eff;
}

double element_range(double eff_range, double eff_angle, int antenna_index,
                     double element_spacing) {
    if (antenna_index < 1) throw std::invalid_argument("antenna_index is 1-based");
    return eff_range - (antenna_index - 1) * element_spacing * std::cos(eff_angle);
}

SubcarrierAllocation draw_allocation(const ScenarioConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (cfg.n_subcarriers < cfg.n_antennas)
        throw std::invalid_argument("cannot draw " + std::to_string(cfg.n_antennas) +
                                    " distinct subcarriers from a set of " +
                                    std::to_string(cfg.n_subcarriers));
    std::vector<int> pool(cfg.n_subcarriers);
    std::iota(pool.begin(), pool.end(), 0);
    auto engine = make_engine(mix_seed(seed, 0xa110c471ULL));
    // Partial Fisher-Yates: only the first N_T slots are needed.
    for (int i = 0; i < cfg.n_antennas; ++i) {
        std::uniform_int_distribution<int> pick(i, cfg.n_subcarriers - 1);
        std::swap(pool[i], pool[pick(engine)]);
    }
    SubcarrierAllocation alloc;
    alloc.indices.assign(pool.begin(), pool.begin() + cfg.n_antennas);
    return alloc;
}

void validate_allocation(const ScenarioConfig& cfg, const SubcarrierAllocation& alloc) {
    if (alloc.size() != cfg.n_antennas)
        throw std::invalid_argument("allocation must list one subcarrier per antenna");
    std::vector<int> sorted = alloc.indices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("allocation indices must be distinct");
    if (sorted.front() < 0 || sorted.back() >= cfg.n_subcarriers)
        throw std::invalid_argument("allocation index out of [0, N)");
}

namespace {

// psi_n in the cancellation-free form
//   psi_n = (2 pi / c) * (-f_c (n-1) d cos(theta') + k_n df r'_n),
// algebraically equal to 2 pi (f_c + k_n df) r'_n / c - 2 pi f_c r' / c but
// free of the ~1e4-wavelength reference terms, so element 1 on subcarrier 0
// comes out exactly zero.
double raw_phase(const ScenarioConfig& cfg, int k_n, int antenna_index,
                 const EffectiveGeometry& eff) {
    const double offset = (antenna_index - 1) * cfg.element_spacing * std::cos(eff.angle);
    const double rn = eff.range - offset;
    return 2.0 * kPi / kSpeedOfLight *
           (-cfg.carrier_freq * offset + k_n * cfg.subcarrier_spacing * rn);
}

}  // namespace

double phase_shift(const ScenarioConfig& cfg, const SubcarrierAllocation& alloc,
                   const GroundPosition& pos, int antenna_index) {
    validate_allocation(cfg, alloc);
    if (antenna_index < 1 || antenna_index > cfg.n_antennas)
        throw std::invalid_argument("antenna_index must lie in [1, N_T]");
    const EffectiveGeometry eff = effective_geometry(pos, cfg.uav_height);
    const double psi = raw_phase(cfg, alloc.indices[antenna_index - 1], antenna_index, eff);
    double reduced = std::fmod(psi, 2.0 * kPi);
    if (reduced < 0.0) reduced += 2.0 * kPi;
    return reduced;
}

Eigen::VectorXcd steering_vector(const ScenarioConfig& cfg,
                                 const SubcarrierAllocation& alloc,
                                 const GroundPosition& pos) {
    validate_allocation(cfg, alloc);
    const EffectiveGeometry eff = effective_geometry(pos, cfg.uav_height);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_antennas));
    Eigen::VectorXcd h(cfg.n_antennas);
    for (int n = 1; n <= cfg.n_antennas; ++n)
        h(n - 1) = std::polar(scale, raw_phase(cfg, alloc.indices[n - 1], n, eff));
    return h;
}

Eigen::MatrixXcd steering_matrix(const ScenarioConfig& cfg,
                                 const SubcarrierAllocation& alloc,
                                 const std::vector<GroundPosition>& positions) {
    validate_allocation(cfg, alloc);
    Eigen::MatrixXcd h(cfg.n_antennas, positions.size());
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_antennas));
    for (std::size_t p = 0; p < positions.size(); ++p) {
        const EffectiveGeometry eff = effective_geometry(positions[p], cfg.uav_height);
        for (int n = 1; n <= cfg.n_antennas; ++n)
            h(n - 1, p) = std::polar(scale, raw_phase(cfg, alloc.indices[n - 1], n, eff));
    }
    return h;
}

double received_sinr(const ScenarioConfig& cfg, const Eigen::VectorXcd& v,
                     const Eigen::VectorXcd& w, const Eigen::VectorXcd& h) {
    const double signal = std::norm(h.dot(v));
    const double leakage = std::norm(h.dot(w));
    return cfg.alpha1 * cfg.total_power * signal /
           (cfg.alpha2 * cfg.total_power * leakage + cfg.noise_power);
}

}  // namespace spwt
