// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace spwt {

// Propagation constant used throughout the link model (3e8, not the CODATA
// value, so that c/B comes out to round figures like 60 m at B = 5 MHz).
inline constexpr double kSpeedOfLight = 3.0e8;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Transmitter-side parameters of the UAV random-frequency-diverse linear
/// array plus the power/noise budget of the link.
struct ScenarioConfig {
    int n_antennas = 16;              // N_T
    double element_spacing = 0.05;    // d [m], defaults to lambda/2
    double carrier_freq = 3.0e9;      // f_c [Hz]
    double subcarrier_spacing = 5.0e6 / 1024.0;  // delta_f [Hz]
    int n_subcarriers = 1024;         // N
    double total_bandwidth = 5.0e6;   // B = N * delta_f [Hz]
    double uav_height = 100.0;        // d_h [m]
    double total_power = 1.0;         // P [W]
    double alpha1 = 0.5;              // confidential-signal power fraction
    double alpha2 = 0.5;              // artificial-noise power fraction
    double noise_power = 1.0 / std::pow(10.0, 1.5);  // sigma^2 [W]

    double wavelength() const { return kSpeedOfLight / carrier_freq; }

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

/// sigma^2 for a transmit-referenced SNR, i.e. SNR_dB = 10 log10(P / sigma^2).
double noise_power_for_snr(double total_power, double snr_db);

/// The simulation default: 16 antennas at lambda/2, f_c = 3 GHz, 1024
/// subcarriers over 5 MHz, P = 1 W split 0.5/0.5, SNR 15 dB, UAV at 100 m.
ScenarioConfig default_scenario(double snr_db = 15.0, double uav_height_m = 100.0);

/// Ground-plane polar position seen from the projection of the reference
/// antenna: direction angle theta in [0, pi] and range r > 0.
struct GroundPosition {
    double angle = 0.0;  // theta [rad]
    double range = 0.0;  // r [m]
};

void validate_position(const GroundPosition& pos);

}  // namespace spwt
