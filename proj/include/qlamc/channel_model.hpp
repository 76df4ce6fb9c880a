// SPDX-License-Identifier: Apache-2.0
//
// qlamc - Q-learning link adaptation simulator for beam-based 5G NR
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef QLAMC_CHANNEL_MODEL_HPP
#define QLAMC_CHANNEL_MODEL_HPP

#include "qlamc/common.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace qlamc
{

// Uniform rectangular array. The azimuth axis lies in the horizontal plane, the
// elevation axis is vertical. One axis with a single element gives a ULA.
struct ArrayGeometry
{
    int n_elements_azimuth = 1;
    int n_elements_elevation = 1;
    double element_spacing_wavelengths = 0.5;

    int size() const { return n_elements_azimuth * n_elements_elevation; }
    void validate() const;
};

// Array response a(azimuth, elevation), unit norm, every element of magnitude 1/sqrt(N).
// Element (n, m) has phase 2*pi*d*(n*sin(az)*sin(el) + m*cos(el)) with the
// azimuth index n running slowest (Kronecker product a_az (x) a_el).
Eigen::VectorXcd steering_vector(const ArrayGeometry &geometry, double azimuth, double elevation);

struct Scatterer
{
    cplx complex_gain;          // beta_i, fixed for a run
    Vec2 position;              // fixed in space for a run
    double elevation_bs = 0.0;  // departure elevation at the BS, radians
    double elevation_ue = 0.0;  // arrival elevation at the UE, radians
};

struct ChannelConfig
{
    int n_paths = 10;
    double azimuth_mean_deg = 0.0;
    double azimuth_spread_deg = 60.0;   // half width around the mean
    double elevation_mean_deg = 90.0;
    double elevation_spread_deg = 30.0; // half width around the mean
    double scatterer_min_distance_m = 20.0;
    double scatterer_max_distance_m = 120.0;
    double bs_height_m = 15.0;
    double ue_height_m = 1.5;
    double carrier_ghz = 28.0;
    double subcarrier_spacing_khz = 120.0;
    double shadowing_std_db = 6.0;
    double shadowing_correlation_m = 10.0;
    ArrayGeometry bs_array{16, 4, 0.5};
    ArrayGeometry ue_array{1, 1, 0.5};

    double wavelength_m() const { return speed_of_light / (carrier_ghz * 1e9); }
    double symbol_period_s() const { return 1.0 / (subcarrier_spacing_khz * 1e3); }
    void validate() const;
};

struct ScattererSet
{
    std::vector<Scatterer> scatterers;
    double pathloss_db = 0.0;
    double shadowing_db = 0.0;
    Vec2 large_scale_anchor; // UE position at which pathloss/shadowing were last sampled

    // rho in linear scale (pathloss and shadowing combined as a power loss)
    double large_scale_gain() const { return db_to_linear(-(pathloss_db + shadowing_db)); }
};

struct ChannelMatrix
{
    Eigen::MatrixXcd entries; // N_rx x N_tx
    std::int64_t timestamp_symbols = 0;
};

// Per-path geometry at the current UE position
struct PathState
{
    double aod_azimuth = 0.0;
    double aod_elevation = 0.0;
    double aoa_azimuth = 0.0;
    double aoa_elevation = 0.0;
    double doppler_hz = 0.0;
};

// 3GPP TR 38.901 UMa NLOS pathloss (Table 7.4.1-1), dB. Distances below 10 m are clamped.
double pathloss_uma_nlos(double distance_2d_m, double bs_height_m, double ue_height_m, double carrier_ghz);

ScattererSet draw_scatterer_set(const ChannelConfig &config, Vec2 ue_position, Rng &rng);

// Re-evaluate pathloss at the new UE position and evolve the shadowing with
// exponential spatial correlation (Gudmundson).
void update_large_scale(ScattererSet &set, const ChannelConfig &config, Vec2 ue_position, Rng &rng);

std::vector<PathState> path_states(const ChannelConfig &config, const ScattererSet &set, Vec2 ue_position,
                                   Vec2 ue_velocity);

// beta_i * exp(j 2 pi f_i t T_s)
Eigen::VectorXcd path_coefficients(const ChannelConfig &config, const ScattererSet &set,
                                   const std::vector<PathState> &paths, std::int64_t t_symbols);

// H_t = sqrt(rho N_rx N_tx) A_rx diag(beta_t) A_tx^H
ChannelMatrix channel_at(const ChannelConfig &config, const ScattererSet &set, Vec2 ue_position, Vec2 ue_velocity,
                         std::int64_t t_symbols);

// Same channel, accumulated path by path as a sum of rank-one terms
ChannelMatrix channel_at_summation(const ChannelConfig &config, const ScattererSet &set, Vec2 ue_position,
                                   Vec2 ue_velocity, std::int64_t t_symbols);

} // namespace qlamc

#endif
