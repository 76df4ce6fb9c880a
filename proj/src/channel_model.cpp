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

#include "qlamc/channel_model.hpp"

#include <algorithm>
#include <string>

namespace qlamc
{

void ArrayGeometry::validate() const
{
    if (n_elements_azimuth <= 0 || n_elements_elevation <= 0)
        throw ConfigError("array geometry: element counts must be positive (got " +
                          std::to_string(n_elements_azimuth) + " x " + std::to_string(n_elements_elevation) + ")");
    if (!(element_spacing_wavelengths > 0.0))
        throw ConfigError("array geometry: element spacing must be positive");
}

Eigen::VectorXcd steering_vector(const ArrayGeometry &geometry, double azimuth, double elevation)
{
    geometry.validate();
    const int n_az = geometry.n_elements_azimuth;
    const int n_el = geometry.n_elements_elevation;
    const double k = 2.0 * pi * geometry.element_spacing_wavelengths;
    const double u = std::sin(azimuth) * std::sin(elevation);
    const double v = std::cos(elevation);
    const double amplitude = 1.0 / std::sqrt(static_cast<double>(geometry.size()));

    Eigen::VectorXcd a(geometry.size());
    for (int n = 0; n < n_az; ++n)
        for (int m = 0; m < n_el; ++m)
            a(n * n_el + m) = std::polar(amplitude, k * (n * u + m * v));
    return a;
}

void ChannelConfig::validate() const
{
    bs_array.validate();
    ue_array.validate();
    if (n_paths < 1)
        throw ConfigError("channel.n_paths must be >= 1");
    if (azimuth_spread_deg < 0.0 || elevation_spread_deg < 0.0)
        throw ConfigError("channel angle spreads must be non-negative");
    if (!(scatterer_min_distance_m > 0.0) || scatterer_max_distance_m < scatterer_min_distance_m)
        throw ConfigError("channel scatterer distance range is invalid");
    if (!(carrier_ghz > 0.0) || !(subcarrier_spacing_khz > 0.0))
        throw ConfigError("channel carrier and subcarrier spacing must be positive");
    if (!(bs_height_m > ue_height_m) || !(ue_height_m > 0.0))
        throw ConfigError("channel heights must satisfy bs_height_m > ue_height_m > 0");
    if (shadowing_std_db < 0.0 || !(shadowing_correlation_m > 0.0))
        throw ConfigError("channel shadowing parameters are invalid");
}

double pathloss_uma_nlos(double distance_2d_m, double bs_height_m, double ue_height_m, double carrier_ghz)
{
    const double d2 = std::max(distance_2d_m, 10.0);
    const double dh = bs_height_m - ue_height_m;
    const double d3 = std::sqrt(d2 * d2 + dh * dh);
    const double log_fc = std::log10(carrier_ghz);

    // effective environment height h_E = 1 m
    const double breakpoint = 4.0 * (bs_height_m - 1.0) * (ue_height_m - 1.0) * carrier_ghz * 1e9 / speed_of_light;
    double pl_los;
    if (d2 <= breakpoint)
        pl_los = 28.0 + 22.0 * std::log10(d3) + 20.0 * log_fc;
    else
        pl_los = 28.0 + 40.0 * std::log10(d3) + 20.0 * log_fc -
                 9.0 * std::log10(breakpoint * breakpoint + dh * dh);

    const double pl_nlos = 13.54 + 39.08 * std::log10(d3) + 20.0 * log_fc - 0.6 * (ue_height_m - 1.5);
    return std::max(pl_los, pl_nlos);
}

ScattererSet draw_scatterer_set(const ChannelConfig &config, Vec2 ue_position, Rng &rng)
{
    config.validate();
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> radius(config.scatterer_min_distance_m, config.scatterer_max_distance_m);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double gain_scale = std::sqrt(0.5 / config.n_paths);

    ScattererSet set;
    set.scatterers.reserve(config.n_paths);
    for (int i = 0; i < config.n_paths; ++i)
    {
        Scatterer s;
        const double az = deg_to_rad(config.azimuth_mean_deg + config.azimuth_spread_deg * unit(rng));
        s.elevation_bs = deg_to_rad(config.elevation_mean_deg + config.elevation_spread_deg * unit(rng));
        s.elevation_ue = deg_to_rad(config.elevation_mean_deg + config.elevation_spread_deg * unit(rng));
        s.position = Vec2::polar(radius(rng), az);
        const double re = normal(rng);
        const double im = normal(rng);
        s.complex_gain = cplx(re, im) * gain_scale;
        set.scatterers.push_back(s);
    }
    set.pathloss_db =
        pathloss_uma_nlos(ue_position.norm(), config.bs_height_m, config.ue_height_m, config.carrier_ghz);
    set.shadowing_db = config.shadowing_std_db * normal(rng);
    set.large_scale_anchor = ue_position;
    return set;
}

void update_large_scale(ScattererSet &set, const ChannelConfig &config, Vec2 ue_position, Rng &rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    const double moved = (ue_position - set.large_scale_anchor).norm();
    const double rho = std::exp(-moved / config.shadowing_correlation_m);
    set.shadowing_db = rho * set.shadowing_db + std::sqrt(1.0 - rho * rho) * config.shadowing_std_db * normal(rng);
    set.pathloss_db =
        pathloss_uma_nlos(ue_position.norm(), config.bs_height_m, config.ue_height_m, config.carrier_ghz);
    set.large_scale_anchor = ue_position;
}

std::vector<PathState> path_states(const ChannelConfig &config, const ScattererSet &set, Vec2 ue_position,
                                   Vec2 ue_velocity)
{
    const double lambda = config.wavelength_m();
    std::vector<PathState> out;
    out.reserve(set.scatterers.size());
    for (const auto &s : set.scatterers)
    {
        PathState p;
        p.aod_azimuth = s.position.azimuth();
        p.aod_elevation = s.elevation_bs;
        const Vec2 to_scatterer = s.position - ue_position;
        const double dist = to_scatterer.norm();
        p.aoa_azimuth = to_scatterer.azimuth();
        p.aoa_elevation = s.elevation_ue;
        // f = (v / lambda) cos(angle between velocity and arrival direction)
        p.doppler_hz = dist > 0.0 ? ue_velocity.dot(to_scatterer) / (dist * lambda) : 0.0;
        out.push_back(p);
    }
    return out;
}

Eigen::VectorXcd path_coefficients(const ChannelConfig &config, const ScattererSet &set,
                                   const std::vector<PathState> &paths, std::int64_t t_symbols)
{
    const double elapsed = static_cast<double>(t_symbols) * config.symbol_period_s();
    Eigen::VectorXcd beta(static_cast<Eigen::Index>(set.scatterers.size()));
    for (std::size_t i = 0; i < set.scatterers.size(); ++i)
        beta(static_cast<Eigen::Index>(i)) =
            set.scatterers[i].complex_gain * std::polar(1.0, 2.0 * pi * paths[i].doppler_hz * elapsed);
    return beta;
}

namespace
{
double array_scale(const ChannelConfig &config, const ScattererSet &set)
{
    return std::sqrt(set.large_scale_gain() * config.bs_array.size() * config.ue_array.size());
}
} // namespace

ChannelMatrix channel_at(const ChannelConfig &config, const ScattererSet &set, Vec2 ue_position, Vec2 ue_velocity,
                         std::int64_t t_symbols)
{
    const auto paths = path_states(config, set, ue_position, ue_velocity);
    const Eigen::VectorXcd beta = path_coefficients(config, set, paths, t_symbols);
    const auto n_paths = static_cast<Eigen::Index>(paths.size());

    Eigen::MatrixXcd a_tx(config.bs_array.size(), n_paths);
    Eigen::MatrixXcd a_rx(config.ue_array.size(), n_paths);
    for (Eigen::Index i = 0; i < n_paths; ++i)
    {
        const auto &p = paths[static_cast<std::size_t>(i)];
        a_tx.col(i) = steering_vector(config.bs_array, p.aod_azimuth, p.aod_elevation);
        a_rx.col(i) = steering_vector(config.ue_array, p.aoa_azimuth, p.aoa_elevation);
    }

    ChannelMatrix h;
    h.entries = array_scale(config, set) * (a_rx * beta.asDiagonal() * a_tx.adjoint());
    h.timestamp_symbols = t_symbols;
    return h;
}

ChannelMatrix channel_at_summation(const ChannelConfig &config, const ScattererSet &set, Vec2 ue_position,
                                   Vec2 ue_velocity, std::int64_t t_symbols)
{
    const auto paths = path_states(config, set, ue_position, ue_velocity);
    const Eigen::VectorXcd beta = path_coefficients(config, set, paths, t_symbols);

    ChannelMatrix h;
    h.entries = Eigen::MatrixXcd::Zero(config.ue_array.size(), config.bs_array.size());
    for (std::size_t i = 0; i < paths.size(); ++i)
    {
        const Eigen::VectorXcd a_tx = steering_vector(config.bs_array, paths[i].aod_azimuth, paths[i].aod_elevation);
        const Eigen::VectorXcd a_rx = steering_vector(config.ue_array, paths[i].aoa_azimuth, paths[i].aoa_elevation);
        h.entries += beta(static_cast<Eigen::Index>(i)) * (a_rx * a_tx.adjoint());
    }
    h.entries *= array_scale(config, set);
    h.timestamp_symbols = t_symbols;
    return h;
}

} // namespace qlamc
