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

#ifndef QLAMC_COMMON_HPP
#define QLAMC_COMMON_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace qlamc
{
using cplx = std::complex<double>;

// Raised for invalid parameters, bad config files and dimension mismatches
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Raised for failures while running (I/O, refused overwrites, missing artifacts)
class RuntimeError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr double speed_of_light = 299792458.0;
inline constexpr double pi = std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double kmh_to_mps(double kmh) { return kmh / 3.6; }

// Point or velocity in the horizontal plane, meters (or m/s). The BS sits at the origin.
struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double azimuth() const { return std::atan2(y, x); }
    static Vec2 polar(double radius, double azimuth) { return {radius * std::cos(azimuth), radius * std::sin(azimuth)}; }
};

using Rng = std::mt19937_64;

// Independent random streams of one Monte Carlo run. Agents never share a stream
// with the environment, so every agent sees the same channel for the same run.
enum class Stream : std::uint64_t
{
    scatterers = 1,
    shadowing = 2,
    mobility = 3,
    transmission = 4,
    agent = 5,
};

inline Rng make_rng(std::uint64_t seed, std::uint64_t run, Stream stream, std::uint64_t sub = 0)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(sub)};
    return Rng(seq);
}

// Uniform draw in [0, 1) that does not depend on the standard library's distribution code
inline double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace qlamc

#endif
