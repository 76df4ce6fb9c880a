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

#ifndef QLAMC_TESTS_ORACLES_HPP
#define QLAMC_TESTS_ORACLES_HPP

// Reference implementations written directly from the closed forms, sharing no
// code with the library. Kept deliberately naive.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle
{

using C = std::complex<double>;
constexpr double PI = 3.14159265358979323846;

// CQI: clamp below / above, otherwise floor of the scaled offset
inline int cqi(double snr, int n, double lo, double hi)
{
    if (snr <= lo)
        return 0;
    if (snr >= hi)
        return n - 1;
    const double idx = std::floor((snr - lo) * static_cast<double>(n - 1) / (hi - lo));
    return static_cast<int>(idx);
}

// Planar array response, azimuth index slowest
inline std::vector<C> steering(int n_az, int n_el, double d, double az, double el)
{
    std::vector<C> a;
    const double norm = std::sqrt(static_cast<double>(n_az * n_el));
    for (int n = 0; n < n_az; ++n)
        for (int m = 0; m < n_el; ++m)
        {
            const double phase = 2.0 * PI * d * (n * std::sin(az) * std::sin(el) + m * std::cos(el));
            a.push_back(std::exp(C(0.0, phase)) / norm);
        }
    return a;
}

// 38.901 UMa: LOS with breakpoint, NLOS = max(LOS, NLOS'), h_E = 1 m
inline double uma_nlos_db(double d2d, double hbs, double hut, double fc_ghz)
{
    if (d2d < 10.0)
        d2d = 10.0;
    const double d3d = std::hypot(d2d, hbs - hut);
    const double dbp = 4.0 * (hbs - 1.0) * (hut - 1.0) * fc_ghz * 1.0e9 / 299792458.0;
    const double pl1 = 28.0 + 22.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz);
    const double pl2 = 28.0 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz) -
                       9.0 * std::log10(dbp * dbp + (hbs - hut) * (hbs - hut));
    const double los = d2d <= dbp ? pl1 : pl2;
    const double nlos = 13.54 + 39.08 * std::log10(d3d) + 20.0 * std::log10(fc_ghz) - 0.6 * (hut - 1.5);
    return los > nlos ? los : nlos;
}

inline double logistic_bler(double snr_db, int m, double r, double slope, double gap)
{
    const double snr50 = 10.0 * std::log10(std::pow(2.0, m * r) - 1.0) + gap;
    return 1.0 / (1.0 + std::exp(slope * (snr_db - snr50)));
}

inline double q_update(double q, double r, double alpha, double gamma, double max_next)
{
    return (1.0 - alpha) * q + alpha * (r + gamma * max_next);
}

// |w^H H f| with explicit loops; H is row-major n_rx x n_tx
inline double beam_metric(const std::vector<C> &h, int n_rx, int n_tx, const std::vector<C> &w, const std::vector<C> &f)
{
    C acc = 0.0;
    for (int i = 0; i < n_rx; ++i)
    {
        C row = 0.0;
        for (int j = 0; j < n_tx; ++j)
            row += h[static_cast<std::size_t>(i * n_tx + j)] * f[static_cast<std::size_t>(j)];
        acc += std::conj(w[static_cast<std::size_t>(i)]) * row;
    }
    return std::abs(acc);
}

} // namespace oracle

#endif
