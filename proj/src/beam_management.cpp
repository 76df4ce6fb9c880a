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

#include "qlamc/beam_management.hpp"

#include <algorithm>
#include <string>

namespace qlamc
{

Codebook dft_codebook(const ArrayGeometry &geometry, const CodebookSpec &spec)
{
    geometry.validate();
    if (spec.n_beams < 1)
        throw ConfigError("codebook: n_beams must be >= 1");
    if (spec.n_beams > spec.max_beams)
        throw ConfigError("codebook: n_beams " + std::to_string(spec.n_beams) + " exceeds the maximum of " +
                          std::to_string(spec.max_beams));

    const int n = spec.n_beams;
    Codebook cb;
    cb.columns.resize(geometry.size(), n);
    cb.azimuths.resize(static_cast<std::size_t>(n));
    const double elevation = deg_to_rad(spec.elevation_deg);

    for (int k = 0; k < n; ++k)
    {
        double az = 0.0;
        if (spec.grid == BeamGrid::sector)
        {
            const double lo = deg_to_rad(spec.sector_min_deg);
            const double hi = deg_to_rad(spec.sector_max_deg);
            az = lo + (hi - lo) * (k + 0.5) / n;
        }
        else
        {
            // spatial frequencies d * sin(az) spaced by 1/n; one beam per DFT bin
            const double d = geometry.element_spacing_wavelengths;
            double u = static_cast<double>(k) / (n * d);
            if (u >= 1.0 / (2.0 * d))
                u -= 1.0 / d;
            az = std::asin(std::clamp(u, -1.0, 1.0));
        }
        cb.azimuths[static_cast<std::size_t>(k)] = az;
        cb.columns.col(k) = steering_vector(geometry, az, elevation);
    }
    return cb;
}

double sweep_metric(const ChannelMatrix &h, const Eigen::VectorXcd &w, const Eigen::VectorXcd &f,
                    double noise_variance)
{
    const cplx g = w.dot(h.entries * f); // Eigen's dot conjugates the left operand
    return std::abs(g) / noise_variance;
}

BeamPair beam_sweep(const ChannelMatrix &h, const Codebook &w_tx, const Codebook &w_rx, double noise_variance)
{
    if (h.entries.cols() != w_tx.columns.rows() || h.entries.rows() != w_rx.columns.rows())
        throw ConfigError("beam sweep: codebook dimensions do not match the channel matrix");

    BeamPair best;
    double best_metric = -1.0;
    for (int tx = 0; tx < w_tx.beam_count(); ++tx)
    {
        for (int rx = 0; rx < w_rx.beam_count(); ++rx)
        {
            const double metric = sweep_metric(h, w_rx.columns.col(rx), w_tx.columns.col(tx), noise_variance);
            if (metric > best_metric)
            {
                best_metric = metric;
                best.tx_index = tx;
                best.rx_index = rx;
            }
        }
    }
    best.effective_channel = effective_channel(h, best, w_tx, w_rx);
    return best;
}

cplx effective_channel(const ChannelMatrix &h, const BeamPair &pair, const Codebook &w_tx, const Codebook &w_rx)
{
    return w_rx.columns.col(pair.rx_index).dot(h.entries * w_tx.columns.col(pair.tx_index));
}

Snr snr(cplx effective, double noise_variance, double symbol_power)
{
    Snr s;
    s.linear = std::norm(effective) * symbol_power / noise_variance;
    s.db = linear_to_db(s.linear);
    return s;
}

} // namespace qlamc
