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

#ifndef QLAMC_BEAM_MANAGEMENT_HPP
#define QLAMC_BEAM_MANAGEMENT_HPP

#include "qlamc/channel_model.hpp"

#include <vector>

namespace qlamc
{

enum class BeamGrid
{
    sector,     // beams uniformly spaced in azimuth over the angular sector
    orthogonal, // critically spaced DFT grid in sin(azimuth), orthogonal for N_az == n_beams
};

struct CodebookSpec
{
    int n_beams = 16;
    BeamGrid grid = BeamGrid::sector;
    double sector_min_deg = -60.0;
    double sector_max_deg = 60.0;
    double elevation_deg = 90.0;
    int max_beams = 4096;
};

struct Codebook
{
    Eigen::MatrixXcd columns; // N_antennas x N_beams, unit-norm columns
    std::vector<double> azimuths;

    int beam_count() const { return static_cast<int>(columns.cols()); }
};

Codebook dft_codebook(const ArrayGeometry &geometry, const CodebookSpec &spec);

struct BeamPair
{
    int tx_index = 0;
    int rx_index = 0;
    cplx effective_channel;
    std::int64_t frame_index = 0;
};

// |w^H H f| / sigma^2
double sweep_metric(const ChannelMatrix &h, const Eigen::VectorXcd &w, const Eigen::VectorXcd &f,
                    double noise_variance);

// Exhaustive search over all (tx, rx) codebook pairs. Ties keep the lexicographically
// smallest (tx_index, rx_index).
BeamPair beam_sweep(const ChannelMatrix &h, const Codebook &w_tx, const Codebook &w_rx, double noise_variance);

cplx effective_channel(const ChannelMatrix &h, const BeamPair &pair, const Codebook &w_tx, const Codebook &w_rx);

struct Snr
{
    double linear = 0.0;
    double db = 0.0;
};

// |h|^2 p_s / sigma^2
Snr snr(cplx effective, double noise_variance, double symbol_power);

} // namespace qlamc

#endif
