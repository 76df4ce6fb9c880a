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

#ifndef QLAMC_LINK_ABSTRACTION_HPP
#define QLAMC_LINK_ABSTRACTION_HPP

#include "qlamc/common.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace qlamc
{

// One modulation and coding scheme (an action of the link adaptation agents)
struct McsEntry
{
    int index = 0;           // row of 38.214 Table 5.1.3.1-1
    int modulation_bits = 2; // Qm
    double code_rate = 0.0;  // R

    double nominal_efficiency() const { return modulation_bits * code_rate; }
};

// MCS indexes 3..27 of the 64QAM table (38.214 Table 5.1.3.1-1), ordered by
// nominal efficiency. Index 17 (64QAM, 438/1024) carries slightly less than
// index 16 (16QAM, 658/1024) and therefore precedes it.
std::span<const McsEntry> mcs_table();

inline constexpr std::size_t n_mcs_actions = 25;
inline constexpr int n_bits_per_tb = 1024;

// Logistic BLER curve around the Shannon-limit SNR of each MCS plus a fixed gap:
//   snr50 = 10 log10(2^(m r) - 1) + gap,  bler = 1 / (1 + exp(slope (snr - snr50)))
struct BlerModel
{
    double slope_per_db = 1.5;
    double implementation_gap_db = 2.0;

    double snr50_db(const McsEntry &mcs) const;
    void validate() const;
};

double bler(double snr_db, const McsEntry &mcs, const BlerModel &model);

// 1 - bler, evaluated without cancellation so it stays resolvable far below the midpoint
double success_probability(double snr_db, const McsEntry &mcs, const BlerModel &model);

struct CqiConfig
{
    int n_cqi = 30;
    double snr_min_db = -5.0;
    double snr_max_db = 40.0;

    void validate() const;
};

int cqi_quantize(double snr_db, const CqiConfig &cfg);

struct TransmissionOutcome
{
    bool ack = false;
    McsEntry mcs_used;
    double snr_db_at_tx = 0.0;
    double realized_efficiency = 0.0; // m r on ACK, 0 on NACK
    int n_bits = n_bits_per_tb;
};

// One transport block; ack when the uniform draw falls below the success probability
TransmissionOutcome transmit_with_draw(double snr_db, const McsEntry &mcs, const BlerModel &model, double uniform);
TransmissionOutcome transmit(double snr_db, const McsEntry &mcs, const BlerModel &model, Rng &rng);

// (1 - bler) m r
double spectral_efficiency(double bler_value, const McsEntry &mcs);

// Fixed SNR -> MCS lookup table. Each action has a switching threshold at the SNR
// where its BLER equals the target; the highest-efficiency action whose
// threshold is <= SNR is used, the lowest action below every threshold.
class IllaTable
{
  public:
    IllaTable(std::vector<McsEntry> actions, std::vector<double> thresholds_db, double target_bler);

    std::size_t select(double snr_db) const;
    const std::vector<double> &thresholds_db() const { return thresholds_; }
    const std::vector<McsEntry> &actions() const { return actions_; }
    double target_bler() const { return target_; }

  private:
    std::vector<McsEntry> actions_;
    std::vector<double> thresholds_;
    double target_;
};

IllaTable build_illa_table(const BlerModel &model, std::span<const McsEntry> actions, double target_bler = 0.1);

} // namespace qlamc

#endif
