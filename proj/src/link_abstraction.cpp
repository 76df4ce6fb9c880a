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

#include "qlamc/link_abstraction.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace qlamc
{

namespace
{
// {I_MCS, Qm, R x 1024}
constexpr std::array<std::array<int, 3>, n_mcs_actions> mcs_rows{{
    {3, 2, 251},  {4, 2, 308},  {5, 2, 379},  {6, 2, 449},  {7, 2, 526},  {8, 2, 602},  {9, 2, 679},
    {10, 4, 340}, {11, 4, 378}, {12, 4, 434}, {13, 4, 490}, {14, 4, 553}, {15, 4, 616}, {17, 6, 438},
    {16, 4, 658}, {18, 6, 466}, {19, 6, 517}, {20, 6, 567}, {21, 6, 616}, {22, 6, 666}, {23, 6, 719},
    {24, 6, 772}, {25, 6, 822}, {26, 6, 873}, {27, 6, 910},
}};

std::array<McsEntry, n_mcs_actions> make_table()
{
    std::array<McsEntry, n_mcs_actions> t{};
    for (std::size_t i = 0; i < n_mcs_actions; ++i)
        t[i] = McsEntry{mcs_rows[i][0], mcs_rows[i][1], mcs_rows[i][2] / 1024.0};
    return t;
}
} // namespace

std::span<const McsEntry> mcs_table()
{
    static const auto table = make_table();
    return table;
}

double BlerModel::snr50_db(const McsEntry &mcs) const
{
    return linear_to_db(std::exp2(mcs.nominal_efficiency()) - 1.0) + implementation_gap_db;
}

void BlerModel::validate() const
{
    if (!(slope_per_db > 0.0) || !std::isfinite(slope_per_db))
        throw ConfigError("BLER model: slope must be positive and finite");
    if (!std::isfinite(implementation_gap_db))
        throw ConfigError("BLER model: gap must be finite");
}

double bler(double snr_db, const McsEntry &mcs, const BlerModel &model)
{
    return 1.0 / (1.0 + std::exp(model.slope_per_db * (snr_db - model.snr50_db(mcs))));
}

double success_probability(double snr_db, const McsEntry &mcs, const BlerModel &model)
{
    return 1.0 / (1.0 + std::exp(-model.slope_per_db * (snr_db - model.snr50_db(mcs))));
}

void CqiConfig::validate() const
{
    if (n_cqi < 2)
        throw ConfigError("CQI config: n_cqi must be >= 2");
    if (!(snr_max_db > snr_min_db))
        throw ConfigError("CQI config: snr_max_db must exceed snr_min_db");
}

int cqi_quantize(double snr_db, const CqiConfig &cfg)
{
    if (snr_db <= cfg.snr_min_db)
        return 0;
    if (snr_db >= cfg.snr_max_db)
        return cfg.n_cqi - 1;
    const double scaled = (snr_db - cfg.snr_min_db) * (cfg.n_cqi - 1) / (cfg.snr_max_db - cfg.snr_min_db);
    return static_cast<int>(std::floor(scaled));
}

TransmissionOutcome transmit_with_draw(double snr_db, const McsEntry &mcs, const BlerModel &model, double uniform)
{
    TransmissionOutcome out;
    out.ack = uniform < success_probability(snr_db, mcs, model);
    out.mcs_used = mcs;
    out.snr_db_at_tx = snr_db;
    out.realized_efficiency = out.ack ? mcs.nominal_efficiency() : 0.0;
    return out;
}

TransmissionOutcome transmit(double snr_db, const McsEntry &mcs, const BlerModel &model, Rng &rng)
{
    return transmit_with_draw(snr_db, mcs, model, uniform01(rng));
}

double spectral_efficiency(double bler_value, const McsEntry &mcs)
{
    return (1.0 - bler_value) * mcs.nominal_efficiency();
}

IllaTable::IllaTable(std::vector<McsEntry> actions, std::vector<double> thresholds_db, double target_bler)
    : actions_(std::move(actions)), thresholds_(std::move(thresholds_db)), target_(target_bler)
{
    if (actions_.empty() || actions_.size() != thresholds_.size())
        throw ConfigError("ILLA table: need one threshold per action");
    for (std::size_t i = 1; i < thresholds_.size(); ++i)
        if (!(thresholds_[i] > thresholds_[i - 1]))
            throw ConfigError("ILLA table: thresholds must be strictly increasing (action " + std::to_string(i) +
                              ", MCS " + std::to_string(actions_[i].index) + ")");
}

std::size_t IllaTable::select(double snr_db) const
{
    // thresholds are sorted: count of thresholds <= snr, minus one, floored at 0
    const auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), snr_db);
    const auto n_ok = static_cast<std::size_t>(it - thresholds_.begin());
    return n_ok == 0 ? 0 : n_ok - 1;
}

IllaTable build_illa_table(const BlerModel &model, std::span<const McsEntry> actions, double target_bler)
{
    model.validate();
    if (!(target_bler > 0.0 && target_bler < 1.0))
        throw ConfigError("ILLA table: target BLER must lie in (0, 1)");
    std::vector<double> thresholds;
    thresholds.reserve(actions.size());
    const double offset = std::log((1.0 - target_bler) / target_bler) / model.slope_per_db;
    for (const auto &mcs : actions)
        thresholds.push_back(model.snr50_db(mcs) + offset);
    return IllaTable({actions.begin(), actions.end()}, std::move(thresholds), target_bler);
}

} // namespace qlamc
