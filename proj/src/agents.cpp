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

#include "qlamc/agents.hpp"

#include <algorithm>
#include <limits>

namespace qlamc
{

std::string to_string(RewardKind kind) { return kind == RewardKind::bler ? "bler" : "se"; }

RewardKind reward_kind_from_string(const std::string &name)
{
    if (name == "bler")
        return RewardKind::bler;
    if (name == "se")
        return RewardKind::se;
    throw ConfigError("unknown reward kind '" + name + "' (expected bler or se)");
}

QTable::QTable(int n_states, int n_actions) : n_states_(n_states), n_actions_(n_actions)
{
    if (n_states < 1 || n_actions < 1)
        throw ConfigError("Q-table dimensions must be positive");
    const auto n = static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_actions);
    values_.assign(n, 0.0);
    visits_.assign(n, 0);
}

std::size_t QTable::offset(int state, int action) const
{
    if (state < 0 || state >= n_states_ || action < 0 || action >= n_actions_)
        throw ConfigError("Q-table index (" + std::to_string(state) + ", " + std::to_string(action) +
                          ") out of range");
    return static_cast<std::size_t>(state) * static_cast<std::size_t>(n_actions_) + static_cast<std::size_t>(action);
}

std::span<const double> QTable::row(int state) const
{
    return std::span<const double>(values_).subspan(offset(state, 0), static_cast<std::size_t>(n_actions_));
}

std::uint64_t QTable::state_visits(int state) const
{
    std::uint64_t total = 0;
    for (int a = 0; a < n_actions_; ++a)
        total += visits(state, a);
    return total;
}

void QlConfig::validate() const
{
    auto unit = [](double v, const char *name) {
        if (!(v >= 0.0 && v <= 1.0))
            throw ConfigError(std::string("agent.") + name + " must lie in [0, 1] (got " + std::to_string(v) + ")");
    };
    unit(learning_rate, "learning_rate");
    unit(discount, "discount");
    unit(epsilon_max, "epsilon_max");
    unit(epsilon_min, "epsilon_min");
    unit(deployment_epsilon, "deployment_epsilon");
    unit(bler_smoothing, "bler_smoothing");
    if (epsilon_min > epsilon_max)
        throw ConfigError("agent.epsilon_min must not exceed agent.epsilon_max");
    if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0))
        throw ConfigError("agent.epsilon_decay must lie in (0, 1]");
    if (!(target_bler > 0.0 && target_bler < 1.0))
        throw ConfigError("agent.target_bler must lie in (0, 1)");
}

double epsilon_decay_for_horizon(double epsilon_max, double epsilon_min, std::int64_t training_decisions)
{
    if (training_decisions < 2 || epsilon_min >= epsilon_max || epsilon_min <= 0.0)
        return 1.0;
    const double half = 0.5 * static_cast<double>(training_decisions);
    return std::pow(epsilon_min / epsilon_max, 1.0 / half);
}

double epsilon_schedule(std::int64_t decision_index, const QlConfig &cfg, Phase phase)
{
    if (phase == Phase::deployment)
        return cfg.deployment_epsilon;
    const double eps = cfg.epsilon_max * std::pow(cfg.epsilon_decay, static_cast<double>(decision_index));
    return std::max(cfg.epsilon_min, eps);
}

std::size_t greedy_action(const QTable &q, int state)
{
    const auto row = q.row(state);
    std::size_t best = 0;
    for (std::size_t a = 1; a < row.size(); ++a)
        if (row[a] > row[best])
            best = a;
    return best;
}

std::size_t select_action_epsilon_greedy(const QTable &q, int state, double epsilon, Rng &rng)
{
    if (uniform01(rng) < epsilon)
    {
        std::uniform_int_distribution<int> pick(0, q.n_actions() - 1);
        return static_cast<std::size_t>(pick(rng));
    }
    return greedy_action(q, state);
}

double q_update(QTable &q, int state, int action, double reward, int next_state, const QlConfig &cfg)
{
    const auto next_row = q.row(next_state);
    const double best_next = *std::max_element(next_row.begin(), next_row.end());
    double &v = q.value(state, action);
    v = (1.0 - cfg.learning_rate) * v + cfg.learning_rate * (reward + cfg.discount * best_next);
    ++q.visits(state, action);
    return v;
}

double reward_bler(double bler_estimate, const McsEntry &mcs, double target_bler)
{
    return bler_estimate <= target_bler ? mcs.nominal_efficiency() : -1.0;
}

double reward_se(double bler_estimate, const McsEntry &mcs) { return (1.0 - bler_estimate) * mcs.nominal_efficiency(); }

OllaState OllaState::make(double delta_up_db, double target_bler, OllaConvention convention)
{
    if (!(delta_up_db > 0.0))
        throw ConfigError("OLLA delta_up_db must be positive");
    if (!(target_bler > 0.0 && target_bler < 1.0))
        throw ConfigError("OLLA target BLER must lie in (0, 1)");
    OllaState s;
    s.delta_up_db = delta_up_db;
    s.delta_down_db = delta_up_db / (1.0 / target_bler - 1.0);
    s.target_bler = target_bler;
    s.convention = convention;
    return s;
}

std::size_t olla_adjust_and_select(const OllaState &state, double snr_db, const IllaTable &table)
{
    return table.select(snr_db + state.delta_olla_db);
}

double olla_update(OllaState &state, bool ack)
{
    const double e_blk = ack ? 0.0 : 1.0;
    const double step = state.delta_up_db * e_blk - state.delta_down_db * (1.0 - e_blk);
    if (state.convention == OllaConvention::as_printed)
        state.delta_olla_db += step;
    else
        state.delta_olla_db -= step;
    return state.delta_olla_db;
}

QlAgent::QlAgent(QTable table, QlConfig cfg, CqiConfig cqi, Phase phase, Rng rng)
    : table_(std::move(table)), cfg_(cfg), cqi_(cqi), phase_(phase), rng_(std::move(rng))
{
    cfg_.validate();
    cqi_.validate();
    if (table_.n_states() != cqi_.n_cqi)
        throw ConfigError("Q-table has " + std::to_string(table_.n_states()) + " states but n_cqi is " +
                          std::to_string(cqi_.n_cqi));
    if (table_.n_actions() != static_cast<int>(mcs_table().size()))
        throw ConfigError("Q-table has " + std::to_string(table_.n_actions()) + " actions, expected " +
                          std::to_string(mcs_table().size()));
    bler_ewma_.assign(table_.values().size(), std::numeric_limits<double>::quiet_NaN());
}

std::size_t QlAgent::select(double snr_db)
{
    pending_state_ = cqi_quantize(snr_db, cqi_);
    pending_action_ = select_action_epsilon_greedy(table_, pending_state_, current_epsilon(), rng_);
    ++decisions_;
    return pending_action_;
}

double QlAgent::bler_estimate(int state, std::size_t action) const
{
    return bler_ewma_[static_cast<std::size_t>(state) * mcs_table().size() + action];
}

void QlAgent::observe(std::span<const TransmissionOutcome> outcomes, double next_snr_db)
{
    if (outcomes.empty())
        return;
    double &est = bler_ewma_[static_cast<std::size_t>(pending_state_) * mcs_table().size() + pending_action_];
    for (const auto &o : outcomes)
    {
        const double nack = o.ack ? 0.0 : 1.0;
        est = std::isnan(est) ? nack : (1.0 - cfg_.bler_smoothing) * est + cfg_.bler_smoothing * nack;
    }
    Feedback fb;
    fb.ack = outcomes.back().ack;
    fb.bler_estimate = est;
    fb.action = pending_action_;
    fb.next_state_cqi = cqi_quantize(next_snr_db, cqi_);
    learn(fb);
}

void QlAgent::learn(const Feedback &feedback)
{
    const McsEntry &mcs = mcs_table()[feedback.action];
    const double r = cfg_.reward_kind == RewardKind::bler ? reward_bler(feedback.bler_estimate, mcs, cfg_.target_bler)
                                                          : reward_se(feedback.bler_estimate, mcs);
    q_update(table_, pending_state_, static_cast<int>(feedback.action), r, feedback.next_state_cqi, cfg_);
}

void OllaAgent::observe(std::span<const TransmissionOutcome> outcomes, double)
{
    for (const auto &o : outcomes)
        olla_update(state_, o.ack);
}

} // namespace qlamc
