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

#ifndef QLAMC_AGENTS_HPP
#define QLAMC_AGENTS_HPP

#include "qlamc/link_abstraction.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qlamc
{

enum class RewardKind
{
    bler, // m r when the BLER meets the target, -1 otherwise
    se,   // (1 - BLER) m r
};

std::string to_string(RewardKind kind);
RewardKind reward_kind_from_string(const std::string &name);

// Action values and visit counts, row-major, states x actions
class QTable
{
  public:
    QTable() = default;
    QTable(int n_states, int n_actions);

    int n_states() const { return n_states_; }
    int n_actions() const { return n_actions_; }

    double value(int state, int action) const { return values_[offset(state, action)]; }
    double &value(int state, int action) { return values_[offset(state, action)]; }
    std::uint64_t visits(int state, int action) const { return visits_[offset(state, action)]; }
    std::uint64_t &visits(int state, int action) { return visits_[offset(state, action)]; }
    std::span<const double> row(int state) const;
    std::uint64_t state_visits(int state) const;

    const std::vector<double> &values() const { return values_; }
    const std::vector<std::uint64_t> &visit_counts() const { return visits_; }

    bool operator==(const QTable &) const = default;

  private:
    std::size_t offset(int state, int action) const;

    int n_states_ = 0;
    int n_actions_ = 0;
    std::vector<double> values_;
    std::vector<std::uint64_t> visits_;
};

struct QTableHeader
{
    int version = 1;
    int n_states = 0;
    int n_actions = 0;
    RewardKind reward = RewardKind::se;
    std::uint64_t config_hash = 0;
};

// Versioned text format: header lines, then the value matrix and the visit matrix, row-major
void save_qtable(const std::filesystem::path &path, const QTable &table, const QTableHeader &header);
QTable load_qtable(const std::filesystem::path &path, QTableHeader *header = nullptr);

struct QlConfig
{
    double learning_rate = 0.9;
    double discount = 0.1;
    double epsilon_max = 0.5;
    double epsilon_min = 0.05;
    double epsilon_decay = 1.0; // multiplicative factor per decision
    double deployment_epsilon = 0.05;
    RewardKind reward_kind = RewardKind::se;
    double target_bler = 0.1;
    double bler_smoothing = 0.1; // EWMA weight of the newest ACK/NACK

    void validate() const;
};

// Factor that brings epsilon_max down to epsilon_min after half of the training decisions
double epsilon_decay_for_horizon(double epsilon_max, double epsilon_min, std::int64_t training_decisions);

enum class Phase
{
    learning,
    deployment,
};

// learning: max(eps_min, eps_max decay^index); deployment: the fixed deployment epsilon
double epsilon_schedule(std::int64_t decision_index, const QlConfig &cfg, Phase phase = Phase::learning);

// Greedy action of a state row; ties go to the lowest action index
std::size_t greedy_action(const QTable &q, int state);

std::size_t select_action_epsilon_greedy(const QTable &q, int state, double epsilon, Rng &rng);

// Q(s,a) <- (1 - alpha) Q(s,a) + alpha (r + gamma max_a' Q(s',a')); returns the new value
double q_update(QTable &q, int state, int action, double reward, int next_state, const QlConfig &cfg);

double reward_bler(double bler_estimate, const McsEntry &mcs, double target_bler);
double reward_se(double bler_estimate, const McsEntry &mcs);

enum class OllaConvention
{
    standard,   // NACK lowers the offset by delta_up, ACK raises it by delta_down
    as_printed, // offset += delta_up e_blk - delta_down (1 - e_blk)
};

struct OllaState
{
    double delta_olla_db = 0.0;
    double delta_up_db = 0.1;
    double delta_down_db = 0.1 / 9.0;
    double target_bler = 0.1;
    OllaConvention convention = OllaConvention::standard;

    static OllaState make(double delta_up_db, double target_bler = 0.1,
                          OllaConvention convention = OllaConvention::standard);
};

std::size_t olla_adjust_and_select(const OllaState &state, double snr_db, const IllaTable &table);
double olla_update(OllaState &state, bool ack);

struct Feedback
{
    bool ack = false;
    double bler_estimate = 0.0;
    std::size_t action = 0;
    int next_state_cqi = 0;
};

// Common decision interface of the three link adaptation policies. The engine
// calls select() at each MCS decision point and observe() with the transport
// blocks sent until the next decision point.
class LinkAdapter
{
  public:
    virtual ~LinkAdapter() = default;
    virtual std::size_t select(double snr_db) = 0;
    virtual void observe(std::span<const TransmissionOutcome> outcomes, double next_snr_db) = 0;
};

class QlAgent final : public LinkAdapter
{
  public:
    QlAgent(QTable table, QlConfig cfg, CqiConfig cqi, Phase phase, Rng rng);

    std::size_t select(double snr_db) override;
    void observe(std::span<const TransmissionOutcome> outcomes, double next_snr_db) override;

    // One learning step for the pending (state, action)
    void learn(const Feedback &feedback);

    const QTable &table() const { return table_; }
    double current_epsilon() const { return epsilon_schedule(decisions_, cfg_, phase_); }
    std::int64_t decisions() const { return decisions_; }
    double bler_estimate(int state, std::size_t action) const;

  private:
    QTable table_;
    QlConfig cfg_;
    CqiConfig cqi_;
    Phase phase_;
    Rng rng_;
    std::int64_t decisions_ = 0;
    int pending_state_ = 0;
    std::size_t pending_action_ = 0;
    std::vector<double> bler_ewma_; // NaN until the pair has been tried
};

class TableAgent final : public LinkAdapter
{
  public:
    explicit TableAgent(IllaTable table) : table_(std::move(table)) {}

    std::size_t select(double snr_db) override { return table_.select(snr_db); }
    void observe(std::span<const TransmissionOutcome>, double) override {}

  private:
    IllaTable table_;
};

class OllaAgent final : public LinkAdapter
{
  public:
    OllaAgent(IllaTable table, OllaState state) : table_(std::move(table)), state_(state) {}

    std::size_t select(double snr_db) override { return olla_adjust_and_select(state_, snr_db, table_); }
    void observe(std::span<const TransmissionOutcome> outcomes, double next_snr_db) override;

    const OllaState &state() const { return state_; }

  private:
    IllaTable table_;
    OllaState state_;
};

} // namespace qlamc

#endif
