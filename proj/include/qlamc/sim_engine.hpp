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

#ifndef QLAMC_SIM_ENGINE_HPP
#define QLAMC_SIM_ENGINE_HPP

#include "qlamc/agents.hpp"
#include "qlamc/beam_management.hpp"
#include "qlamc/channel_model.hpp"
#include "qlamc/link_abstraction.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qlamc
{

struct LinkBudget
{
    double tx_power_dbm = 43.0;
    double bandwidth_mhz = 1440.0;
    double noise_power_dbm = -123.185; // per subcarrier

    // Transmit power is spread evenly over the bandwidth; one symbol occupies one subcarrier.
    double symbol_power_dbm(double subcarrier_spacing_khz) const;
    double symbol_power_mw(double subcarrier_spacing_khz) const;
    double noise_variance_mw() const { return db_to_linear(noise_power_dbm); }
    void validate() const;
};

// One frame = the beam sweep window followed by ttis_per_frame data TTIs,
// all slots of equal length within t_ss_ms.
struct FrameSchedule
{
    double t_ss_ms = 5.0;
    int ttis_per_frame = 10;
    int mcs_decision_period_ttis = 1;
    int sweep_slots = 1;

    int slots_per_frame() const { return ttis_per_frame + sweep_slots; }
    double slot_duration_s() const { return t_ss_ms * 1e-3 / slots_per_frame(); }
    void validate() const;
};

struct BeamConfig
{
    CodebookSpec tx{16};
    CodebookSpec rx{1};
};

struct LinkConfig
{
    BlerModel bler;
    CqiConfig cqi;
    double target_bler = 0.1;
};

struct SimConfig
{
    ChannelConfig channel;
    BeamConfig beams;
    LinkBudget budget;
    FrameSchedule schedule;
    LinkConfig link;

    void validate() const;
};

enum class MobilityMode
{
    radial_out_and_back,
    random_rectilinear,
};

// Straight-line UE motion that reverses direction when leaving [inner, outer] radius
class MobilityTrack
{
  public:
    MobilityTrack(Vec2 start_position, Vec2 velocity_mps, MobilityMode mode, double inner_radius_m,
                  double outer_radius_m);

    Vec2 position() const { return position_; }
    Vec2 velocity() const { return velocity_; }
    MobilityMode mode() const { return mode_; }
    void advance(double dt_s);

  private:
    Vec2 position_;
    Vec2 velocity_;
    MobilityMode mode_;
    double inner_;
    double outer_;
};

struct TtiEnvironment
{
    std::int64_t t_symbols = 0;
    double snr_db = 0.0;
    double draw = 0.0; // uniform deciding ACK/NACK, shared by every agent
};

struct FrameEnvironment
{
    std::int64_t frame = 0;
    BeamPair beam_pair;
    double sweep_snr_db = 0.0;
    double distance_m = 0.0;
    std::vector<TtiEnvironment> ttis;
};

// Agent-independent part of one Monte Carlo run: geometry, channel, beam sweeps,
// SNR per TTI and the uniforms that decide transmission outcomes.
class RunEnvironment
{
  public:
    RunEnvironment(const SimConfig &config, MobilityTrack track, std::uint64_t seed, std::uint64_t run);

    FrameEnvironment next_frame();

    const ScattererSet &scatterers() const { return scatterers_; }
    const MobilityTrack &track() const { return track_; }

  private:
    double snr_for(const BeamPair &pair, std::int64_t t_symbols) const;

    SimConfig config_;
    MobilityTrack track_;
    Codebook tx_codebook_;
    Codebook rx_codebook_;
    ScattererSet scatterers_;
    Rng shadowing_rng_;
    Rng transmission_rng_;
    double noise_variance_;
    double symbol_power_;
    std::int64_t frame_ = 0;
    std::int64_t symbols_per_frame_;
};

struct TtiRecord
{
    std::int64_t frame = 0;
    int tti = 0;
    double snr_db = 0.0;
    int cqi = 0;
    int mcs_index = 0;
    bool ack = false;
    double efficiency = 0.0; // m r on ACK, else 0
};

struct FrameTrace
{
    std::int64_t frame = 0;
    double sweep_snr_db = 0.0;
    std::vector<TtiRecord> ttis;
};

class RunMetrics
{
  public:
    void add(const TtiRecord &record, bool keep_trace);

    std::uint64_t nack_count() const { return nacks_; }
    std::uint64_t tti_count() const { return ttis_; }
    double mean_bler() const { return ttis_ ? static_cast<double>(nacks_) / static_cast<double>(ttis_) : 0.0; }
    double mean_spectral_efficiency() const { return ttis_ ? se_sum_ / static_cast<double>(ttis_) : 0.0; }
    const std::vector<TtiRecord> &trace() const { return trace_; }
    void drop_trace() { std::vector<TtiRecord>().swap(trace_); }

  private:
    std::uint64_t nacks_ = 0;
    std::uint64_t ttis_ = 0;
    double se_sum_ = 0.0;
    std::vector<TtiRecord> trace_;
};

// Data window of one frame: CQI report, MCS decision, transmission and feedback per
// TTI, with the beam pair chosen by the frame's sweep. next_snr_db is the SNR at the
// first decision point after this frame.
FrameTrace run_frame(const FrameEnvironment &frame, double next_snr_db, LinkAdapter &agent, const SimConfig &config);

struct LearningConfig
{
    std::int64_t n_frames = 32000;
    double start_distance_m = 20.0;
    double turn_distance_m = 100.0;
    double speed_kmh = 5.0;
    double direction_deg = 0.0;
    std::uint64_t seed = 1;

    void validate() const;
};

struct LearningFrameRecord
{
    std::int64_t frame = 0;
    double time_s = 0.0;
    double distance_m = 0.0;
    double sweep_snr_db = 0.0;
    double mean_snr_db = 0.0;
    double epsilon = 0.0;
    int nacks = 0;
    double mean_se = 0.0;
};

struct LearningResult
{
    QTable table;
    std::vector<LearningFrameRecord> trace;
    double final_epsilon = 0.0;
    double simulated_time_s = 0.0;
    std::int64_t decisions = 0;
};

// One pass of the UE from the start distance out to the turn distance and back
// (repeating), training a fresh Q-table with the decaying epsilon schedule.
LearningResult run_learning_phase(const SimConfig &config, const LearningConfig &learning, QlConfig ql);

enum class AgentKind
{
    qlamc,
    table,
    olla,
};

struct AgentSpec
{
    AgentKind kind = AgentKind::table;
    int n_cqi = 0;                        // qlamc only
    RewardKind reward = RewardKind::se;   // qlamc only
    double olla_delta_up_db = 0.0;        // olla only

    // "qlamc:60:se", "table", "olla:0.1"
    static AgentSpec parse(const std::string &text);
    std::string id() const;
    std::string type_label() const; // QL-AMC, Table, OLLA
};

struct DeployedAgent
{
    AgentSpec spec;
    std::optional<QTable> table; // trained table for qlamc agents
};

struct DeploymentConfig
{
    int n_runs = 200;
    std::int64_t n_frames = 125;
    double speed_kmh_min = 10.0;
    double speed_kmh_max = 20.0;
    double start_distance_m_min = 25.0;
    double start_distance_m_max = 90.0;
    double min_distance_m = 10.0;
    double max_distance_m = 150.0;
    std::uint64_t seed = 1;
    bool keep_trace = false;
    int parallel = 1;
    OllaConvention olla_convention = OllaConvention::standard;

    void validate() const;
};

struct AgentResults
{
    AgentSpec spec;
    std::vector<RunMetrics> runs;

    double mean_bler() const;
    double mean_spectral_efficiency() const;
    std::vector<double> per_run_spectral_efficiency() const;
};

MobilityTrack deployment_track(const DeploymentConfig &deployment, std::uint64_t run);

// Runs are independent and may execute on `parallel` threads; every agent of a run
// sees the same RunEnvironment.
std::vector<AgentResults> run_deployment_phase(const SimConfig &config, const DeploymentConfig &deployment,
                                               const QlConfig &ql, const std::vector<DeployedAgent> &agents);

struct CdfPoint
{
    double value = 0.0;
    double probability = 0.0;
};

std::vector<CdfPoint> aggregate_cdf(std::span<const double> per_run_values);

// Empirical CDF evaluated at x (right-continuous step function)
double cdf_at(std::span<const CdfPoint> cdf, double x);

} // namespace qlamc

#endif
