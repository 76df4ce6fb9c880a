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

#include "qlamc/sim_engine.hpp"
#include "qlamc/text_format.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

namespace qlamc
{

double LinkBudget::symbol_power_dbm(double subcarrier_spacing_khz) const
{
    const double n_subcarriers = bandwidth_mhz * 1e3 / subcarrier_spacing_khz;
    return tx_power_dbm - linear_to_db(n_subcarriers);
}

double LinkBudget::symbol_power_mw(double subcarrier_spacing_khz) const
{
    return db_to_linear(symbol_power_dbm(subcarrier_spacing_khz));
}

void LinkBudget::validate() const
{
    if (!(bandwidth_mhz > 0.0))
        throw ConfigError("channel.bandwidth_mhz must be positive");
    if (!std::isfinite(tx_power_dbm) || !std::isfinite(noise_power_dbm))
        throw ConfigError("channel powers must be finite");
}

void FrameSchedule::validate() const
{
    if (!(t_ss_ms > 0.0))
        throw ConfigError("beam.t_ss_ms must be positive");
    if (ttis_per_frame < 1)
        throw ConfigError("beam.ttis_per_frame must be >= 1");
    if (sweep_slots < 1)
        throw ConfigError("beam.sweep_slots must be >= 1");
    if (mcs_decision_period_ttis < 1 || ttis_per_frame % mcs_decision_period_ttis != 0)
        throw ConfigError("beam.decision_period_ttis must divide beam.ttis_per_frame");
}

void SimConfig::validate() const
{
    channel.validate();
    budget.validate();
    schedule.validate();
    link.bler.validate();
    link.cqi.validate();
    if (!(link.target_bler > 0.0 && link.target_bler < 1.0))
        throw ConfigError("link.target_bler must lie in (0, 1)");
    if (beams.tx.n_beams < 1 || beams.rx.n_beams < 1)
        throw ConfigError("beam.n_beams_tx and beam.n_beams_rx must be >= 1");
}

MobilityTrack::MobilityTrack(Vec2 start_position, Vec2 velocity_mps, MobilityMode mode, double inner_radius_m,
                             double outer_radius_m)
    : position_(start_position), velocity_(velocity_mps), mode_(mode), inner_(inner_radius_m), outer_(outer_radius_m)
{
    if (!(outer_radius_m > inner_radius_m) || inner_radius_m < 0.0)
        throw ConfigError("mobility: radius bounds must satisfy 0 <= inner < outer");
}

void MobilityTrack::advance(double dt_s)
{
    position_ = position_ + velocity_ * dt_s;
    const double r = position_.norm();
    const double radial_speed = position_.dot(velocity_);
    if ((r > outer_ && radial_speed > 0.0) || (r < inner_ && radial_speed < 0.0))
        velocity_ = velocity_ * -1.0;
}

RunEnvironment::RunEnvironment(const SimConfig &config, MobilityTrack track, std::uint64_t seed, std::uint64_t run)
    : config_(config), track_(std::move(track)), tx_codebook_(dft_codebook(config.channel.bs_array, config.beams.tx)),
      rx_codebook_(dft_codebook(config.channel.ue_array, config.beams.rx)),
      shadowing_rng_(make_rng(seed, run, Stream::shadowing)),
      transmission_rng_(make_rng(seed, run, Stream::transmission)),
      noise_variance_(config.budget.noise_variance_mw()),
      symbol_power_(config.budget.symbol_power_mw(config.channel.subcarrier_spacing_khz)),
      symbols_per_frame_(std::llround(config.schedule.t_ss_ms * 1e-3 / config.channel.symbol_period_s()))
{
    config_.validate();
    Rng scatter_rng = make_rng(seed, run, Stream::scatterers);
    scatterers_ = draw_scatterer_set(config_.channel, track_.position(), scatter_rng);
}

double RunEnvironment::snr_for(const BeamPair &pair, std::int64_t t_symbols) const
{
    const auto h = channel_at(config_.channel, scatterers_, track_.position(), track_.velocity(), t_symbols);
    return snr(effective_channel(h, pair, tx_codebook_, rx_codebook_), noise_variance_, symbol_power_).db;
}

FrameEnvironment RunEnvironment::next_frame()
{
    const auto &schedule = config_.schedule;
    const int slots = schedule.slots_per_frame();
    const double slot_s = schedule.slot_duration_s();
    const double symbol_s = config_.channel.symbol_period_s();
    const std::int64_t frame_start = frame_ * symbols_per_frame_;
    auto slot_symbol = [&](int j) { return frame_start + std::llround(j * slot_s / symbol_s); };

    FrameEnvironment out;
    out.frame = frame_;
    if (frame_ > 0)
        update_large_scale(scatterers_, config_.channel, track_.position(), shadowing_rng_);
    out.distance_m = track_.position().norm();

    // the channel is held constant during the sweep window
    const auto h_sweep =
        channel_at(config_.channel, scatterers_, track_.position(), track_.velocity(), slot_symbol(0));
    out.beam_pair = beam_sweep(h_sweep, tx_codebook_, rx_codebook_, noise_variance_);
    out.beam_pair.frame_index = frame_;
    out.sweep_snr_db = snr(out.beam_pair.effective_channel, noise_variance_, symbol_power_).db;
    for (int j = 0; j < schedule.sweep_slots; ++j)
        track_.advance(slot_s);

    out.ttis.reserve(static_cast<std::size_t>(schedule.ttis_per_frame));
    for (int j = schedule.sweep_slots; j < slots; ++j)
    {
        TtiEnvironment tti;
        tti.t_symbols = slot_symbol(j);
        tti.snr_db = snr_for(out.beam_pair, tti.t_symbols);
        tti.draw = uniform01(transmission_rng_);
        out.ttis.push_back(tti);
        track_.advance(slot_s);
    }
    ++frame_;
    return out;
}

void RunMetrics::add(const TtiRecord &record, bool keep_trace)
{
    ++ttis_;
    if (!record.ack)
        ++nacks_;
    se_sum_ += record.efficiency;
    if (keep_trace)
        trace_.push_back(record);
}

FrameTrace run_frame(const FrameEnvironment &frame, double next_snr_db, LinkAdapter &agent, const SimConfig &config)
{
    const int period = config.schedule.mcs_decision_period_ttis;
    const auto actions = mcs_table();
    FrameTrace trace;
    trace.frame = frame.frame;
    trace.sweep_snr_db = frame.sweep_snr_db;
    trace.ttis.reserve(frame.ttis.size());

    std::vector<TransmissionOutcome> window;
    std::size_t action = 0;
    const int n = static_cast<int>(frame.ttis.size());
    for (int j = 0; j < n; ++j)
    {
        const auto &env = frame.ttis[static_cast<std::size_t>(j)];
        if (j % period == 0)
        {
            action = agent.select(env.snr_db);
            window.clear();
        }
        const McsEntry &mcs = actions[action];
        const auto outcome = transmit_with_draw(env.snr_db, mcs, config.link.bler, env.draw);
        window.push_back(outcome);

        TtiRecord rec;
        rec.frame = frame.frame;
        rec.tti = j;
        rec.snr_db = env.snr_db;
        rec.cqi = cqi_quantize(env.snr_db, config.link.cqi);
        rec.mcs_index = mcs.index;
        rec.ack = outcome.ack;
        rec.efficiency = outcome.realized_efficiency;
        trace.ttis.push_back(rec);

        if (j % period == period - 1 || j == n - 1)
        {
            const double next = j + 1 < n ? frame.ttis[static_cast<std::size_t>(j + 1)].snr_db : next_snr_db;
            agent.observe(window, next);
        }
    }
    return trace;
}

void LearningConfig::validate() const
{
    if (n_frames < 1)
        throw ConfigError("learning.n_frames must be >= 1");
    if (!(start_distance_m > 0.0) || !(turn_distance_m > start_distance_m))
        throw ConfigError("learning distances must satisfy 0 < start_distance_m < turn_distance_m");
    if (!(speed_kmh >= 0.0))
        throw ConfigError("learning.speed_kmh must be non-negative");
}

LearningResult run_learning_phase(const SimConfig &config, const LearningConfig &learning, QlConfig ql)
{
    config.validate();
    learning.validate();
    const std::int64_t decisions =
        learning.n_frames * (config.schedule.ttis_per_frame / config.schedule.mcs_decision_period_ttis);
    ql.epsilon_decay = epsilon_decay_for_horizon(ql.epsilon_max, ql.epsilon_min, decisions);
    ql.validate();

    const double direction = deg_to_rad(learning.direction_deg);
    MobilityTrack track(Vec2::polar(learning.start_distance_m, direction),
                        Vec2::polar(kmh_to_mps(learning.speed_kmh), direction), MobilityMode::radial_out_and_back,
                        learning.start_distance_m, learning.turn_distance_m);
    // run ids 0.. belong to deployment; the learning pass takes the top one
    constexpr std::uint64_t learning_run = ~std::uint64_t{0};
    RunEnvironment env(config, std::move(track), learning.seed, learning_run);
    QlAgent agent(QTable(config.link.cqi.n_cqi, static_cast<int>(mcs_table().size())), ql, config.link.cqi,
                  Phase::learning, make_rng(learning.seed, learning_run, Stream::agent));

    LearningResult result;
    result.trace.reserve(static_cast<std::size_t>(learning.n_frames));
    FrameEnvironment current = env.next_frame();
    for (std::int64_t k = 0; k < learning.n_frames; ++k)
    {
        std::optional<FrameEnvironment> next;
        if (k + 1 < learning.n_frames)
            next = env.next_frame();
        const double next_snr = next ? next->ttis.front().snr_db : current.ttis.back().snr_db;

        LearningFrameRecord rec;
        rec.frame = k;
        rec.time_s = static_cast<double>(k) * config.schedule.t_ss_ms * 1e-3;
        rec.distance_m = current.distance_m;
        rec.sweep_snr_db = current.sweep_snr_db;
        rec.epsilon = agent.current_epsilon();

        const FrameTrace ft = run_frame(current, next_snr, agent, config);
        double snr_sum = 0.0;
        double se_sum = 0.0;
        for (const auto &t : ft.ttis)
        {
            snr_sum += t.snr_db;
            se_sum += t.efficiency;
            rec.nacks += t.ack ? 0 : 1;
        }
        rec.mean_snr_db = snr_sum / static_cast<double>(ft.ttis.size());
        rec.mean_se = se_sum / static_cast<double>(ft.ttis.size());
        result.trace.push_back(rec);

        if (next)
            current = std::move(*next);
    }
    result.table = agent.table();
    result.final_epsilon = agent.current_epsilon();
    result.decisions = agent.decisions();
    result.simulated_time_s = static_cast<double>(learning.n_frames) * config.schedule.t_ss_ms * 1e-3;
    return result;
}

AgentSpec AgentSpec::parse(const std::string &text)
{
    const auto parts = split(text, ':');
    AgentSpec spec;
    if (parts[0] == "qlamc")
    {
        if (parts.size() != 3)
            throw ConfigError("agent '" + text + "': expected qlamc:<n_cqi>:<bler|se>");
        spec.kind = AgentKind::qlamc;
        spec.n_cqi = static_cast<int>(parse_int(parts[1]));
        if (spec.n_cqi < 2)
            throw ConfigError("agent '" + text + "': n_cqi must be >= 2");
        spec.reward = reward_kind_from_string(parts[2]);
    }
    else if (parts[0] == "table")
    {
        if (parts.size() != 1)
            throw ConfigError("agent '" + text + "': table takes no parameters");
        spec.kind = AgentKind::table;
    }
    else if (parts[0] == "olla")
    {
        if (parts.size() != 2)
            throw ConfigError("agent '" + text + "': expected olla:<delta_up_db>");
        spec.kind = AgentKind::olla;
        spec.olla_delta_up_db = parse_double(parts[1]);
        if (!(spec.olla_delta_up_db > 0.0))
            throw ConfigError("agent '" + text + "': delta_up_db must be positive");
    }
    else
    {
        throw ConfigError("unknown agent '" + text + "' (expected qlamc:<n>:<reward>, table or olla:<delta_up_db>)");
    }
    return spec;
}

std::string AgentSpec::id() const
{
    switch (kind)
    {
    case AgentKind::qlamc:
        return "qlamc:" + std::to_string(n_cqi) + ":" + to_string(reward);
    case AgentKind::table:
        return "table";
    case AgentKind::olla:
        return "olla:" + format_double(olla_delta_up_db);
    }
    return {};
}

std::string AgentSpec::type_label() const
{
    switch (kind)
    {
    case AgentKind::qlamc:
        return "QL-AMC";
    case AgentKind::table:
        return "Table";
    case AgentKind::olla:
        return "OLLA";
    }
    return {};
}

void DeploymentConfig::validate() const
{
    if (n_runs < 1)
        throw ConfigError("deployment.n_runs must be >= 1");
    if (n_frames < 1)
        throw ConfigError("deployment.n_frames must be >= 1");
    if (speed_kmh_min < 0.0 || speed_kmh_max < speed_kmh_min)
        throw ConfigError("deployment speed range is invalid");
    if (start_distance_m_min < min_distance_m || start_distance_m_max < start_distance_m_min ||
        start_distance_m_max > max_distance_m)
        throw ConfigError("deployment start distance range must lie inside [min_distance_m, max_distance_m]");
    if (!(min_distance_m >= 10.0))
        throw ConfigError("deployment.min_distance_m must be >= 10");
    if (parallel < 1)
        throw ConfigError("parallel must be >= 1");
}

double AgentResults::mean_bler() const
{
    double sum = 0.0;
    for (const auto &r : runs)
        sum += r.mean_bler();
    return runs.empty() ? 0.0 : sum / static_cast<double>(runs.size());
}

double AgentResults::mean_spectral_efficiency() const
{
    double sum = 0.0;
    for (const auto &r : runs)
        sum += r.mean_spectral_efficiency();
    return runs.empty() ? 0.0 : sum / static_cast<double>(runs.size());
}

std::vector<double> AgentResults::per_run_spectral_efficiency() const
{
    std::vector<double> out;
    out.reserve(runs.size());
    for (const auto &r : runs)
        out.push_back(r.mean_spectral_efficiency());
    return out;
}

MobilityTrack deployment_track(const DeploymentConfig &deployment, std::uint64_t run)
{
    Rng rng = make_rng(deployment.seed, run, Stream::mobility);
    std::uniform_real_distribution<double> distance(deployment.start_distance_m_min, deployment.start_distance_m_max);
    std::uniform_real_distribution<double> sector(-pi / 3.0, pi / 3.0);
    std::uniform_real_distribution<double> heading(0.0, 2.0 * pi);
    std::uniform_real_distribution<double> speed(deployment.speed_kmh_min, deployment.speed_kmh_max);
    const double d = distance(rng);
    const double az = sector(rng);
    const double dir = heading(rng);
    const double v = kmh_to_mps(speed(rng));
    return MobilityTrack(Vec2::polar(d, az), Vec2::polar(v, dir), MobilityMode::random_rectilinear,
                         deployment.min_distance_m, deployment.max_distance_m);
}

namespace
{
std::unique_ptr<LinkAdapter> make_adapter(const DeployedAgent &agent, const SimConfig &config,
                                          const DeploymentConfig &deployment, const QlConfig &ql,
                                          const IllaTable &illa, std::uint64_t run, std::size_t agent_index)
{
    switch (agent.spec.kind)
    {
    case AgentKind::qlamc: {
        if (!agent.table)
            throw ConfigError("agent " + agent.spec.id() + " has no Q-table");
        QlConfig cfg = ql;
        cfg.reward_kind = agent.spec.reward;
        CqiConfig cqi = config.link.cqi;
        cqi.n_cqi = agent.spec.n_cqi;
        return std::make_unique<QlAgent>(*agent.table, cfg, cqi, Phase::deployment,
                                         make_rng(deployment.seed, run, Stream::agent, agent_index));
    }
    case AgentKind::table:
        return std::make_unique<TableAgent>(illa);
    case AgentKind::olla:
        return std::make_unique<OllaAgent>(illa, OllaState::make(agent.spec.olla_delta_up_db, config.link.target_bler,
                                                                 deployment.olla_convention));
    }
    throw ConfigError("unknown agent kind");
}
} // namespace

std::vector<AgentResults> run_deployment_phase(const SimConfig &config, const DeploymentConfig &deployment,
                                               const QlConfig &ql, const std::vector<DeployedAgent> &agents)
{
    config.validate();
    deployment.validate();
    ql.validate();
    if (agents.empty())
        throw ConfigError("deployment needs at least one agent");
    for (const auto &a : agents)
    {
        if (a.spec.kind != AgentKind::qlamc)
            continue;
        if (!a.table)
            throw ConfigError("agent " + a.spec.id() + " has no Q-table");
        if (a.table->n_states() != a.spec.n_cqi || a.table->n_actions() != static_cast<int>(mcs_table().size()))
            throw ConfigError("agent " + a.spec.id() + ": Q-table is " + std::to_string(a.table->n_states()) + "x" +
                              std::to_string(a.table->n_actions()) + ", expected " + std::to_string(a.spec.n_cqi) +
                              "x" + std::to_string(mcs_table().size()));
    }

    const IllaTable illa = build_illa_table(config.link.bler, mcs_table(), config.link.target_bler);
    std::vector<AgentResults> results(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i)
    {
        results[i].spec = agents[i].spec;
        results[i].runs.resize(static_cast<std::size_t>(deployment.n_runs));
    }

    auto simulate_run = [&](std::uint64_t run) {
        RunEnvironment env(config, deployment_track(deployment, run), deployment.seed, run);
        std::vector<FrameEnvironment> frames;
        frames.reserve(static_cast<std::size_t>(deployment.n_frames));
        for (std::int64_t k = 0; k < deployment.n_frames; ++k)
            frames.push_back(env.next_frame());

        for (std::size_t i = 0; i < agents.size(); ++i)
        {
            auto adapter = make_adapter(agents[i], config, deployment, ql, illa, run, i);
            RunMetrics metrics;
            for (std::size_t k = 0; k < frames.size(); ++k)
            {
                const double next_snr =
                    k + 1 < frames.size() ? frames[k + 1].ttis.front().snr_db : frames[k].ttis.back().snr_db;
                const FrameTrace ft = run_frame(frames[k], next_snr, *adapter, config);
                for (const auto &rec : ft.ttis)
                    metrics.add(rec, deployment.keep_trace);
            }
            results[i].runs[run] = std::move(metrics);
        }
    };

    const int n_threads = std::min(deployment.parallel, deployment.n_runs);
    if (n_threads <= 1)
    {
        for (int r = 0; r < deployment.n_runs; ++r)
            simulate_run(static_cast<std::uint64_t>(r));
        return results;
    }

    std::atomic<int> next_run{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (int t = 0; t < n_threads; ++t)
    {
        workers.emplace_back([&] {
            for (int r = next_run++; r < deployment.n_runs; r = next_run++)
            {
                try
                {
                    simulate_run(static_cast<std::uint64_t>(r));
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next_run = deployment.n_runs;
                }
            }
        });
    }
    for (auto &w : workers)
        w.join();
    if (failure)
        std::rethrow_exception(failure);
    return results;
}

std::vector<CdfPoint> aggregate_cdf(std::span<const double> per_run_values)
{
    if (per_run_values.empty())
        throw ConfigError("CDF of an empty sample");
    std::vector<double> sorted(per_run_values.begin(), per_run_values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<CdfPoint> cdf;
    cdf.reserve(sorted.size());
    const auto n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        cdf.push_back({sorted[i], static_cast<double>(i + 1) / n});
    return cdf;
}

double cdf_at(std::span<const CdfPoint> cdf, double x)
{
    double p = 0.0;
    for (const auto &pt : cdf)
    {
        if (pt.value > x)
            break;
        p = pt.probability;
    }
    return p;
}

} // namespace qlamc
