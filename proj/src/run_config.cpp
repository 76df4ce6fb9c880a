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

#include "qlamc/run_config.hpp"
#include "qlamc/text_format.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace qlamc
{

std::vector<std::string> default_agent_list()
{
    std::vector<std::string> out;
    for (const char *reward : {"bler", "se"})
        for (int n : {10, 15, 30, 60})
            out.push_back("qlamc:" + std::to_string(n) + ":" + reward);
    out.insert(out.end(), {"table", "olla:0.01", "olla:0.1", "olla:1"});
    return out;
}

RunConfig default_run_config()
{
    RunConfig cfg;
    cfg.agents = default_agent_list();
    cfg.set_seed(cfg.seed);
    return cfg;
}

void RunConfig::set_seed(std::uint64_t s)
{
    seed = s;
    learning.seed = s;
    deployment.seed = s;
}

void RunConfig::validate() const
{
    sim.validate();
    ql.validate();
    learning.validate();
    deployment.validate();
    if (agent_kind == AgentKind::olla && !(olla_delta_up_db > 0.0))
        throw ConfigError("agent.olla_delta_up_db must be positive");
    for (const auto &a : agents)
        AgentSpec::parse(a);
    if (output.directory.empty())
        throw ConfigError("output.directory must not be empty");
}

std::uint64_t RunConfig::training_hash() const
{
    // Shortest round-trip text of every parameter that reaches the learning pass
    std::ostringstream s;
    auto put = [&](double v) { s << format_double(v) << ';'; };
    const auto &c = sim.channel;
    put(c.n_paths), put(c.azimuth_mean_deg), put(c.azimuth_spread_deg), put(c.elevation_mean_deg);
    put(c.elevation_spread_deg), put(c.scatterer_min_distance_m), put(c.scatterer_max_distance_m);
    put(c.bs_height_m), put(c.ue_height_m), put(c.carrier_ghz), put(c.subcarrier_spacing_khz);
    put(c.shadowing_std_db), put(c.shadowing_correlation_m);
    for (const auto *a : {&c.bs_array, &c.ue_array})
        put(a->n_elements_azimuth), put(a->n_elements_elevation), put(a->element_spacing_wavelengths);
    for (const auto *b : {&sim.beams.tx, &sim.beams.rx})
        put(b->n_beams), put(static_cast<int>(b->grid)), put(b->sector_min_deg), put(b->sector_max_deg),
            put(b->elevation_deg);
    put(sim.budget.tx_power_dbm), put(sim.budget.bandwidth_mhz), put(sim.budget.noise_power_dbm);
    put(sim.schedule.t_ss_ms), put(sim.schedule.ttis_per_frame), put(sim.schedule.mcs_decision_period_ttis);
    put(sim.schedule.sweep_slots);
    put(sim.link.bler.slope_per_db), put(sim.link.bler.implementation_gap_db), put(sim.link.cqi.n_cqi);
    put(sim.link.cqi.snr_min_db), put(sim.link.cqi.snr_max_db), put(sim.link.target_bler);
    put(ql.learning_rate), put(ql.discount), put(ql.epsilon_max), put(ql.epsilon_min);
    put(static_cast<int>(ql.reward_kind)), put(ql.target_bler), put(ql.bler_smoothing);
    put(static_cast<double>(learning.n_frames)), put(learning.start_distance_m), put(learning.turn_distance_m);
    put(learning.speed_kmh), put(learning.direction_deg);
    s << learning.seed;
    return fnv1a(s.str());
}

std::string qtable_file_name(int n_cqi, RewardKind reward)
{
    return "qtable_n" + std::to_string(n_cqi) + "_" + to_string(reward) + ".txt";
}

namespace
{

struct Reader
{
    std::string source;

    [[noreturn]] void fail(const YAML::Node &node, const std::string &field, const std::string &what) const
    {
        const auto mark = node.Mark();
        const std::string where = mark.line >= 0 ? source + ":" + std::to_string(mark.line + 1) : source;
        throw ConfigError(where + ": " + field + ": " + what);
    }

    template <class T> T scalar(const YAML::Node &node, const std::string &field) const
    {
        if (!node.IsScalar())
            fail(node, field, "expected a scalar value");
        try
        {
            return node.as<T>();
        }
        catch (const YAML::Exception &)
        {
            fail(node, field, "cannot parse '" + node.Scalar() + "'");
        }
    }

    double number(const YAML::Node &node, const std::string &field, double lo, double hi) const
    {
        const double v = scalar<double>(node, field);
        if (!std::isfinite(v) || v < lo || v > hi)
            fail(node, field,
                 "value " + node.Scalar() + " outside [" + format_double(lo) + ", " + format_double(hi) + "]");
        return v;
    }

    std::int64_t integer(const YAML::Node &node, const std::string &field, std::int64_t lo, std::int64_t hi) const
    {
        const auto v = scalar<std::int64_t>(node, field);
        if (v < lo || v > hi)
            fail(node, field,
                 "value " + node.Scalar() + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return v;
    }
};

using Handler = std::function<void(const YAML::Node &, const std::string &)>;

void walk(const Reader &r, const YAML::Node &map, const std::string &prefix,
          const std::map<std::string, Handler> &handlers)
{
    if (!map.IsMap())
        r.fail(map, prefix.empty() ? "top level" : prefix, "expected a mapping");
    for (const auto &kv : map)
    {
        const auto key = kv.first.as<std::string>();
        const std::string field = prefix.empty() ? key : prefix + "." + key;
        const auto it = handlers.find(key);
        if (it == handlers.end())
            r.fail(kv.first, field, "unknown key");
        it->second(kv.second, field);
    }
}

} // namespace

RunConfig parse_run_config(const std::string &text, const std::string &source)
{
    RunConfig cfg = default_run_config();
    const Reader r{source};

    YAML::Node root;
    try
    {
        root = YAML::Load(text);
    }
    catch (const YAML::ParserException &e)
    {
        throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (root.IsNull())
        return cfg;

    auto num = [&](double &dst, double lo, double hi) {
        return [&r, &dst, lo, hi](const YAML::Node &n, const std::string &f) { dst = r.number(n, f, lo, hi); };
    };
    auto integer = [&](auto &dst, std::int64_t lo, std::int64_t hi) {
        return [&r, &dst, lo, hi](const YAML::Node &n, const std::string &f) {
            dst = static_cast<std::remove_reference_t<decltype(dst)>>(r.integer(n, f, lo, hi));
        };
    };
    auto array = [&](ArrayGeometry &g) {
        return [&](const YAML::Node &n, const std::string &f) {
            walk(r, n, f,
                 {{"n_azimuth", integer(g.n_elements_azimuth, 1, 1024)},
                  {"n_elevation", integer(g.n_elements_elevation, 1, 1024)},
                  {"spacing_wavelengths", num(g.element_spacing_wavelengths, 1e-3, 100.0)}});
        };
    };
    auto grid = [&](BeamGrid &g) {
        return [&r, &g](const YAML::Node &n, const std::string &f) {
            const auto v = r.scalar<std::string>(n, f);
            if (v == "sector")
                g = BeamGrid::sector;
            else if (v == "orthogonal")
                g = BeamGrid::orthogonal;
            else
                r.fail(n, f, "expected sector or orthogonal, got '" + v + "'");
        };
    };
    auto reward = [&](RewardKind &k) {
        return [&r, &k](const YAML::Node &n, const std::string &f) {
            const auto v = r.scalar<std::string>(n, f);
            if (v != "se" && v != "bler")
                r.fail(n, f, "expected se or bler, got '" + v + "'");
            k = reward_kind_from_string(v);
        };
    };

    auto &ch = cfg.sim.channel;
    auto &bm = cfg.sim.beams;
    auto &sc = cfg.sim.schedule;
    auto &lk = cfg.sim.link;
    auto &ql = cfg.ql;
    auto &ln = cfg.learning;
    auto &dp = cfg.deployment;
    bool seed_given = false;

    const std::map<std::string, Handler> top = {
        {"seed",
         [&](const YAML::Node &n, const std::string &f) {
             cfg.seed = r.scalar<std::uint64_t>(n, f);
             seed_given = true;
         }},
        {"channel",
         [&](const YAML::Node &n, const std::string &f) {
             walk(r, n, f,
                  {{"n_paths", integer(ch.n_paths, 1, 1000)},
                   {"azimuth_mean_deg", num(ch.azimuth_mean_deg, -180.0, 180.0)},
                   {"azimuth_spread_deg", num(ch.azimuth_spread_deg, 0.0, 180.0)},
                   {"elevation_mean_deg", num(ch.elevation_mean_deg, 0.0, 180.0)},
                   {"elevation_spread_deg", num(ch.elevation_spread_deg, 0.0, 90.0)},
                   {"scatterer_min_distance_m", num(ch.scatterer_min_distance_m, 1e-3, 1e5)},
                   {"scatterer_max_distance_m", num(ch.scatterer_max_distance_m, 1e-3, 1e5)},
                   {"bs_height_m", num(ch.bs_height_m, 1e-3, 1e3)},
                   {"ue_height_m", num(ch.ue_height_m, 1e-3, 1e3)},
                   {"carrier_ghz", num(ch.carrier_ghz, 0.5, 100.0)},
                   {"subcarrier_spacing_khz", num(ch.subcarrier_spacing_khz, 1.0, 1e4)},
                   {"shadowing_std_db", num(ch.shadowing_std_db, 0.0, 30.0)},
                   {"shadowing_correlation_m", num(ch.shadowing_correlation_m, 1e-3, 1e5)},
                   {"tx_power_dbm", num(cfg.sim.budget.tx_power_dbm, -100.0, 100.0)},
                   {"bandwidth_mhz", num(cfg.sim.budget.bandwidth_mhz, 1e-3, 1e5)},
                   {"noise_power_dbm", num(cfg.sim.budget.noise_power_dbm, -300.0, 100.0)},
                   {"bs_array", array(ch.bs_array)},
                   {"ue_array", array(ch.ue_array)}});
         }},
        {"beam",
         [&](const YAML::Node &n, const std::string &f) {
             walk(r, n, f,
                  {{"n_beams_tx", integer(bm.tx.n_beams, 1, 4096)},
                   {"n_beams_rx", integer(bm.rx.n_beams, 1, 4096)},
                   {"grid_tx", grid(bm.tx.grid)},
                   {"grid_rx", grid(bm.rx.grid)},
                   {"sector_min_deg",
                    [&](const YAML::Node &v, const std::string &g) {
                        bm.tx.sector_min_deg = bm.rx.sector_min_deg = r.number(v, g, -90.0, 90.0);
                    }},
                   {"sector_max_deg",
                    [&](const YAML::Node &v, const std::string &g) {
                        bm.tx.sector_max_deg = bm.rx.sector_max_deg = r.number(v, g, -90.0, 90.0);
                    }},
                   {"elevation_deg",
                    [&](const YAML::Node &v, const std::string &g) {
                        bm.tx.elevation_deg = bm.rx.elevation_deg = r.number(v, g, 0.0, 180.0);
                    }},
                   {"t_ss_ms", num(sc.t_ss_ms, 1e-3, 1e4)},
                   {"ttis_per_frame", integer(sc.ttis_per_frame, 1, 10000)},
                   {"sweep_slots", integer(sc.sweep_slots, 1, 10000)},
                   {"decision_period_ttis", integer(sc.mcs_decision_period_ttis, 1, 10000)}});
         }},
        {"link",
         [&](const YAML::Node &n, const std::string &f) {
             walk(r, n, f,
                  {{"n_cqi", integer(lk.cqi.n_cqi, 2, 100000)},
                   {"cqi_min_db", num(lk.cqi.snr_min_db, -100.0, 100.0)},
                   {"cqi_max_db", num(lk.cqi.snr_max_db, -100.0, 100.0)},
                   {"bler_slope_per_db", num(lk.bler.slope_per_db, 1e-3, 100.0)},
                   {"implementation_gap_db", num(lk.bler.implementation_gap_db, -20.0, 40.0)},
                   {"target_bler", num(lk.target_bler, 1e-6, 1.0 - 1e-6)}});
         }},
        {"agent",
         [&](const YAML::Node &n, const std::string &f) {
             walk(r, n, f,
                  {{"kind",
                    [&](const YAML::Node &v, const std::string &g) {
                        const auto s = r.scalar<std::string>(v, g);
                        if (s == "qlamc")
                            cfg.agent_kind = AgentKind::qlamc;
                        else if (s == "table")
                            cfg.agent_kind = AgentKind::table;
                        else if (s == "olla")
                            cfg.agent_kind = AgentKind::olla;
                        else
                            r.fail(v, g, "expected qlamc, table or olla, got '" + s + "'");
                    }},
                   {"reward", reward(ql.reward_kind)},
                   {"learning_rate", num(ql.learning_rate, 0.0, 1.0)},
                   {"discount", num(ql.discount, 0.0, 1.0)},
                   {"epsilon_max", num(ql.epsilon_max, 0.0, 1.0)},
                   {"epsilon_min", num(ql.epsilon_min, 0.0, 1.0)},
                   {"deployment_epsilon", num(ql.deployment_epsilon, 0.0, 1.0)},
                   {"bler_smoothing", num(ql.bler_smoothing, 1e-9, 1.0)},
                   {"olla_delta_up_db", num(cfg.olla_delta_up_db, 1e-9, 100.0)}});
         }},
        {"learning",
         [&](const YAML::Node &n, const std::string &f) {
             walk(r, n, f,
                  {{"n_frames", integer(ln.n_frames, 1, std::int64_t{1} << 40)},
                   {"start_distance_m", num(ln.start_distance_m, 1e-3, 1e5)},
                   {"turn_distance_m", num(ln.turn_distance_m, 1e-3, 1e5)},
                   {"speed_kmh", num(ln.speed_kmh, 0.0, 1000.0)},
                   {"direction_deg", num(ln.direction_deg, -360.0, 360.0)}});
         }},
        {"deployment",
         [&](const YAML::Node &n, const std::string &f) {
             walk(r, n, f,
                  {{"n_runs", integer(dp.n_runs, 1, 1000000)},
                   {"n_frames", integer(dp.n_frames, 1, std::int64_t{1} << 40)},
                   {"speed_kmh_min", num(dp.speed_kmh_min, 0.0, 1000.0)},
                   {"speed_kmh_max", num(dp.speed_kmh_max, 0.0, 1000.0)},
                   {"start_distance_m_min", num(dp.start_distance_m_min, 0.0, 1e5)},
                   {"start_distance_m_max", num(dp.start_distance_m_max, 0.0, 1e5)},
                   {"min_distance_m", num(dp.min_distance_m, 0.0, 1e5)},
                   {"max_distance_m", num(dp.max_distance_m, 0.0, 1e5)},
                   {"parallel", integer(dp.parallel, 1, 1024)},
                   {"olla_convention",
                    [&](const YAML::Node &v, const std::string &g) {
                        const auto s = r.scalar<std::string>(v, g);
                        if (s == "standard")
                            dp.olla_convention = OllaConvention::standard;
                        else if (s == "as_printed")
                            dp.olla_convention = OllaConvention::as_printed;
                        else
                            r.fail(v, g, "expected standard or as_printed, got '" + s + "'");
                    }},
                   {"qtable_dir",
                    [&](const YAML::Node &v, const std::string &g) { cfg.qtable_dir = r.scalar<std::string>(v, g); }},
                   {"agents", [&](const YAML::Node &v, const std::string &g) {
                        if (!v.IsSequence())
                            r.fail(v, g, "expected a list");
                        cfg.agents.clear();
                        for (const auto &item : v)
                        {
                            const auto s = r.scalar<std::string>(item, g);
                            try
                            {
                                AgentSpec::parse(s);
                            }
                            catch (const ConfigError &e)
                            {
                                r.fail(item, g, e.what());
                            }
                            cfg.agents.push_back(s);
                        }
                    }}});
         }},
        {"output",
         [&](const YAML::Node &n, const std::string &f) {
             walk(r, n, f,
                  {{"directory",
                    [&](const YAML::Node &v, const std::string &g) {
                        cfg.output.directory = r.scalar<std::string>(v, g);
                    }},
                   {"trace",
                    [&](const YAML::Node &v, const std::string &g) { cfg.output.trace = r.scalar<bool>(v, g); }}});
         }},
    };
    walk(r, root, "", top);

    ql.target_bler = lk.target_bler;
    if (seed_given)
        cfg.set_seed(cfg.seed);
    try
    {
        cfg.validate();
    }
    catch (const ConfigError &e)
    {
        throw ConfigError(source + ": " + e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str(), path.string());
}

} // namespace qlamc
