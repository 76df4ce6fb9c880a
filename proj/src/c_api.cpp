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

#include "qlamc/qlamc.h"
#include "qlamc/report.hpp"
#include "qlamc/run_config.hpp"

#include <cstdio>
#include <cstring>
#include <memory>
#include <filesystem>
#include <new>
#include <string>

namespace fs = std::filesystem;
using namespace qlamc;

struct qlamc_config
{
    RunConfig cfg;
};

struct qlamc_deployment
{
    std::vector<AgentResults> results;
    std::vector<std::string> ids;
    std::string summary;
};

struct qlamc_qtable
{
    QTable table;
};

namespace
{

thread_local std::string last_error;

qlamc_status fail(qlamc_status s, const std::string &msg)
{
    last_error = msg;
    return s;
}

template <class F> qlamc_status guarded(F &&f)
{
    try
    {
        f();
        last_error.clear();
        return QLAMC_OK;
    }
    catch (const ConfigError &e)
    {
        return fail(QLAMC_ERR_CONFIG, e.what());
    }
    catch (const std::bad_alloc &)
    {
        return fail(QLAMC_ERR_RUNTIME, "out of memory");
    }
    catch (const std::exception &e)
    {
        return fail(QLAMC_ERR_RUNTIME, e.what());
    }
}

#define QLAMC_REQUIRE(cond, what)                                                                                      \
    do                                                                                                                 \
    {                                                                                                                  \
        if (!(cond))                                                                                                   \
            return fail(QLAMC_ERR_ARGUMENT, what);                                                                     \
    } while (0)

// Refuse before anything is written, so a refused call leaves the directory untouched
void check_outputs(const std::vector<fs::path> &paths, int overwrite)
{
    if (overwrite)
        return;
    for (const auto &p : paths)
        if (fs::exists(p))
            throw ConfigError("output " + p.string() + " exists (pass overwrite to replace it)");
}

void make_dir(const fs::path &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw RuntimeError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void new_config(RunConfig cfg, qlamc_config **out) { *out = new qlamc_config{std::move(cfg)}; }

} // namespace

extern "C" {

const char *qlamc_last_error(void) { return last_error.c_str(); }

const char *qlamc_version(void) { return "1.0.0"; }

qlamc_status qlamc_config_default(qlamc_config **out)
{
    QLAMC_REQUIRE(out, "out is null");
    return guarded([&] { new_config(default_run_config(), out); });
}

qlamc_status qlamc_config_load(const char *path, qlamc_config **out)
{
    QLAMC_REQUIRE(path && out, "null argument");
    *out = nullptr;
    return guarded([&] { new_config(load_run_config(path), out); });
}

qlamc_status qlamc_config_parse(const char *yaml_text, qlamc_config **out)
{
    QLAMC_REQUIRE(yaml_text && out, "null argument");
    *out = nullptr;
    return guarded([&] { new_config(parse_run_config(yaml_text), out); });
}

void qlamc_config_free(qlamc_config *cfg) { delete cfg; }

qlamc_status qlamc_config_set_seed(qlamc_config *cfg, uint64_t seed)
{
    QLAMC_REQUIRE(cfg, "config is null");
    return guarded([&] { cfg->cfg.set_seed(seed); });
}

qlamc_status qlamc_config_get_seed(const qlamc_config *cfg, uint64_t *seed)
{
    QLAMC_REQUIRE(cfg && seed, "null argument");
    *seed = cfg->cfg.seed;
    return QLAMC_OK;
}

qlamc_status qlamc_config_set_output_dir(qlamc_config *cfg, const char *dir)
{
    QLAMC_REQUIRE(cfg && dir, "null argument");
    return guarded([&] {
        if (!*dir)
            throw ConfigError("output directory must not be empty");
        cfg->cfg.output.directory = dir;
    });
}

qlamc_status qlamc_config_set_trace(qlamc_config *cfg, int enabled)
{
    QLAMC_REQUIRE(cfg, "config is null");
    cfg->cfg.output.trace = enabled != 0;
    return QLAMC_OK;
}

qlamc_status qlamc_config_set_parallel(qlamc_config *cfg, int threads)
{
    QLAMC_REQUIRE(cfg, "config is null");
    return guarded([&] {
        if (threads < 1)
            throw ConfigError("parallel must be >= 1");
        cfg->cfg.deployment.parallel = threads;
    });
}

qlamc_status qlamc_config_set_training_agent(qlamc_config *cfg, int n_cqi, const char *reward)
{
    QLAMC_REQUIRE(cfg && reward, "null argument");
    return guarded([&] {
        CqiConfig cqi = cfg->cfg.sim.link.cqi;
        cqi.n_cqi = n_cqi;
        cqi.validate();
        const auto kind = reward_kind_from_string(reward);
        cfg->cfg.sim.link.cqi = cqi;
        cfg->cfg.ql.reward_kind = kind;
    });
}

qlamc_status qlamc_config_set_agents(qlamc_config *cfg, const char *const *ids, size_t count)
{
    QLAMC_REQUIRE(cfg && (ids || count == 0), "null argument");
    return guarded([&] {
        std::vector<std::string> agents;
        for (size_t i = 0; i < count; ++i)
        {
            if (!ids[i])
                throw ConfigError("agent id " + std::to_string(i) + " is null");
            AgentSpec::parse(ids[i]);
            agents.emplace_back(ids[i]);
        }
        cfg->cfg.agents = std::move(agents);
    });
}

qlamc_status qlamc_config_set_learning_frames(qlamc_config *cfg, int64_t n_frames)
{
    QLAMC_REQUIRE(cfg, "config is null");
    return guarded([&] {
        LearningConfig l = cfg->cfg.learning;
        l.n_frames = n_frames;
        l.validate();
        cfg->cfg.learning = l;
    });
}

qlamc_status qlamc_config_set_deployment_size(qlamc_config *cfg, int n_runs, int64_t n_frames)
{
    QLAMC_REQUIRE(cfg, "config is null");
    return guarded([&] {
        DeploymentConfig d = cfg->cfg.deployment;
        d.n_runs = n_runs;
        d.n_frames = n_frames;
        d.validate();
        cfg->cfg.deployment = d;
    });
}

qlamc_status qlamc_train(const qlamc_config *cfg, int overwrite, qlamc_train_summary *summary)
{
    QLAMC_REQUIRE(cfg, "config is null");
    return guarded([&] {
        const RunConfig &c = cfg->cfg;
        c.validate();
        if (c.agent_kind != AgentKind::qlamc)
            throw ConfigError("train needs agent.kind qlamc");
        const fs::path dir = c.output.directory;
        const int n = c.sim.link.cqi.n_cqi;
        const auto qpath = dir / qtable_file_name(n, c.ql.reward_kind);
        const auto tpath = dir / ("learning_trace_n" + std::to_string(n) + "_" + to_string(c.ql.reward_kind) + ".csv");
        check_outputs({qpath, tpath}, overwrite);

        QlConfig ql = c.ql;
        ql.target_bler = c.sim.link.target_bler;
        const auto result = run_learning_phase(c.sim, c.learning, ql);

        make_dir(dir);
        QTableHeader header;
        header.n_states = result.table.n_states();
        header.n_actions = result.table.n_actions();
        header.reward = c.ql.reward_kind;
        header.config_hash = c.training_hash();
        save_qtable(qpath, result.table, header);
        write_text_file(tpath, to_csv(learning_trace_csv(result)));

        if (summary)
        {
            summary->n_states = header.n_states;
            summary->n_actions = header.n_actions;
            summary->decisions = result.decisions;
            summary->final_epsilon = result.final_epsilon;
            summary->simulated_time_s = result.simulated_time_s;
            const std::string p = qpath.string();
            std::snprintf(summary->qtable_path, sizeof(summary->qtable_path), "%s", p.c_str());
        }
    });
}

qlamc_status qlamc_deploy(const qlamc_config *cfg, int overwrite, qlamc_deployment **out)
{
    QLAMC_REQUIRE(cfg, "config is null");
    if (out)
        *out = nullptr;
    return guarded([&] {
        const RunConfig &c = cfg->cfg;
        c.validate();
        if (c.agents.empty())
            throw ConfigError("deployment.agents is empty");

        const fs::path dir = c.output.directory;
        const fs::path qdir = c.qtable_dir.empty() ? dir : fs::path(c.qtable_dir);
        std::vector<DeployedAgent> agents;
        for (const auto &id : c.agents)
        {
            DeployedAgent a{AgentSpec::parse(id), std::nullopt};
            if (a.spec.kind == AgentKind::qlamc)
            {
                const auto qpath = qdir / qtable_file_name(a.spec.n_cqi, a.spec.reward);
                if (!fs::exists(qpath))
                    throw ConfigError("agent " + id + ": Q-table " + qpath.string() + " not found");
                QTableHeader h;
                a.table = load_qtable(qpath, &h);
                if (h.reward != a.spec.reward)
                    throw ConfigError("agent " + id + ": Q-table " + qpath.string() + " was trained with reward " +
                                      to_string(h.reward));
            }
            agents.push_back(std::move(a));
        }

        std::vector<fs::path> outputs = {dir / "per_run.csv", dir / "aggregate.csv", dir / "cdf.csv"};
        if (c.output.trace)
            outputs.push_back(dir / "trace.csv");
        check_outputs(outputs, overwrite);

        DeploymentConfig dep = c.deployment;
        dep.keep_trace = c.output.trace;
        QlConfig ql = c.ql;
        ql.target_bler = c.sim.link.target_bler;
        auto results = run_deployment_phase(c.sim, dep, ql, agents);

        make_dir(dir);
        write_text_file(outputs[0], to_csv(per_run_csv(results)));
        write_text_file(outputs[1], to_csv(aggregate_csv(results)));
        write_text_file(outputs[2], to_csv(cdf_csv(results)));
        if (c.output.trace)
            write_text_file(outputs[3], to_csv(tti_trace_csv(results)));

        if (out)
        {
            auto d = std::make_unique<qlamc_deployment>();
            d->summary = summary_table(results);
            for (const auto &r : results)
                d->ids.push_back(r.spec.id());
            // per-run traces can be large; the handle keeps only the aggregates
            for (auto &r : results)
                for (auto &m : r.runs)
                    m.drop_trace();
            d->results = std::move(results);
            *out = d.release();
        }
    });
}

void qlamc_deployment_free(qlamc_deployment *d) { delete d; }

size_t qlamc_deployment_agent_count(const qlamc_deployment *d) { return d ? d->results.size() : 0; }

const char *qlamc_deployment_agent_id(const qlamc_deployment *d, size_t index)
{
    if (!d || index >= d->ids.size())
        return nullptr;
    return d->ids[index].c_str();
}

qlamc_status qlamc_deployment_mean_bler(const qlamc_deployment *d, size_t index, double *out)
{
    QLAMC_REQUIRE(d && out, "null argument");
    QLAMC_REQUIRE(index < d->results.size(), "agent index out of range");
    *out = d->results[index].mean_bler();
    return QLAMC_OK;
}

qlamc_status qlamc_deployment_mean_se(const qlamc_deployment *d, size_t index, double *out)
{
    QLAMC_REQUIRE(d && out, "null argument");
    QLAMC_REQUIRE(index < d->results.size(), "agent index out of range");
    *out = d->results[index].mean_spectral_efficiency();
    return QLAMC_OK;
}

const char *qlamc_deployment_summary(const qlamc_deployment *d) { return d ? d->summary.c_str() : ""; }

qlamc_status qlamc_curves(const qlamc_config *cfg, int overwrite)
{
    QLAMC_REQUIRE(cfg, "config is null");
    return guarded([&] {
        const RunConfig &c = cfg->cfg;
        c.sim.link.bler.validate();
        const fs::path dir = c.output.directory;
        const std::vector<fs::path> outputs = {dir / "bler_curves.csv", dir / "illa_thresholds.csv"};
        check_outputs(outputs, overwrite);
        const auto curves = to_csv(bler_curves_csv(c.sim.link.bler, CurveGrid{}));
        const auto thresholds = to_csv(illa_thresholds_csv(c.sim.link.bler, c.sim.link.target_bler));
        make_dir(dir);
        write_text_file(outputs[0], curves);
        write_text_file(outputs[1], thresholds);
    });
}

qlamc_status qlamc_qtable_load(const char *path, qlamc_qtable **out)
{
    QLAMC_REQUIRE(path && out, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new qlamc_qtable{load_qtable(path)}; });
}

void qlamc_qtable_free(qlamc_qtable *q) { delete q; }

qlamc_status qlamc_qtable_dims(const qlamc_qtable *q, int *n_states, int *n_actions)
{
    QLAMC_REQUIRE(q && n_states && n_actions, "null argument");
    *n_states = q->table.n_states();
    *n_actions = q->table.n_actions();
    return QLAMC_OK;
}

qlamc_status qlamc_qtable_value(const qlamc_qtable *q, int state, int action, double *out)
{
    QLAMC_REQUIRE(q && out, "null argument");
    QLAMC_REQUIRE(state >= 0 && state < q->table.n_states() && action >= 0 && action < q->table.n_actions(),
                  "Q-table index out of range");
    *out = q->table.value(state, action);
    return QLAMC_OK;
}

qlamc_status qlamc_qtable_visits(const qlamc_qtable *q, int state, int action, uint64_t *out)
{
    QLAMC_REQUIRE(q && out, "null argument");
    QLAMC_REQUIRE(state >= 0 && state < q->table.n_states() && action >= 0 && action < q->table.n_actions(),
                  "Q-table index out of range");
    *out = q->table.visits(state, action);
    return QLAMC_OK;
}

} // extern "C"
