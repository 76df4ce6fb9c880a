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

// Command line front end. Talks to the simulator only through qlamc.h.

#include "qlamc/qlamc.h"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace
{

struct Options
{
    std::string config;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> parallel;
    bool trace = false;
    bool overwrite = false;

    // train
    std::optional<int> n_cqi;
    std::string reward;
    bool all = false;

    // deploy
    std::vector<std::string> agents;
};

int exit_code(qlamc_status s)
{
    if (s == QLAMC_OK)
        return 0;
    std::fprintf(stderr, "error: %s\n", qlamc_last_error());
    return s == QLAMC_ERR_CONFIG ? 1 : 2;
}

struct ConfigHandle
{
    qlamc_config *ptr = nullptr;
    ~ConfigHandle() { qlamc_config_free(ptr); }
};

qlamc_status load(const Options &o, ConfigHandle &h)
{
    qlamc_status s = o.config.empty() ? qlamc_config_default(&h.ptr) : qlamc_config_load(o.config.c_str(), &h.ptr);
    if (s == QLAMC_OK && o.seed)
        s = qlamc_config_set_seed(h.ptr, *o.seed);
    if (s == QLAMC_OK && !o.out_dir.empty())
        s = qlamc_config_set_output_dir(h.ptr, o.out_dir.c_str());
    if (s == QLAMC_OK && o.trace)
        s = qlamc_config_set_trace(h.ptr, 1);
    if (s == QLAMC_OK && o.parallel)
        s = qlamc_config_set_parallel(h.ptr, *o.parallel);
    if (s == QLAMC_OK && !o.agents.empty())
    {
        std::vector<const char *> ids;
        for (const auto &a : o.agents)
            ids.push_back(a.c_str());
        s = qlamc_config_set_agents(h.ptr, ids.data(), ids.size());
    }
    return s;
}

int train_one(qlamc_config *cfg, const Options &o)
{
    qlamc_train_summary sum{};
    const auto s = qlamc_train(cfg, o.overwrite, &sum);
    if (s != QLAMC_OK)
        return exit_code(s);
    std::printf("trained %d x %d Q-table in %.1f s of network time (%lld decisions, final epsilon %.4f)\n  %s\n",
                sum.n_states, sum.n_actions, sum.simulated_time_s, static_cast<long long>(sum.decisions),
                sum.final_epsilon, sum.qtable_path);
    return 0;
}

// QL-AMC entries of the deploy list, as (n_cqi, reward)
std::vector<std::pair<int, std::string>> ql_agents(const std::vector<std::string> &ids)
{
    std::vector<std::pair<int, std::string>> out;
    for (const auto &id : ids)
    {
        if (id.rfind("qlamc:", 0) != 0)
            continue;
        const auto colon = id.find(':', 6);
        if (colon == std::string::npos)
            continue;
        out.emplace_back(std::stoi(id.substr(6, colon - 6)), id.substr(colon + 1));
    }
    return out;
}

int cmd_train(const Options &o)
{
    ConfigHandle h;
    if (const auto s = load(o, h); s != QLAMC_OK)
        return exit_code(s);
    if (o.n_cqi || !o.reward.empty())
    {
        if (o.all)
        {
            std::fprintf(stderr, "error: --all cannot be combined with --n-cqi/--reward\n");
            return 1;
        }
        const int n = o.n_cqi.value_or(-1);
        const std::string reward = o.reward.empty() ? "se" : o.reward;
        if (n < 0)
        {
            std::fprintf(stderr, "error: --reward needs --n-cqi\n");
            return 1;
        }
        if (const auto s = qlamc_config_set_training_agent(h.ptr, n, reward.c_str()); s != QLAMC_OK)
            return exit_code(s);
    }
    if (!o.all)
        return train_one(h.ptr, o);

    std::vector<std::string> ids = o.agents;
    if (ids.empty())
    {
        // default deploy list
        for (const char *reward : {"bler", "se"})
            for (int n : {10, 15, 30, 60})
                ids.push_back("qlamc:" + std::to_string(n) + ":" + reward);
    }
    for (const auto &[n, reward] : ql_agents(ids))
    {
        if (const auto s = qlamc_config_set_training_agent(h.ptr, n, reward.c_str()); s != QLAMC_OK)
            return exit_code(s);
        if (const int rc = train_one(h.ptr, o); rc != 0)
            return rc;
    }
    return 0;
}

int cmd_deploy(const Options &o)
{
    ConfigHandle h;
    if (const auto s = load(o, h); s != QLAMC_OK)
        return exit_code(s);
    qlamc_deployment *d = nullptr;
    const auto s = qlamc_deploy(h.ptr, o.overwrite, &d);
    if (s != QLAMC_OK)
        return exit_code(s);
    std::fputs(qlamc_deployment_summary(d), stdout);
    qlamc_deployment_free(d);
    return 0;
}

int cmd_curves(const Options &o)
{
    ConfigHandle h;
    if (const auto s = load(o, h); s != QLAMC_OK)
        return exit_code(s);
    return exit_code(qlamc_curves(h.ptr, o.overwrite));
}

void common_flags(CLI::App *sub, Options &o)
{
    sub->add_option("--config", o.config, "YAML config file (defaults reproduce the reference protocol)");
    sub->add_option("--out-dir", o.out_dir, "output directory (overrides output.directory)");
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_flag("--overwrite", o.overwrite, "replace existing output files");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"qlamc: Q-learning link adaptation simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", qlamc_version());
    Options o;

    auto *train = app.add_subcommand("train", "learning phase, writes a Q-table and a learning trace");
    common_flags(train, o);
    train->add_option("--n-cqi", o.n_cqi, "state cardinality (overrides link.n_cqi)");
    train->add_option("--reward", o.reward, "se or bler (overrides agent.reward)");
    train->add_flag("--all", o.all, "train every QL-AMC agent of the deploy list");
    train->add_option("--agent", o.agents, "deploy-list entry used with --all (repeatable)");

    auto *deploy = app.add_subcommand("deploy", "deployment runs, writes per-run, aggregate and CDF CSVs");
    common_flags(deploy, o);
    deploy->add_flag("--trace", o.trace, "also write the per-TTI trace");
    deploy->add_option("--parallel", o.parallel, "worker threads for independent runs")->check(CLI::PositiveNumber);
    deploy->add_option("--agent", o.agents, "agent id, repeatable (qlamc:<n>:<se|bler>, table, olla:<dB>)");

    auto *curves = app.add_subcommand("curves", "BLER curves and ILLA thresholds");
    common_flags(curves, o);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (train->parsed())
        return cmd_train(o);
    if (deploy->parsed())
        return cmd_deploy(o);
    return cmd_curves(o);
}
