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


// Exercises the shared library through its C header only.

#include "qlamc/qlamc.h"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace
{

fs::path scratch(const std::string &name)
{
    const auto p = fs::temp_directory_path() / ("qlamc_c_api_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Cfg
{
    qlamc_config *ptr = nullptr;
    ~Cfg() { qlamc_config_free(ptr); }
};

// small protocol, quick enough for a unit test
void small(qlamc_config *c, const fs::path &out)
{
    REQUIRE(qlamc_config_set_output_dir(c, out.string().c_str()) == QLAMC_OK);
    REQUIRE(qlamc_config_set_learning_frames(c, 100) == QLAMC_OK);
    REQUIRE(qlamc_config_set_deployment_size(c, 3, 5) == QLAMC_OK);
}

} // namespace

TEST_CASE("C API: config handles and argument errors")
{
    CHECK(std::string(qlamc_version()) == "1.0.0");
    Cfg c;
    REQUIRE(qlamc_config_default(&c.ptr) == QLAMC_OK);
    CHECK(std::string(qlamc_last_error()).empty());
    uint64_t seed = 0;
    CHECK(qlamc_config_get_seed(c.ptr, &seed) == QLAMC_OK);
    CHECK(seed == 1);
    CHECK(qlamc_config_set_seed(c.ptr, 99) == QLAMC_OK);
    CHECK(qlamc_config_get_seed(c.ptr, &seed) == QLAMC_OK);
    CHECK(seed == 99);

    CHECK(qlamc_config_set_seed(nullptr, 1) == QLAMC_ERR_ARGUMENT);
    CHECK(std::string(qlamc_last_error()).size() > 0);
    CHECK(qlamc_config_default(nullptr) == QLAMC_ERR_ARGUMENT);
    CHECK(qlamc_config_set_training_agent(c.ptr, 30, "speed") == QLAMC_ERR_CONFIG);
    CHECK(qlamc_config_set_parallel(c.ptr, 0) == QLAMC_ERR_CONFIG);
    const char *bad[] = {"table", "nonsense"};
    CHECK(qlamc_config_set_agents(c.ptr, bad, 2) == QLAMC_ERR_CONFIG);
    CHECK(qlamc_config_set_agents(c.ptr, nullptr, 1) == QLAMC_ERR_ARGUMENT);
    qlamc_config_free(nullptr);
}

TEST_CASE("C API: YAML errors carry the field name")
{
    qlamc_config *c = nullptr;
    CHECK(qlamc_config_parse("agent:\n  learning_rate: 1.5\n", &c) == QLAMC_ERR_CONFIG);
    CHECK(c == nullptr);
    CHECK(std::string(qlamc_last_error()).find("agent.learning_rate") != std::string::npos);
    CHECK(qlamc_config_load("/nonexistent.yaml", &c) == QLAMC_ERR_CONFIG);
}

TEST_CASE("C API: train, load the table, deploy, refuse to overwrite")
{
    const auto out = scratch("flow");
    Cfg c;
    REQUIRE(qlamc_config_default(&c.ptr) == QLAMC_OK);
    small(c.ptr, out);
    REQUIRE(qlamc_config_set_training_agent(c.ptr, 15, "bler") == QLAMC_OK);

    qlamc_train_summary s{};
    REQUIRE(qlamc_train(c.ptr, 0, &s) == QLAMC_OK);
    CHECK(s.n_states == 15);
    CHECK(s.n_actions == 25);
    CHECK(s.decisions == 1000);
    CHECK(s.simulated_time_s == doctest::Approx(0.5));
    CHECK(fs::path(s.qtable_path) == out / "qtable_n15_bler.txt");
    CHECK(fs::exists(out / "learning_trace_n15_bler.csv"));
    const auto before = slurp(s.qtable_path);
    CHECK(qlamc_train(c.ptr, 0, &s) == QLAMC_ERR_CONFIG);
    CHECK(std::string(qlamc_last_error()).find("exists") != std::string::npos);
    CHECK(slurp(s.qtable_path) == before);
    CHECK(qlamc_train(c.ptr, 1, &s) == QLAMC_OK);
    CHECK(slurp(s.qtable_path) == before);

    qlamc_qtable *q = nullptr;
    REQUIRE(qlamc_qtable_load(s.qtable_path, &q) == QLAMC_OK);
    int ns = 0, na = 0;
    CHECK(qlamc_qtable_dims(q, &ns, &na) == QLAMC_OK);
    CHECK(ns == 15);
    CHECK(na == 25);
    uint64_t total = 0;
    for (int st = 0; st < ns; ++st)
        for (int a = 0; a < na; ++a)
        {
            uint64_t v = 0;
            REQUIRE(qlamc_qtable_visits(q, st, a, &v) == QLAMC_OK);
            total += v;
        }
    CHECK(total == 1000);
    double v = 0.0;
    CHECK(qlamc_qtable_value(q, 15, 0, &v) == QLAMC_ERR_ARGUMENT);
    qlamc_qtable_free(q);

    const char *agents[] = {"qlamc:15:bler", "table", "olla:0.1"};
    REQUIRE(qlamc_config_set_agents(c.ptr, agents, 3) == QLAMC_OK);
    qlamc_deployment *d = nullptr;
    REQUIRE(qlamc_deploy(c.ptr, 0, &d) == QLAMC_OK);
    CHECK(qlamc_deployment_agent_count(d) == 3);
    CHECK(std::string(qlamc_deployment_agent_id(d, 0)) == "qlamc:15:bler");
    CHECK(qlamc_deployment_agent_id(d, 3) == nullptr);
    double bl = -1.0, se = -1.0;
    CHECK(qlamc_deployment_mean_bler(d, 1, &bl) == QLAMC_OK);
    CHECK(qlamc_deployment_mean_se(d, 1, &se) == QLAMC_OK);
    CHECK(bl >= 0.0);
    CHECK(bl <= 1.0);
    CHECK(se >= 0.0);
    CHECK(qlamc_deployment_mean_se(d, 7, &se) == QLAMC_ERR_ARGUMENT);
    CHECK(std::string(qlamc_deployment_summary(d)).find("QL-AMC") != std::string::npos);
    qlamc_deployment_free(d);
    for (const char *f : {"per_run.csv", "aggregate.csv", "cdf.csv"})
        CHECK(fs::exists(out / f));
    CHECK(!fs::exists(out / "trace.csv"));
    CHECK(qlamc_deploy(c.ptr, 0, nullptr) == QLAMC_ERR_CONFIG);
}

TEST_CASE("C API: deploy errors leave no files behind")
{
    const auto out = scratch("errors");
    Cfg c;
    REQUIRE(qlamc_config_default(&c.ptr) == QLAMC_OK);
    small(c.ptr, out);

    REQUIRE(qlamc_config_set_agents(c.ptr, nullptr, 0) == QLAMC_OK);
    CHECK(qlamc_deploy(c.ptr, 0, nullptr) == QLAMC_ERR_CONFIG);
    CHECK(std::string(qlamc_last_error()).find("empty") != std::string::npos);

    const char *ql[] = {"qlamc:60:se"};
    REQUIRE(qlamc_config_set_agents(c.ptr, ql, 1) == QLAMC_OK);
    CHECK(qlamc_deploy(c.ptr, 0, nullptr) == QLAMC_ERR_CONFIG);
    CHECK(std::string(qlamc_last_error()).find("not found") != std::string::npos);
    CHECK((!fs::exists(out) || fs::is_empty(out)));
}

TEST_CASE("C API: curves and byte-identical reruns")
{
    const auto a = scratch("rerun_a");
    const auto b = scratch("rerun_b");
    for (const auto &dir : {a, b})
    {
        Cfg c;
        REQUIRE(qlamc_config_default(&c.ptr) == QLAMC_OK);
        small(c.ptr, dir);
        REQUIRE(qlamc_config_set_training_agent(c.ptr, 10, "se") == QLAMC_OK);
        const char *agents[] = {"qlamc:10:se", "olla:1"};
        REQUIRE(qlamc_config_set_agents(c.ptr, agents, 2) == QLAMC_OK);
        REQUIRE(qlamc_config_set_trace(c.ptr, 1) == QLAMC_OK);
        REQUIRE(qlamc_train(c.ptr, 0, nullptr) == QLAMC_OK);
        REQUIRE(qlamc_deploy(c.ptr, 0, nullptr) == QLAMC_OK);
        REQUIRE(qlamc_curves(c.ptr, 0) == QLAMC_OK);
    }
    for (const char *f : {"qtable_n10_se.txt", "learning_trace_n10_se.csv", "per_run.csv", "aggregate.csv", "cdf.csv",
                          "trace.csv", "bler_curves.csv", "illa_thresholds.csv"})
    {
        INFO(f);
        CHECK(!slurp(a / f).empty());
        CHECK(slurp(a / f) == slurp(b / f));
    }
}
