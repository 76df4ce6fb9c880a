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

#ifndef QLAMC_RUN_CONFIG_HPP
#define QLAMC_RUN_CONFIG_HPP

#include "qlamc/sim_engine.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qlamc
{

struct OutputConfig
{
    std::string directory = "out";
    bool trace = false; // per-TTI trace CSV in deploy
};

// Everything a train / deploy / curves invocation needs
struct RunConfig
{
    std::uint64_t seed = 1;
    SimConfig sim;
    AgentKind agent_kind = AgentKind::qlamc;
    double olla_delta_up_db = 0.1;
    QlConfig ql;
    LearningConfig learning;
    DeploymentConfig deployment;
    std::vector<std::string> agents; // deploy list, see default_agent_list()
    std::string qtable_dir;          // empty: output directory
    OutputConfig output;

    // Push the top-level seed into the phase configs
    void set_seed(std::uint64_t s);
    void validate() const;

    // Hash of everything that shapes a trained Q-table
    std::uint64_t training_hash() const;
};

// QL-AMC {10, 15, 30, 60} x {bler, se}, table, OLLA with 0.01 / 0.1 / 1 dB steps
std::vector<std::string> default_agent_list();

RunConfig default_run_config();

// YAML text with the sections seed, channel, beam, link, agent, learning,
// deployment, output. Unknown keys and out-of-range values throw ConfigError
// naming source:line and the offending field.
RunConfig parse_run_config(const std::string &text, const std::string &source = "<config>");
RunConfig load_run_config(const std::filesystem::path &path);

// File name of the Q-table for one QL-AMC agent, e.g. qtable_n60_se.txt
std::string qtable_file_name(int n_cqi, RewardKind reward);

} // namespace qlamc

#endif
