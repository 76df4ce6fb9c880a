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

#ifndef QLAMC_REPORT_HPP
#define QLAMC_REPORT_HPP

// CSV artifacts. Headers are fixed; doubles use the shortest
// round-trip form.

#include "qlamc/sim_engine.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace qlamc
{

struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string &name) const; // throws when absent
};

std::string to_csv(const CsvTable &table);
CsvTable parse_csv(const std::string &text);
CsvTable read_csv(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &content);

// frame,time_s,distance_m,sweep_snr_db,mean_snr_db,epsilon,nacks,mean_se
CsvTable learning_trace_csv(const LearningResult &result);

// run_id,agent,mean_bler,mean_se
CsvTable per_run_csv(const std::vector<AgentResults> &results);

// type,cardinality,reward,agent,bler,se
CsvTable aggregate_csv(const std::vector<AgentResults> &results);

// agent,value,probability
CsvTable cdf_csv(const std::vector<AgentResults> &results);

// agent,run_id,frame,tti,snr_db,cqi,mcs_index,ack,efficiency
CsvTable tti_trace_csv(const std::vector<AgentResults> &results);

struct CurveGrid
{
    double snr_min_db = -10.0;
    double snr_max_db = 40.0;
    double step_db = 0.1;

    std::vector<double> points() const;
};

// action,mcs_index,snr_db,bler
CsvTable bler_curves_csv(const BlerModel &model, const CurveGrid &grid);

// action,mcs_index,modulation_bits,code_rate,efficiency,snr50_db,threshold_db
CsvTable illa_thresholds_csv(const BlerModel &model, double target_bler);

// Text table with columns Type, Cardinality, Reward, BLER, SE (SE to 4 decimals)
std::string summary_table(const std::vector<AgentResults> &results);

} // namespace qlamc

#endif
