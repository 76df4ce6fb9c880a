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

#include "qlamc/report.hpp"
#include "qlamc/text_format.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qlamc
{

std::size_t CsvTable::column(const std::string &name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw RuntimeError("CSV has no column '" + name + "'");
}

std::string to_csv(const CsvTable &table)
{
    std::string out;
    auto line = [&](const std::vector<std::string> &fields) {
        for (std::size_t i = 0; i < fields.size(); ++i)
        {
            if (fields[i].find_first_of(",\"\n\r") != std::string::npos)
                throw RuntimeError("CSV field '" + fields[i] + "' needs quoting");
            if (i)
                out += ',';
            out += fields[i];
        }
        out += '\n';
    };
    line(table.header);
    for (const auto &row : table.rows)
    {
        if (row.size() != table.header.size())
            throw RuntimeError("CSV row width does not match the header");
        line(row);
    }
    return out;
}

CsvTable parse_csv(const std::string &text)
{
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        auto fields = split(line, ',');
        if (line_no == 1)
        {
            t.header = std::move(fields);
            continue;
        }
        if (fields.size() != t.header.size())
            throw RuntimeError("CSV line " + std::to_string(line_no) + ": expected " +
                               std::to_string(t.header.size()) + " fields, found " + std::to_string(fields.size()));
        t.rows.push_back(std::move(fields));
    }
    if (line_no == 0)
        throw RuntimeError("CSV is empty");
    return t;
}

CsvTable read_csv(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw RuntimeError("cannot open " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return parse_csv(s.str());
}

void write_text_file(const std::filesystem::path &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw RuntimeError("cannot write " + path.string());
    out << content;
    if (!out)
        throw RuntimeError("failed while writing " + path.string());
}

namespace
{
std::string str(double v) { return format_double(v); }
std::string str(std::int64_t v) { return std::to_string(v); }
std::string str(std::uint64_t v) { return std::to_string(v); }
std::string str(int v) { return std::to_string(v); }
} // namespace

CsvTable learning_trace_csv(const LearningResult &result)
{
    CsvTable t{{"frame", "time_s", "distance_m", "sweep_snr_db", "mean_snr_db", "epsilon", "nacks", "mean_se"}, {}};
    t.rows.reserve(result.trace.size());
    for (const auto &r : result.trace)
        t.rows.push_back({str(r.frame), str(r.time_s), str(r.distance_m), str(r.sweep_snr_db), str(r.mean_snr_db),
                          str(r.epsilon), str(r.nacks), str(r.mean_se)});
    return t;
}

CsvTable per_run_csv(const std::vector<AgentResults> &results)
{
    CsvTable t{{"run_id", "agent", "mean_bler", "mean_se"}, {}};
    for (const auto &a : results)
        for (std::size_t run = 0; run < a.runs.size(); ++run)
            t.rows.push_back({str(std::uint64_t{run}), a.spec.id(), str(a.runs[run].mean_bler()),
                              str(a.runs[run].mean_spectral_efficiency())});
    return t;
}

CsvTable aggregate_csv(const std::vector<AgentResults> &results)
{
    CsvTable t{{"type", "cardinality", "reward", "agent", "bler", "se"}, {}};
    for (const auto &a : results)
    {
        const bool ql = a.spec.kind == AgentKind::qlamc;
        t.rows.push_back({a.spec.type_label(), ql ? str(a.spec.n_cqi) : "-", ql ? to_string(a.spec.reward) : "-",
                          a.spec.id(), str(a.mean_bler()), str(a.mean_spectral_efficiency())});
    }
    return t;
}

CsvTable cdf_csv(const std::vector<AgentResults> &results)
{
    CsvTable t{{"agent", "value", "probability"}, {}};
    for (const auto &a : results)
    {
        const auto se = a.per_run_spectral_efficiency();
        for (const auto &p : aggregate_cdf(se))
            t.rows.push_back({a.spec.id(), str(p.value), str(p.probability)});
    }
    return t;
}

CsvTable tti_trace_csv(const std::vector<AgentResults> &results)
{
    CsvTable t{{"agent", "run_id", "frame", "tti", "snr_db", "cqi", "mcs_index", "ack", "efficiency"}, {}};
    for (const auto &a : results)
        for (std::size_t run = 0; run < a.runs.size(); ++run)
            for (const auto &r : a.runs[run].trace())
                t.rows.push_back({a.spec.id(), str(std::uint64_t{run}), str(r.frame), str(r.tti), str(r.snr_db),
                                  str(r.cqi), str(r.mcs_index), r.ack ? "1" : "0", str(r.efficiency)});
    return t;
}

std::vector<double> CurveGrid::points() const
{
    if (!(step_db > 0.0) || !(snr_max_db >= snr_min_db))
        throw ConfigError("curve grid is invalid");
    // integer steps so the grid does not drift
    const auto n = static_cast<std::int64_t>(std::floor((snr_max_db - snr_min_db) / step_db + 1e-9));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n + 1));
    for (std::int64_t i = 0; i <= n; ++i)
        out.push_back(snr_min_db + static_cast<double>(i) * step_db);
    return out;
}

CsvTable bler_curves_csv(const BlerModel &model, const CurveGrid &grid)
{
    model.validate();
    CsvTable t{{"action", "mcs_index", "snr_db", "bler"}, {}};
    const auto pts = grid.points();
    const auto table = mcs_table();
    for (std::size_t a = 0; a < table.size(); ++a)
        for (double x : pts)
            t.rows.push_back({str(std::uint64_t{a}), str(table[a].index), str(x), str(bler(x, table[a], model))});
    return t;
}

CsvTable illa_thresholds_csv(const BlerModel &model, double target_bler)
{
    const auto illa = build_illa_table(model, mcs_table(), target_bler);
    CsvTable t{{"action", "mcs_index", "modulation_bits", "code_rate", "efficiency", "snr50_db", "threshold_db"}, {}};
    const auto table = mcs_table();
    for (std::size_t a = 0; a < table.size(); ++a)
        t.rows.push_back({str(std::uint64_t{a}), str(table[a].index), str(table[a].modulation_bits),
                          str(table[a].code_rate), str(table[a].nominal_efficiency()), str(model.snr50_db(table[a])),
                          str(illa.thresholds_db()[a])});
    return t;
}

std::string summary_table(const std::vector<AgentResults> &results)
{
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-8s %-12s %-7s %-8s %-8s %s\n", "Type", "Cardinality", "Reward", "BLER", "SE",
                  "Agent");
    out += buf;
    for (const auto &a : results)
    {
        const bool ql = a.spec.kind == AgentKind::qlamc;
        const std::string card = ql ? std::to_string(a.spec.n_cqi) : "-";
        const std::string reward = ql ? (a.spec.reward == RewardKind::se ? "SE" : "BLER") : "-";
        std::snprintf(buf, sizeof(buf), "%-8s %-12s %-7s %-8.4f %-8.4f %s\n", a.spec.type_label().c_str(),
                      card.c_str(), reward.c_str(), a.mean_bler(), a.mean_spectral_efficiency(), a.spec.id().c_str());
        out += buf;
    }
    return out;
}

} // namespace qlamc
