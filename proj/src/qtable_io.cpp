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

#include "qlamc/agents.hpp"
#include "qlamc/text_format.hpp"

#include <fstream>
#include <sstream>

namespace qlamc
{

namespace
{
constexpr const char *magic = "# qlamc-qtable";

std::string next_line(std::istream &in, const std::filesystem::path &path, int &line_no)
{
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError(path.string() + ": unexpected end of file after line " + std::to_string(line_no));
    ++line_no;
    return line;
}

std::string expect_key(const std::string &line, const std::string &key, const std::filesystem::path &path,
                       int line_no)
{
    if (line.rfind(key + " ", 0) != 0)
        throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected '" + key + "'");
    return line.substr(key.size() + 1);
}
} // namespace

void save_qtable(const std::filesystem::path &path, const QTable &table, const QTableHeader &header)
{
    std::ostringstream out;
    out << magic << " v" << header.version << '\n';
    out << "n_states " << table.n_states() << '\n';
    out << "n_actions " << table.n_actions() << '\n';
    out << "reward " << to_string(header.reward) << '\n';
    out << "config_hash " << format_hash(header.config_hash) << '\n';
    out << "values\n";
    for (int s = 0; s < table.n_states(); ++s)
    {
        for (int a = 0; a < table.n_actions(); ++a)
            out << (a ? " " : "") << format_double(table.value(s, a));
        out << '\n';
    }
    out << "visits\n";
    for (int s = 0; s < table.n_states(); ++s)
    {
        for (int a = 0; a < table.n_actions(); ++a)
            out << (a ? " " : "") << table.visits(s, a);
        out << '\n';
    }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw RuntimeError("cannot write Q-table file " + path.string());
    file << out.str();
    if (!file)
        throw RuntimeError("failed while writing Q-table file " + path.string());
}

QTable load_qtable(const std::filesystem::path &path, QTableHeader *header)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw RuntimeError("cannot open Q-table file " + path.string());

    int line_no = 0;
    QTableHeader h;
    const std::string first = next_line(in, path, line_no);
    if (first.rfind(magic, 0) != 0)
        throw ConfigError(path.string() + ":1: not a qlamc Q-table file");
    if (first != std::string(magic) + " v1")
        throw ConfigError(path.string() + ":1: unsupported Q-table version '" + first.substr(std::string(magic).size()) +
                          "'");
    h.n_states = static_cast<int>(parse_int(expect_key(next_line(in, path, line_no), "n_states", path, line_no)));
    h.n_actions = static_cast<int>(parse_int(expect_key(next_line(in, path, line_no), "n_actions", path, line_no)));
    h.reward = reward_kind_from_string(expect_key(next_line(in, path, line_no), "reward", path, line_no));
    h.config_hash = parse_hash(expect_key(next_line(in, path, line_no), "config_hash", path, line_no));

    QTable table(h.n_states, h.n_actions);
    auto read_matrix = [&](const std::string &label, auto &&store) {
        if (next_line(in, path, line_no) != label)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected '" + label + "'");
        for (int s = 0; s < h.n_states; ++s)
        {
            const auto fields = split(next_line(in, path, line_no), ' ');
            if (static_cast<int>(fields.size()) != h.n_actions)
                throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(h.n_actions) + " columns, found " + std::to_string(fields.size()));
            for (int a = 0; a < h.n_actions; ++a)
                store(s, a, fields[static_cast<std::size_t>(a)]);
        }
    };
    read_matrix("values", [&](int s, int a, const std::string &f) { table.value(s, a) = parse_double(f); });
    read_matrix("visits", [&](int s, int a, const std::string &f) {
        table.visits(s, a) = static_cast<std::uint64_t>(parse_int(f));
    });

    if (header)
        *header = h;
    return table;
}

} // namespace qlamc
