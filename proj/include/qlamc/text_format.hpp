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

#ifndef QLAMC_TEXT_FORMAT_HPP
#define QLAMC_TEXT_FORMAT_HPP

// Number formatting shared by the Q-table and CSV writers. Doubles are written in
// their shortest round-trip form, so parsing a file restores the exact values.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qlamc
{

std::string format_double(double v);
double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);

std::string format_hash(std::uint64_t h);
std::uint64_t parse_hash(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

// 64-bit FNV-1a
std::uint64_t fnv1a(std::string_view text);

} // namespace qlamc

#endif
