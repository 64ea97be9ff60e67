// Copyright 2026 The election-arena Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "election/scenario_io.hpp"

#include <charconv>
#include <set>
#include <sstream>
#include <vector>

namespace election {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

template <typename Int>
Int parse_int(std::string_view text, std::size_t line, std::string_view what) {
    Int value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(line, "expected integer for " + std::string(what) + ", got '" +
                                   std::string(text) + "'");
    }
    return value;
}

bool parse_bool(std::string_view text, std::size_t line, std::string_view what) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw ParseError(line, "expected true|false for " + std::string(what));
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    Scenario s;
    s.schedule.clear();
    std::set<std::string, std::less<>> seen;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (auto eq = line.find('='); eq != std::string_view::npos) {
            const auto key = trim(line.substr(0, eq));
            const auto value = trim(line.substr(eq + 1));
            if (value.empty()) throw ParseError(line_no, "missing value for '" + std::string(key) + "'");
            if (!seen.insert(std::string(key)).second) {
                throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
            }
            if (key == "nodes") {
                s.node_count = parse_int<std::uint32_t>(value, line_no, key);
            } else if (key == "algorithm") {
                auto a = parse_algorithm(value);
                if (!a) throw ParseError(line_no, "algorithm must be classic|modified");
                s.algorithm = *a;
            } else if (key == "latency") {
                s.latency = parse_int<Tick>(value, line_no, key);
            } else if (key == "timeout") {
                s.timeout = parse_int<Tick>(value, line_no, key);
            } else if (key == "seed") {
                s.seed = parse_int<std::uint64_t>(value, line_no, key);
            } else if (key == "ex_coordinator") {
                s.extra_crashed_coordinator = parse_bool(value, line_no, key);
            } else {
                throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
            }
            continue;
        }

        const auto w = words(line);
        if (w.size() != 4 || w[2] != "at") {
            throw ParseError(line_no, "expected '<crash|recover|detect> <id> at <t>'");
        }
        FaultKind kind;
        if (w[0] == "crash") {
            kind = FaultKind::Crash;
        } else if (w[0] == "recover") {
            kind = FaultKind::Recover;
        } else if (w[0] == "detect") {
            kind = FaultKind::Detect;
        } else {
            throw ParseError(line_no, "unknown event '" + std::string(w[0]) + "'");
        }
        const auto id = parse_int<std::uint32_t>(w[1], line_no, "node id");
        const auto t = parse_int<Tick>(w[3], line_no, "time");
        s.schedule.push_back({t, {kind, ProcessId{id}}});
    }

    if (!seen.contains("nodes")) throw ParseError(0, "missing `nodes`");
    if (!seen.contains("algorithm")) throw ParseError(0, "missing `algorithm`");
    validate(s);
    return s;
}

std::string render_scenario(const Scenario& s) {
    std::ostringstream out;
    out << "nodes = " << s.node_count << '\n'
        << "algorithm = " << to_string(s.algorithm) << '\n'
        << "latency = " << s.latency << '\n'
        << "timeout = " << s.timeout << '\n'
        << "seed = " << s.seed << '\n'
        << "ex_coordinator = " << (s.extra_crashed_coordinator ? "true" : "false") << '\n';
    for (const auto& f : s.schedule) {
        std::string verb(to_string(f.fault.kind));
        for (auto& c : verb) c = static_cast<char>(c - 'A' + 'a');
        out << verb << ' ' << f.fault.target.value << " at " << f.time << '\n';
    }
    return out.str();
}

}  // namespace election
