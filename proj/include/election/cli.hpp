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

#pragma once

#include "election/analysis.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace election::cli {

struct CsvRow {
    std::int64_t N = 0;
    std::int64_t P = 0;
    Algorithm algorithm = Algorithm::Classic;
    std::uint64_t simulated = 0;
    std::int64_t analytic = 0;
    std::uint64_t crosscheck = 0;
    bool match = false;
    std::optional<std::uint32_t> critical_path_depth;
};

inline constexpr std::string_view kCsvHeader =
    "N,P,algorithm,simulated,analytic,crosscheck,match,critical_path_depth";

std::string render_csv(const std::vector<CsvRow>& rows);

/// Worst-case scenario used by the table: N live nodes, crashed node N+1,
/// node 1 detects at t=0.
Scenario worst_case_scenario(std::uint32_t N, Algorithm algorithm);

struct TableOutput {
    std::vector<CsvRow> rows;  // ordered by N, then classic before modified
    std::vector<analysis::AuditRow> audit;
    bool all_agreed = true;
};

/// Simulates both algorithms for every N (concurrently) and pairs each run
/// with its formula value.
TableOutput compute_table(const std::vector<std::int64_t>& sizes);

/// "5,10,15" -> {5, 10, 15}. Throws std::invalid_argument on anything else.
std::vector<std::int64_t> parse_sizes(std::string_view text);

/// nullopt if the closed forms apply to the scenario, otherwise why not.
std::optional<std::string> formula_preconditions(const Scenario& s);

int cmd_run(const std::filesystem::path& scenario, const std::optional<std::filesystem::path>& trace,
            std::ostream& out, std::ostream& err);
int cmd_table(const std::vector<std::int64_t>& sizes, const std::optional<std::filesystem::path>& csv,
              std::ostream& out, std::ostream& err);
int cmd_verify(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err);

}  // namespace election::cli
