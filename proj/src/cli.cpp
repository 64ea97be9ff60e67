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

#include "election/cli.hpp"

#include "election/scenario_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace election::cli {

namespace {

std::optional<std::string> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Reads and parses; reports to err and returns nullopt on failure.
std::optional<Scenario> load(const std::filesystem::path& path, std::ostream& err) {
    auto text = read_file(path);
    if (!text) {
        err << "error: cannot read " << path.string() << '\n';
        return std::nullopt;
    }
    try {
        return parse_scenario(*text);
    } catch (const std::exception& e) {
        err << "error: " << path.string() << ": " << e.what() << '\n';
        return std::nullopt;
    }
}

std::string id_or_none(const std::optional<ProcessId>& id) {
    return id ? to_string(*id) : std::string("none");
}

}  // namespace

std::string render_csv(const std::vector<CsvRow>& rows) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.N << ',' << r.P << ',' << to_string(r.algorithm) << ',' << r.simulated << ','
            << r.analytic << ',' << r.crosscheck << ',' << (r.match ? "true" : "false") << ',';
        if (r.critical_path_depth) out << *r.critical_path_depth;
        out << '\n';
    }
    return out.str();
}

Scenario worst_case_scenario(std::uint32_t N, Algorithm algorithm) {
    Scenario s;
    s.node_count = N;
    s.extra_crashed_coordinator = true;
    s.algorithm = algorithm;
    s.at(0, FaultKind::Detect, 1);
    return s;
}

namespace {

Scenario concurrent_scenario(std::uint32_t N, Algorithm algorithm) {
    Scenario s;
    s.node_count = N;
    s.algorithm = algorithm;
    for (std::uint32_t i = 1; i <= N; ++i) s.at(0, FaultKind::Detect, i);
    return s;
}

}  // namespace

TableOutput compute_table(const std::vector<std::int64_t>& sizes) {
    if (sizes.empty()) throw std::invalid_argument("sizes must be non-empty");
    std::vector<Scenario> batch;
    for (auto N : sizes) {
        if (N < 1) throw std::invalid_argument("sizes must be positive");
        const auto n = static_cast<std::uint32_t>(N);
        batch.push_back(worst_case_scenario(n, Algorithm::Classic));
        batch.push_back(worst_case_scenario(n, Algorithm::Modified));
        batch.push_back(concurrent_scenario(n, Algorithm::Classic));
        batch.push_back(concurrent_scenario(n, Algorithm::Modified));
    }
    const auto results = run_batch(batch);

    TableOutput out;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const analysis::FormulaInputs inputs{sizes[i], 1, 1};
        for (std::size_t k = 0; k < 2; ++k) {
            const auto& res = results[4 * i + k];
            const auto report = analysis::verify(res, inputs, res.scenario.algorithm);
            out.rows.push_back({sizes[i], 1, res.scenario.algorithm, report.simulated, report.analytic,
                                report.crosscheck, report.match, res.stats.critical_path_depth});
        }
        for (std::size_t k = 0; k < 4; ++k) {
            if (!check_agreement(results[4 * i + k]).pass) out.all_agreed = false;
        }
        auto row = analysis::audit(sizes[i]);
        row.simulated_classic_concurrent = results[4 * i + 2].stats.headline_total;
        row.simulated_modified_concurrent = results[4 * i + 3].stats.headline_total;
        out.audit.push_back(row);
    }
    return out;
}

std::vector<std::int64_t> parse_sizes(std::string_view text) {
    std::vector<std::int64_t> sizes;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find(',', pos), text.size());
        const auto item = text.substr(pos, end - pos);
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size() || v < 1) {
            throw std::invalid_argument("bad size '" + std::string(item) + "'");
        }
        sizes.push_back(v);
        pos = end + 1;
    }
    return sizes;
}

std::optional<std::string> formula_preconditions(const Scenario& s) {
    std::size_t detects = 0;
    for (const auto& f : s.schedule) {
        switch (f.fault.kind) {
            case FaultKind::Detect: ++detects; break;
            case FaultKind::Crash:
            case FaultKind::Recover:
                return "formula preconditions unmet: schedule contains crash/recover events";
        }
    }
    if (detects != 1) {
        return "formula preconditions unmet: need exactly one detect event, found " +
               std::to_string(detects);
    }
    const auto detector = s.schedule.front().fault.target.value;
    if (detector > s.node_count) {
        return "formula preconditions unmet: detector is the crashed ex-coordinator";
    }
    return std::nullopt;
}

int cmd_run(const std::filesystem::path& path, const std::optional<std::filesystem::path>& trace,
            std::ostream& out, std::ostream& err) {
    auto scenario = load(path, err);
    if (!scenario) return 1;

    const auto result = run_scenario(*scenario);
    const auto verdict = check_agreement(result);
    const auto& st = result.stats;

    out << "coordinator=" << id_or_none(result.agreed_coordinator) << " messages=" << st.headline_total
        << " crosscheck=" << st.sent.crosscheck << " depth="
        << (st.critical_path_depth ? std::to_string(*st.critical_path_depth) : "none")
        << " quiescence_time=" << result.quiescence_time
        << " outcome=" << (result.quiescent() ? "quiescent" : "non-quiescent") << '\n';
    if (!verdict.pass) out << "agreement: FAIL (" << verdict.reason << ")\n";

    if (trace) {
        std::ofstream f(*trace, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << trace->string() << '\n';
            return 1;
        }
        f << render_trace(result.trace);
    }
    return verdict.pass ? 0 : 2;
}

int cmd_table(const std::vector<std::int64_t>& sizes, const std::optional<std::filesystem::path>& csv,
              std::ostream& out, std::ostream& err) {
    TableOutput table;
    try {
        table = compute_table(sizes);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    out << std::setw(6) << "N" << std::setw(14) << "classic_sim" << std::setw(14) << "classic_eq"
        << std::setw(14) << "modified_sim" << std::setw(14) << "modified_eq" << std::setw(12)
        << "crosscheck" << '\n';
    bool mismatch = false;
    for (std::size_t i = 0; i + 1 < table.rows.size(); i += 2) {
        const auto& c = table.rows[i];
        const auto& m = table.rows[i + 1];
        out << std::setw(6) << c.N << std::setw(14) << c.simulated << std::setw(14) << c.analytic
            << std::setw(14) << m.simulated << std::setw(14) << m.analytic << std::setw(12)
            << m.crosscheck;
        if (!c.match || !m.match) {
            out << "  *";
            mismatch = true;
        }
        out << '\n';
    }
    if (mismatch) {
        out << "* simulation differs from the closed form; at N=1 the lone detector self-declares "
               "and no inform message is sent\n";
    }
    out << '\n';
    for (const auto& a : table.audit) out << analysis::format(a);

    if (csv) {
        std::ofstream f(*csv, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << csv->string() << '\n';
            return 1;
        }
        f << render_csv(table.rows);
    }
    return table.all_agreed ? 0 : 2;
}

int cmd_verify(const std::filesystem::path& path, std::ostream& out, std::ostream& err) {
    auto scenario = load(path, err);
    if (!scenario) return 1;
    if (auto why = formula_preconditions(*scenario)) {
        err << *why << '\n';
        return 1;
    }

    const auto result = run_scenario(*scenario);
    const analysis::FormulaInputs inputs{scenario->node_count,
                                         scenario->schedule.front().fault.target.value, 1};
    const auto report = analysis::verify(result, inputs, scenario->algorithm);
    out << analysis::format(report);

    const auto verdict = check_agreement(result);
    if (!verdict.pass) out << "agreement: FAIL (" << verdict.reason << ")\n";
    return report.match && verdict.pass ? 0 : 2;
}

}  // namespace election::cli
