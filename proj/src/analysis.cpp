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

#include "election/analysis.hpp"

#include <sstream>

namespace election::analysis {

const char* const kConcurrentConflictNote =
    "classic concurrent figure n(n+1)/2 is the published closed form; summing the itemized "
    "terms gives n^2-1 instead. Both are shown next to the simulated count.";

namespace {

void check_priority(std::int64_t N, std::int64_t P) {
    if (N < 1 || P < 1 || P > N) {
        throw std::domain_error("need 1 <= P <= N, got N=" + std::to_string(N) +
                                " P=" + std::to_string(P));
    }
}

void check_positive(std::int64_t v, const char* what) {
    if (v < 1) throw std::domain_error(std::string(what) + " must be >= 1");
}

}  // namespace

std::int64_t classic_messages(std::int64_t N, std::int64_t P) {
    check_priority(N, P);
    return (N - P + 1) * (N - P) + N - 1;
}

std::int64_t modified_messages(std::int64_t N, std::int64_t P) {
    check_priority(N, P);
    return 2 * (N - P) + N;
}

std::int64_t classic_worst(std::int64_t N) {
    check_positive(N, "N");
    return N * N - 1;
}

ModifiedWorst modified_worst(std::int64_t N) {
    check_positive(N, "N");
    return {3 * N - 1, modified_messages(N, 1)};
}

std::int64_t classic_concurrent(std::int64_t n) {
    check_positive(n, "n");
    return n * (n + 1) / 2;
}

std::int64_t classic_concurrent_itemized(std::int64_t n) {
    check_positive(n, "n");
    std::int64_t total = 0;
    for (std::int64_t k = 1; k < n; ++k) total += 2 * (n - k);  // elections + responses
    return total + (n - 1);                                     // coordinator broadcast
}

std::int64_t modified_concurrent(std::int64_t n) {
    check_positive(n, "n");
    return 3 * n - 1;
}

std::vector<TableRow> comparison_table(std::span<const std::int64_t> sizes) {
    if (sizes.empty()) throw std::domain_error("sizes must be non-empty");
    std::vector<TableRow> rows;
    rows.reserve(sizes.size());
    for (auto N : sizes) rows.push_back({N, classic_worst(N), modified_messages(N, 1)});
    return rows;
}

VerificationReport verify(const SimResult& result, const FormulaInputs& inputs, Algorithm algorithm) {
    VerificationReport r;
    r.algorithm = algorithm;
    r.inputs = inputs;
    r.simulated = result.stats.headline_total;
    r.crosscheck = result.stats.sent.crosscheck;
    r.analytic = algorithm == Algorithm::Classic ? classic_messages(inputs.N, inputs.P)
                                                 : modified_messages(inputs.N, inputs.P);

    std::ostringstream s;
    s << to_string(algorithm) << " N=" << inputs.N << " P=" << inputs.P
      << (result.scenario.extra_crashed_coordinator ? " (+crashed ex-coordinator)" : "");
    r.summary = s.str();

    if (!result.quiescent()) {
        r.match = false;
        r.notes.emplace_back("NonQuiescent: run did not drain before max_ticks");
        return r;
    }
    r.match = r.simulated == static_cast<std::uint64_t>(r.analytic);
    if (algorithm == Algorithm::Modified && inputs.P == inputs.N) {
        r.notes.emplace_back(
            "P = N: the detector self-declares without an inform message, so the simulation "
            "sends N-1 where the formula gives N");
    }
    if (result.stats.ex_coordinator > 0) {
        r.notes.emplace_back(std::to_string(result.stats.ex_coordinator) +
                             " message(s) touching the crashed ex-coordinator excluded from headline");
    }
    return r;
}

std::string format(const VerificationReport& r) {
    std::ostringstream out;
    out << r.summary << '\n'
        << "simulated=" << r.simulated << " analytic=" << r.analytic << " crosscheck=" << r.crosscheck
        << " match=" << (r.match ? "true" : "false") << '\n';
    for (const auto& n : r.notes) out << "note: " << n << '\n';
    return out.str();
}

AuditRow audit(std::int64_t N) {
    AuditRow row;
    row.N = N;
    row.modified_worst = modified_worst(N);
    row.classic_concurrent = classic_concurrent(N);
    row.classic_concurrent_itemized = classic_concurrent_itemized(N);
    row.modified_concurrent = modified_concurrent(N);
    return row;
}

std::string format(const AuditRow& row) {
    std::ostringstream out;
    out << "N=" << row.N << " modified worst: published 3N-1=" << row.modified_worst.as_published
        << ", table-consistent 3N-2=" << row.modified_worst.as_derived << '\n';
    out << "N=" << row.N << " concurrent detectors n=" << row.N
        << ": classic published n(n+1)/2=" << row.classic_concurrent
        << ", itemized n^2-1=" << row.classic_concurrent_itemized;
    if (row.simulated_classic_concurrent) out << ", simulated=" << *row.simulated_classic_concurrent;
    out << "; modified published 3n-1=" << row.modified_concurrent << " (or 3n="
        << row.modified_concurrent + 1 << ")";
    if (row.simulated_modified_concurrent) out << ", simulated=" << *row.simulated_modified_concurrent;
    out << '\n' << "note: " << kConcurrentConflictNote << '\n';
    return out.str();
}

}  // namespace election::analysis
