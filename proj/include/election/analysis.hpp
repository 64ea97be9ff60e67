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

// Closed-form message counts for both protocols and the checks that hold a
// simulated run against them.

#include "election/sim.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace election::analysis {

/// N live participants, detector priority P (1 = lowest), n concurrent detectors.
struct FormulaInputs {
    std::int64_t N = 1;
    std::int64_t P = 1;
    std::int64_t n = 1;
};

/// (N - P + 1)(N - P) + N - 1. Throws std::domain_error unless 1 <= P <= N.
std::int64_t classic_messages(std::int64_t N, std::int64_t P);

/// 2(N - P) + N, cross-check probes excluded. Throws std::domain_error unless 1 <= P <= N.
std::int64_t modified_messages(std::int64_t N, std::int64_t P);

/// N^2 - 1.
std::int64_t classic_worst(std::int64_t N);

struct ModifiedWorst {
    std::int64_t as_published = 0;  // 3N - 1
    std::int64_t as_derived = 0;    // modified_messages(N, 1) = 3N - 2
};
ModifiedWorst modified_worst(std::int64_t N);

/// n(n + 1) / 2, verbatim.
std::int64_t classic_concurrent(std::int64_t n);
/// Sum of the itemized concurrent-detector terms: 2(n-1) + 2(n-2) + ... + (n-1) = n^2 - 1.
std::int64_t classic_concurrent_itemized(std::int64_t n);
/// 3n - 1; the "or 3n" variant is this plus one.
std::int64_t modified_concurrent(std::int64_t n);

struct TableRow {
    std::int64_t N = 0;
    std::int64_t classic = 0;
    std::int64_t modified = 0;
    bool operator==(const TableRow&) const = default;
};

/// Per N: (N, classic_worst(N), modified_messages(N, 1)).
std::vector<TableRow> comparison_table(std::span<const std::int64_t> sizes);

struct VerificationReport {
    std::string summary;
    Algorithm algorithm = Algorithm::Classic;
    FormulaInputs inputs;
    std::uint64_t simulated = 0;
    std::int64_t analytic = 0;
    std::uint64_t crosscheck = 0;
    bool match = false;
    std::vector<std::string> notes;
};

VerificationReport verify(const SimResult& result, const FormulaInputs& inputs, Algorithm algorithm);

std::string format(const VerificationReport& report);

/// The published-vs-derived figures for N participants, with the simulated
/// counts for n = N concurrent detectors when provided.
struct AuditRow {
    std::int64_t N = 0;
    ModifiedWorst modified_worst;
    std::int64_t classic_concurrent = 0;
    std::int64_t classic_concurrent_itemized = 0;
    std::int64_t modified_concurrent = 0;
    std::optional<std::uint64_t> simulated_classic_concurrent;
    std::optional<std::uint64_t> simulated_modified_concurrent;
};

AuditRow audit(std::int64_t N);
std::string format(const AuditRow& row);

/// Text appended to every concurrent-detector report.
extern const char* const kConcurrentConflictNote;

}  // namespace election::analysis
