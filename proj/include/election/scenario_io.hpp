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

#include "election/sim.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace election {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    /// 1-based; 0 when the problem is not tied to a line (e.g. missing key).
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Parses the line-oriented scenario format:
///
///     nodes = 10
///     algorithm = classic        # or modified
///     latency = 1                # default 1
///     timeout = 3                # default 3
///     seed = 0                   # default 0
///     ex_coordinator = true      # default true
///     crash 3 at 5
///     recover 3 at 9
///     detect 4 at 0
///
/// Malformed lines throw ParseError; out-of-range ids or bad timing throw
/// ConfigError.
Scenario parse_scenario(std::string_view text);

/// Canonical text form; parse_scenario(render_scenario(s)) == s.
std::string render_scenario(const Scenario& s);

}  // namespace election
