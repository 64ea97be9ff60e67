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

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace election {

/// Virtual time, in ticks.
using Tick = std::int64_t;

/// Identity and priority of a process. Higher value wins elections.
struct ProcessId {
    std::uint32_t value = 0;

    constexpr ProcessId() = default;
    constexpr explicit ProcessId(std::uint32_t v) : value(v) {}

    constexpr auto operator<=>(const ProcessId&) const = default;
};

inline std::string to_string(ProcessId id) { return std::to_string(id.value); }

/// Raised for malformed node sets, scenarios and timing parameters.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Algorithm : std::uint8_t { Classic, Modified };

enum class MessageKind : std::uint8_t {
    Election,
    Ok,
    InformCoordinator,
    CrossCheck,
    Coordinator,
};

enum class Status : std::uint8_t { Up, Crashed };

enum class Role : std::uint8_t {
    Idle,
    Initiator,
    AwaitingTakeover,
    CandidateCoordinator,
    CoordinatorKnown,
};

enum class TimerKind : std::uint8_t {
    AwaitOk,
    AwaitCoordinator,
    AwaitCrossCheck,
    FlagLease,
};

/// A timer instance. The generation distinguishes a re-armed timer from a
/// cancelled earlier instance of the same kind.
struct TimerId {
    TimerKind kind = TimerKind::AwaitOk;
    std::uint64_t generation = 0;

    constexpr auto operator<=>(const TimerId&) const = default;
};

struct Message {
    MessageKind kind = MessageKind::Election;
    ProcessId source;
    ProcessId destination;
    // Announcement round the sender knew of when sending. Carried on the wire
    // only; never changes how many messages a round costs.
    std::uint64_t epoch = 0;
    Tick sent_at = 0;
    Tick deliver_at = 0;

    bool operator==(const Message&) const = default;
};

std::string_view to_string(Algorithm a);
std::string_view to_string(MessageKind k);
std::string_view to_string(Role r);
std::string_view to_string(TimerKind k);

std::optional<Algorithm> parse_algorithm(std::string_view text);

}  // namespace election
