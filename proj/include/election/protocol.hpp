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

// Transport-free state machines for the classic Bully election and its
// modified single-election variant. Every transition takes a NodeState by
// value and returns the successor state together with the actions the host
// must perform; nothing here touches a clock, a queue or a socket.

#include "election/types.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace election {

/// Latency and response timeout shared by all nodes of a run.
struct ProtocolTiming {
    Tick latency = 1;
    Tick timeout = 3;

    Tick await_ok() const { return timeout; }
    Tick await_crosscheck() const { return timeout; }
    Tick await_coordinator() const { return 2 * timeout + 2 * latency; }
    Tick flag_lease() const { return 4 * timeout; }

    bool operator==(const ProtocolTiming&) const = default;
};

struct NodeState {
    ProcessId id;
    std::set<ProcessId> peers;
    Algorithm algorithm = Algorithm::Classic;
    ProtocolTiming timing;

    Status status = Status::Up;
    Role role = Role::Idle;

    // Modified algorithm only.
    bool election_flag = false;
    std::optional<ProcessId> coordinator_var;  // nullopt reads as "zero"

    std::optional<ProcessId> known_coordinator;
    std::uint64_t epoch = 0;

    std::map<TimerKind, TimerId> pending_timers;
    std::uint64_t next_timer_generation = 1;

    std::uint64_t elections_started = 0;

    bool has_timer(TimerId t) const;
    bool operator==(const NodeState&) const = default;
};

namespace action {

struct Send {
    Message msg;
    bool operator==(const Send&) const = default;
};
struct SetTimer {
    TimerId timer;
    Tick duration = 0;
    bool operator==(const SetTimer&) const = default;
};
struct CancelTimer {
    TimerId timer;
    bool operator==(const CancelTimer&) const = default;
};
struct DeclareCoordinator {
    ProcessId id;
    bool operator==(const DeclareCoordinator&) const = default;
};
struct SetFlag {
    bool value = false;
    bool operator==(const SetFlag&) const = default;
};
struct Note {
    std::string text;
    bool operator==(const Note&) const = default;
};

}  // namespace action

using Action = std::variant<action::Send, action::SetTimer, action::CancelTimer,
                            action::DeclareCoordinator, action::SetFlag, action::Note>;

struct Transition {
    NodeState state;
    std::vector<Action> actions;
};

/// Fresh node. Throws ConfigError if `id` is zero, appears in `peers`, or
/// `peers` is empty.
NodeState init_node(ProcessId id, const std::set<ProcessId>& peers, Algorithm algorithm,
                    ProtocolTiming timing = {});

Transition classic_on_detect(NodeState state);
Transition classic_on_message(NodeState state, const Message& msg);
Transition classic_on_timeout(NodeState state, TimerId timer);

Transition modified_on_detect(NodeState state);
Transition modified_on_message(NodeState state, const Message& msg);
Transition modified_on_timeout(NodeState state, TimerId timer);

Transition on_recovery(NodeState state, Tick now);

/// Marks the node crashed and forgets its timers. Identity, peers and the
/// last known coordinator survive the crash.
Transition on_crash(NodeState state);

// Dispatch on state.algorithm.
Transition on_detect(NodeState state);
Transition on_message(NodeState state, const Message& msg);
Transition on_timeout(NodeState state, TimerId timer);

}  // namespace election
