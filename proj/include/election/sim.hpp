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

#include "election/protocol.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace election {

enum class FaultKind : std::uint8_t { Crash, Recover, Detect };

std::string_view to_string(FaultKind k);

struct FaultEvent {
    FaultKind kind = FaultKind::Detect;
    ProcessId target;
    bool operator==(const FaultEvent&) const = default;
};

struct ScheduledFault {
    Tick time = 0;
    FaultEvent fault;
    bool operator==(const ScheduledFault&) const = default;
};

/// A declarative experiment. Participants are 1..node_count; when
/// `extra_crashed_coordinator` is set, node_count + 1 exists as the crashed
/// previous coordinator.
struct Scenario {
    std::uint32_t node_count = 1;
    bool extra_crashed_coordinator = true;
    Algorithm algorithm = Algorithm::Classic;
    Tick latency = 1;
    Tick timeout = 3;
    std::vector<ScheduledFault> schedule;
    std::uint64_t seed = 0;

    std::uint32_t total_nodes() const { return node_count + (extra_crashed_coordinator ? 1 : 0); }
    std::optional<ProcessId> ex_coordinator() const {
        if (!extra_crashed_coordinator) return std::nullopt;
        return ProcessId{node_count + 1};
    }

    Scenario& at(Tick t, FaultKind kind, std::uint32_t id) {
        schedule.push_back({t, {kind, ProcessId{id}}});
        return *this;
    }

    bool operator==(const Scenario&) const = default;
};

/// Throws ConfigError naming the offending field.
void validate(const Scenario& s);

/// 50 x timeout x node count.
Tick default_max_ticks(const Scenario& s);

enum class RecordType : std::uint8_t { Delivery, Drop, Timer, Fault };

/// Compact view of a node after a record was applied.
struct NodeSnapshot {
    Status status = Status::Up;
    Role role = Role::Idle;
    bool election_flag = false;
    std::optional<ProcessId> coordinator_var;
    std::optional<ProcessId> known_coordinator;
    bool operator==(const NodeSnapshot&) const = default;
};

struct TraceRecord {
    Tick time = 0;
    std::uint64_t seq = 0;
    RecordType type = RecordType::Fault;
    ProcessId node;  // the node the event was applied to
    std::optional<Message> message;
    std::optional<TimerId> timer;
    std::optional<FaultEvent> fault;
    // Message hops on this event's cause chain; faults are 0.
    std::uint32_t depth = 0;
    // Seq of the record whose processing produced this event.
    std::optional<std::uint64_t> cause;
    std::vector<Action> actions;
    NodeSnapshot after;

    bool operator==(const TraceRecord&) const = default;
};

/// Exact single-line textual form of a record.
std::string render(const TraceRecord& r);
std::string render_trace(std::span<const TraceRecord> trace);

struct KindCounts {
    std::uint64_t election = 0;
    std::uint64_t ok = 0;
    std::uint64_t inform = 0;
    std::uint64_t crosscheck = 0;
    std::uint64_t coordinator = 0;

    std::uint64_t& operator[](MessageKind k);
    std::uint64_t operator[](MessageKind k) const;
    bool operator==(const KindCounts&) const = default;
};

struct MessageStats {
    // Every send, by kind.
    KindCounts sent;
    // Non-crosscheck sends to or from the modeled ex-coordinator; they sit
    // outside the N counted participants.
    std::uint64_t ex_coordinator = 0;
    std::uint64_t headline_total = 0;
    std::uint64_t total_with_crosscheck = 0;
    std::optional<std::uint32_t> critical_path_depth;

    bool operator==(const MessageStats&) const = default;
};

enum class Outcome : std::uint8_t { Quiescent, NonQuiescent };

struct SimResult {
    Scenario scenario;
    std::map<ProcessId, NodeState> final_states;
    std::vector<TraceRecord> trace;
    MessageStats stats;
    Outcome outcome = Outcome::Quiescent;
    Tick quiescence_time = 0;
    std::optional<ProcessId> agreed_coordinator;

    bool quiescent() const { return outcome == Outcome::Quiescent; }
    /// Nodes that started at least one election.
    std::vector<ProcessId> initiators() const;
};

/// Single-threaded virtual-time engine for one scenario.
class Sim {
public:
    /// Validates the scenario, initializes every node and queues the schedule.
    explicit Sim(const Scenario& scenario);

    /// Applies the next event, or returns nullopt once the queue is empty.
    std::optional<TraceRecord> step();

    Tick now() const { return now_; }
    bool idle();
    std::optional<Tick> next_event_time();

    const Scenario& scenario() const { return scenario_; }
    const std::map<ProcessId, NodeState>& nodes() const { return nodes_; }
    const std::vector<TraceRecord>& trace() const { return trace_; }

    /// Steps until the queue drains or the next event lies beyond max_ticks.
    SimResult run_to_quiescence(std::optional<Tick> max_ticks = std::nullopt);

private:
    struct Delivery {
        Message msg;
    };
    struct TimerFire {
        ProcessId node;
        TimerId timer;
    };
    struct Event {
        Tick time = 0;
        std::uint32_t source_key = 0;
        std::uint64_t seq = 0;
        std::uint32_t depth = 0;
        std::optional<std::uint64_t> cause;
        std::variant<Delivery, TimerFire, FaultEvent> payload;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const;
    };

    void push(Event e);
    void discard_stale_timers();
    void apply_actions(const TraceRecord& rec, ProcessId node);
    NodeSnapshot snapshot(ProcessId id) const;

    Scenario scenario_;
    std::map<ProcessId, NodeState> nodes_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::vector<TraceRecord> trace_;
    Tick now_ = 0;
    std::uint64_t next_seq_ = 0;
};

inline Sim build_sim(const Scenario& scenario) { return Sim(scenario); }

SimResult run_scenario(const Scenario& scenario, std::optional<Tick> max_ticks = std::nullopt);

/// Runs independent scenarios on a thread pool; results keep input order.
std::vector<SimResult> run_batch(std::span<const Scenario> scenarios, unsigned threads = 0);

MessageStats message_stats(const SimResult& result);

/// Longest causal message chain ending at a delivered Coordinator message.
/// nullopt for a non-quiescent run.
std::optional<std::uint32_t> critical_path_depth(const SimResult& result);

struct Verdict {
    bool pass = false;
    std::optional<ProcessId> coordinator;
    std::string reason;
};

/// Passes iff the run is quiescent and every Up node knows the highest Up id.
Verdict check_agreement(const SimResult& result);

}  // namespace election
