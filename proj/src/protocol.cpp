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

#include "election/protocol.hpp"

#include <algorithm>
#include <utility>

namespace election {

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Classic: return "classic";
        case Algorithm::Modified: return "modified";
    }
    return "?";
}

std::string_view to_string(MessageKind k) {
    switch (k) {
        case MessageKind::Election: return "ELECTION";
        case MessageKind::Ok: return "OK";
        case MessageKind::InformCoordinator: return "INFORM";
        case MessageKind::CrossCheck: return "CROSSCHECK";
        case MessageKind::Coordinator: return "COORDINATOR";
    }
    return "?";
}

std::string_view to_string(Role r) {
    switch (r) {
        case Role::Idle: return "idle";
        case Role::Initiator: return "initiator";
        case Role::AwaitingTakeover: return "awaiting-takeover";
        case Role::CandidateCoordinator: return "candidate";
        case Role::CoordinatorKnown: return "coordinator-known";
    }
    return "?";
}

std::string_view to_string(TimerKind k) {
    switch (k) {
        case TimerKind::AwaitOk: return "AWAIT_OK";
        case TimerKind::AwaitCoordinator: return "AWAIT_COORDINATOR";
        case TimerKind::AwaitCrossCheck: return "AWAIT_CROSSCHECK";
        case TimerKind::FlagLease: return "FLAG_LEASE";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
    if (text == "classic") return Algorithm::Classic;
    if (text == "modified") return Algorithm::Modified;
    return std::nullopt;
}

bool NodeState::has_timer(TimerId t) const {
    auto it = pending_timers.find(t.kind);
    return it != pending_timers.end() && it->second == t;
}

namespace {

// Accumulates the successor state and its actions.
class Step {
public:
    explicit Step(NodeState s) : s_(std::move(s)) {}

    NodeState& state() { return s_; }

    void note(std::string text) { actions_.emplace_back(action::Note{std::move(text)}); }

    void send(MessageKind kind, ProcessId to) {
        Message m;
        m.kind = kind;
        m.source = s_.id;
        m.destination = to;
        m.epoch = s_.epoch;
        actions_.emplace_back(action::Send{m});
    }

    void arm(TimerKind kind, Tick duration) {
        disarm(kind);
        TimerId t{kind, s_.next_timer_generation++};
        s_.pending_timers[kind] = t;
        actions_.emplace_back(action::SetTimer{t, duration});
    }

    void disarm(TimerKind kind) {
        auto it = s_.pending_timers.find(kind);
        if (it == s_.pending_timers.end()) return;
        actions_.emplace_back(action::CancelTimer{it->second});
        s_.pending_timers.erase(it);
    }

    void disarm_all() {
        for (const auto& [kind, timer] : s_.pending_timers) {
            actions_.emplace_back(action::CancelTimer{timer});
        }
        s_.pending_timers.clear();
    }

    void set_flag(bool value) {
        s_.election_flag = value;
        actions_.emplace_back(action::SetFlag{value});
    }

    void declare() { actions_.emplace_back(action::DeclareCoordinator{s_.id}); }

    std::vector<ProcessId> higher_peers() const {
        return {s_.peers.upper_bound(s_.id), s_.peers.end()};
    }

    Transition finish() && { return {std::move(s_), std::move(actions_)}; }

private:
    NodeState s_;
    std::vector<Action> actions_;
};

bool in_election(const NodeState& s) {
    return s.role == Role::Initiator || s.role == Role::AwaitingTakeover;
}

// Self-declaration plus the victory broadcast to every peer.
void announce_victory(Step& step) {
    auto& s = step.state();
    step.disarm_all();
    step.declare();
    s.epoch += 1;
    s.known_coordinator = s.id;
    s.role = Role::CoordinatorKnown;
    if (s.algorithm == Algorithm::Modified) {
        s.coordinator_var = s.id;
        if (s.election_flag) step.set_flag(false);
    }
    for (ProcessId peer : s.peers) step.send(MessageKind::Coordinator, peer);
}

void classic_initiate(Step& step) {
    auto& s = step.state();
    s.elections_started += 1;
    const auto higher = step.higher_peers();
    if (higher.empty()) {
        announce_victory(step);
        return;
    }
    for (ProcessId peer : higher) step.send(MessageKind::Election, peer);
    step.arm(TimerKind::AwaitOk, s.timing.await_ok());
    s.role = Role::Initiator;
}

void modified_initiate(Step& step) {
    auto& s = step.state();
    s.elections_started += 1;
    s.coordinator_var.reset();
    s.role = Role::Initiator;
    const auto higher = step.higher_peers();
    if (higher.empty()) {
        announce_victory(step);
        return;
    }
    // Elections go out before the flag is raised: the flag only suppresses
    // initiations that would follow it.
    for (ProcessId peer : higher) step.send(MessageKind::Election, peer);
    step.set_flag(true);
    step.arm(TimerKind::AwaitOk, s.timing.await_ok());
    step.arm(TimerKind::FlagLease, s.timing.flag_lease());
}

void raise_flag(Step& step) {
    auto& s = step.state();
    if (!s.election_flag) step.set_flag(true);
    step.arm(TimerKind::FlagLease, s.timing.flag_lease());
}

// Candidate procedure: probe every higher process, or win outright if none.
void become_candidate(Step& step) {
    auto& s = step.state();
    step.disarm(TimerKind::AwaitOk);
    step.disarm(TimerKind::AwaitCoordinator);
    s.role = Role::CandidateCoordinator;
    const auto higher = step.higher_peers();
    if (higher.empty()) {
        announce_victory(step);
        return;
    }
    raise_flag(step);
    for (ProcessId peer : higher) step.send(MessageKind::CrossCheck, peer);
    step.arm(TimerKind::AwaitCrossCheck, s.timing.await_crosscheck());
}

std::string describe(const Message& m) {
    return std::string(to_string(m.kind)) + " from " + to_string(m.source);
}

}  // namespace

NodeState init_node(ProcessId id, const std::set<ProcessId>& peers, Algorithm algorithm,
                    ProtocolTiming timing) {
    if (id.value == 0) throw ConfigError("process id must be >= 1");
    if (peers.empty()) throw ConfigError("node " + to_string(id) + " has no peers");
    if (peers.contains(id)) {
        throw ConfigError("node " + to_string(id) + " appears in its own peer set");
    }
    if (peers.begin()->value == 0) throw ConfigError("peer id must be >= 1");

    NodeState s;
    s.id = id;
    s.peers = peers;
    s.algorithm = algorithm;
    s.timing = timing;
    return s;
}

// ---------------------------------------------------------------------------
// Classic

Transition classic_on_detect(NodeState state) {
    Step step(std::move(state));
    auto& s = step.state();
    if (s.status == Status::Crashed) {
        step.note("detect ignored: node is crashed");
    } else if (in_election(s)) {
        step.note("detect ignored: already holding an election");
    } else {
        classic_initiate(step);
    }
    return std::move(step).finish();
}

Transition classic_on_message(NodeState state, const Message& msg) {
    Step step(std::move(state));
    auto& s = step.state();
    if (s.status == Status::Crashed) {
        step.note("dropped " + describe(msg) + ": node is crashed");
        return std::move(step).finish();
    }

    switch (msg.kind) {
        case MessageKind::Election:
            if (msg.source >= s.id) {
                step.note("ignored " + describe(msg) + ": sender is not lower");
                break;
            }
            step.send(MessageKind::Ok, msg.source);
            if (in_election(s)) break;
            if (msg.epoch < s.epoch) {
                // Sender started before our latest announcement, which is
                // already on its way to it.
                step.note("no cascade: election predates announcement");
                break;
            }
            classic_initiate(step);
            break;

        case MessageKind::Ok:
            s.epoch = std::max(s.epoch, msg.epoch);
            if (s.role != Role::Initiator) {
                step.note("ignored " + describe(msg));
                break;
            }
            step.disarm(TimerKind::AwaitOk);
            s.role = Role::AwaitingTakeover;
            step.arm(TimerKind::AwaitCoordinator, s.timing.await_coordinator());
            break;

        case MessageKind::Coordinator:
            s.epoch = std::max(s.epoch, msg.epoch);
            if (msg.source < s.id) {
                step.note("bully back: announcement from lower " + to_string(msg.source));
                if (!in_election(s)) classic_initiate(step);
                break;
            }
            step.disarm_all();
            s.known_coordinator = msg.source;
            s.role = Role::CoordinatorKnown;
            break;

        case MessageKind::InformCoordinator:
        case MessageKind::CrossCheck:
            step.note("ignored " + describe(msg) + ": not part of classic protocol");
            break;
    }
    return std::move(step).finish();
}

Transition classic_on_timeout(NodeState state, TimerId timer) {
    Step step(std::move(state));
    auto& s = step.state();
    if (s.status == Status::Crashed || !s.has_timer(timer)) {
        step.note(std::string("stale timer ") + std::string(to_string(timer.kind)));
        return std::move(step).finish();
    }
    s.pending_timers.erase(timer.kind);

    switch (timer.kind) {
        case TimerKind::AwaitOk:
            announce_victory(step);
            break;
        case TimerKind::AwaitCoordinator:
            step.note("no coordinator announced; re-running election");
            s.role = Role::Idle;
            classic_initiate(step);
            break;
        case TimerKind::AwaitCrossCheck:
        case TimerKind::FlagLease:
            step.note("unexpected classic timer");
            break;
    }
    return std::move(step).finish();
}

// ---------------------------------------------------------------------------
// Modified

Transition modified_on_detect(NodeState state) {
    Step step(std::move(state));
    auto& s = step.state();
    if (s.status == Status::Crashed) {
        step.note("detect ignored: node is crashed");
    } else if (s.election_flag) {
        step.note("detect suppressed: election flag is set");
    } else {
        modified_initiate(step);
    }
    return std::move(step).finish();
}

Transition modified_on_message(NodeState state, const Message& msg) {
    Step step(std::move(state));
    auto& s = step.state();
    if (s.status == Status::Crashed) {
        step.note("dropped " + describe(msg) + ": node is crashed");
        return std::move(step).finish();
    }

    switch (msg.kind) {
        case MessageKind::Election:
            if (msg.source >= s.id) {
                step.note("ignored " + describe(msg) + ": sender is not lower");
                break;
            }
            step.send(MessageKind::Ok, msg.source);
            raise_flag(step);
            break;

        case MessageKind::Ok:
            if (s.role == Role::Initiator && s.pending_timers.contains(TimerKind::AwaitOk)) {
                if (!s.coordinator_var || *s.coordinator_var < msg.source) {
                    s.coordinator_var = msg.source;
                }
            } else if (s.role == Role::CandidateCoordinator && msg.source > s.id) {
                step.note("standing down: " + to_string(msg.source) + " takes over");
                step.disarm(TimerKind::AwaitCrossCheck);
                s.role = Role::AwaitingTakeover;
            } else {
                step.note("ignored " + describe(msg));
            }
            break;

        case MessageKind::InformCoordinator:
            if (s.role == Role::CandidateCoordinator) {
                step.note("already candidate");
                break;
            }
            become_candidate(step);
            break;

        case MessageKind::CrossCheck:
            step.send(MessageKind::Ok, msg.source);
            if (s.role == Role::CandidateCoordinator) break;
            become_candidate(step);
            break;

        case MessageKind::Coordinator:
            s.epoch = std::max(s.epoch, msg.epoch);
            step.disarm_all();
            if (s.election_flag) step.set_flag(false);
            if (msg.source < s.id) {
                step.note("bully back: announcement from lower " + to_string(msg.source));
                s.role = Role::Idle;
                modified_initiate(step);
                break;
            }
            s.known_coordinator = msg.source;
            s.coordinator_var = msg.source;
            s.role = Role::CoordinatorKnown;
            break;
    }
    return std::move(step).finish();
}

Transition modified_on_timeout(NodeState state, TimerId timer) {
    Step step(std::move(state));
    auto& s = step.state();
    if (s.status == Status::Crashed || !s.has_timer(timer)) {
        step.note(std::string("stale timer ") + std::string(to_string(timer.kind)));
        return std::move(step).finish();
    }
    s.pending_timers.erase(timer.kind);

    switch (timer.kind) {
        case TimerKind::AwaitOk:
            if (!s.coordinator_var) {
                announce_victory(step);
                break;
            }
            step.send(MessageKind::InformCoordinator, *s.coordinator_var);
            s.role = Role::AwaitingTakeover;
            step.arm(TimerKind::AwaitCoordinator, s.timing.await_coordinator());
            break;

        case TimerKind::AwaitCrossCheck:
            announce_victory(step);
            break;

        case TimerKind::AwaitCoordinator:
            step.note("informed candidate never announced; re-running election");
            step.disarm_all();
            step.set_flag(false);
            s.role = Role::Idle;
            modified_initiate(step);
            break;

        case TimerKind::FlagLease:
            step.note("flag lease expired");
            step.set_flag(false);
            if (s.role == Role::AwaitingTakeover) s.role = Role::Idle;
            break;
    }
    return std::move(step).finish();
}

// ---------------------------------------------------------------------------
// Shared

Transition on_recovery(NodeState state, Tick now) {
    if (state.status == Status::Up) {
        Step step(std::move(state));
        step.note("recovery ignored at t=" + std::to_string(now) + ": node is up");
        return std::move(step).finish();
    }
    Step step(std::move(state));
    auto& s = step.state();
    s.status = Status::Up;
    s.role = Role::Idle;
    s.pending_timers.clear();
    s.election_flag = false;
    s.coordinator_var.reset();

    // A node that was coordinator before crashing no longer is one.
    const bool outranks = !s.known_coordinator || *s.known_coordinator <= s.id;
    if (!outranks) return std::move(step).finish();

    if (s.algorithm == Algorithm::Classic) {
        classic_initiate(step);
    } else {
        modified_initiate(step);
    }
    return std::move(step).finish();
}

Transition on_crash(NodeState state) {
    Step step(std::move(state));
    auto& s = step.state();
    if (s.status == Status::Crashed) {
        step.note("crash ignored: node already crashed");
        return std::move(step).finish();
    }
    s.status = Status::Crashed;
    s.role = Role::Idle;
    s.pending_timers.clear();
    s.election_flag = false;
    return std::move(step).finish();
}

Transition on_detect(NodeState state) {
    return state.algorithm == Algorithm::Classic ? classic_on_detect(std::move(state))
                                                 : modified_on_detect(std::move(state));
}

Transition on_message(NodeState state, const Message& msg) {
    return state.algorithm == Algorithm::Classic ? classic_on_message(std::move(state), msg)
                                                 : modified_on_message(std::move(state), msg);
}

Transition on_timeout(NodeState state, TimerId timer) {
    return state.algorithm == Algorithm::Classic ? classic_on_timeout(std::move(state), timer)
                                                 : modified_on_timeout(std::move(state), timer);
}

}  // namespace election
