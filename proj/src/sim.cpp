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

#include "election/sim.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

namespace election {

std::string_view to_string(FaultKind k) {
    switch (k) {
        case FaultKind::Crash: return "CRASH";
        case FaultKind::Recover: return "RECOVER";
        case FaultKind::Detect: return "DETECT";
    }
    return "?";
}

void validate(const Scenario& s) {
    if (s.node_count < 1) throw ConfigError("node_count: must be >= 1");
    if (s.latency < 1) throw ConfigError("latency: must be >= 1");
    if (s.timeout <= 2 * s.latency) throw ConfigError("timeout: must exceed 2 x latency");
    for (const auto& f : s.schedule) {
        if (f.time < 0) throw ConfigError("schedule: negative time");
        if (f.fault.target.value < 1 || f.fault.target.value > s.total_nodes()) {
            throw ConfigError("schedule: node " + to_string(f.fault.target) + " out of range 1.." +
                              std::to_string(s.total_nodes()));
        }
    }
}

Tick default_max_ticks(const Scenario& s) {
    return 50 * s.timeout * static_cast<Tick>(s.total_nodes());
}

std::uint64_t& KindCounts::operator[](MessageKind k) {
    switch (k) {
        case MessageKind::Election: return election;
        case MessageKind::Ok: return ok;
        case MessageKind::InformCoordinator: return inform;
        case MessageKind::CrossCheck: return crosscheck;
        case MessageKind::Coordinator: return coordinator;
    }
    return election;
}

std::uint64_t KindCounts::operator[](MessageKind k) const {
    return const_cast<KindCounts&>(*this)[k];
}

std::string render(const TraceRecord& r) {
    std::ostringstream out;
    out << "t=" << r.time << " seq=" << r.seq << ' ';
    switch (r.type) {
        case RecordType::Drop:
            out << "DROP ";
            [[fallthrough]];
        case RecordType::Delivery:
            out << r.message->source.value << "->" << r.message->destination.value << ' '
                << to_string(r.message->kind);
            break;
        case RecordType::Fault:
            out << "FAULT " << to_string(r.fault->kind) << ' ' << r.fault->target.value;
            break;
        case RecordType::Timer:
            out << "TIMER " << r.node.value << ' ' << to_string(r.timer->kind);
            break;
    }
    return out.str();
}

std::string render_trace(std::span<const TraceRecord> trace) {
    std::string text;
    for (const auto& r : trace) {
        text += render(r);
        text += '\n';
    }
    return text;
}

std::vector<ProcessId> SimResult::initiators() const {
    std::vector<ProcessId> ids;
    for (const auto& [id, node] : final_states) {
        if (node.elections_started > 0) ids.push_back(id);
    }
    return ids;
}

// ---------------------------------------------------------------------------

bool Sim::Later::operator()(const Event& a, const Event& b) const {
    return std::tie(a.time, a.source_key, a.seq) > std::tie(b.time, b.source_key, b.seq);
}

Sim::Sim(const Scenario& scenario) : scenario_(scenario) {
    validate(scenario_);
    const ProtocolTiming timing{scenario_.latency, scenario_.timeout};
    const auto total = scenario_.total_nodes();

    std::set<ProcessId> all;
    for (std::uint32_t i = 1; i <= total; ++i) all.insert(ProcessId{i});

    for (ProcessId id : all) {
        auto peers = all;
        peers.erase(id);
        NodeState node;
        if (peers.empty()) {
            // Singleton cluster: nobody to elect but itself.
            node.id = id;
            node.algorithm = scenario_.algorithm;
            node.timing = timing;
        } else {
            node = init_node(id, peers, scenario_.algorithm, timing);
        }
        node.known_coordinator = scenario_.ex_coordinator();
        nodes_.emplace(id, std::move(node));
    }
    if (auto ex = scenario_.ex_coordinator()) {
        nodes_[*ex] = on_crash(std::move(nodes_[*ex])).state;
    }

    std::vector<ScheduledFault> ordered = scenario_.schedule;
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.time < b.time; });
    for (const auto& f : ordered) {
        push(Event{f.time, 0, 0, 0, std::nullopt, f.fault});
    }
}

void Sim::push(Event e) {
    e.seq = next_seq_++;
    queue_.push(std::move(e));
}

void Sim::discard_stale_timers() {
    while (!queue_.empty()) {
        const auto* fire = std::get_if<TimerFire>(&queue_.top().payload);
        if (fire == nullptr || nodes_.at(fire->node).has_timer(fire->timer)) return;
        queue_.pop();
    }
}

bool Sim::idle() {
    discard_stale_timers();
    return queue_.empty();
}

std::optional<Tick> Sim::next_event_time() {
    discard_stale_timers();
    if (queue_.empty()) return std::nullopt;
    return queue_.top().time;
}

NodeSnapshot Sim::snapshot(ProcessId id) const {
    const auto& n = nodes_.at(id);
    return {n.status, n.role, n.election_flag, n.coordinator_var, n.known_coordinator};
}

std::optional<TraceRecord> Sim::step() {
    discard_stale_timers();
    if (queue_.empty()) return std::nullopt;
    Event e = queue_.top();
    queue_.pop();
    now_ = e.time;

    TraceRecord rec;
    rec.time = e.time;
    rec.seq = e.seq;
    rec.depth = e.depth;
    rec.cause = e.cause;

    std::optional<Transition> tr;
    if (const auto* d = std::get_if<Delivery>(&e.payload)) {
        rec.node = d->msg.destination;
        rec.message = d->msg;
        auto& node = nodes_.at(rec.node);
        if (node.status == Status::Crashed) {
            rec.type = RecordType::Drop;
        } else {
            rec.type = RecordType::Delivery;
            tr = on_message(node, d->msg);
        }
    } else if (const auto* t = std::get_if<TimerFire>(&e.payload)) {
        rec.type = RecordType::Timer;
        rec.node = t->node;
        rec.timer = t->timer;
        tr = on_timeout(nodes_.at(rec.node), t->timer);
    } else {
        const auto& f = std::get<FaultEvent>(e.payload);
        rec.type = RecordType::Fault;
        rec.node = f.target;
        rec.fault = f;
        auto& node = nodes_.at(rec.node);
        switch (f.kind) {
            case FaultKind::Crash: tr = on_crash(node); break;
            case FaultKind::Recover: tr = on_recovery(node, now_); break;
            case FaultKind::Detect: tr = on_detect(node); break;
        }
    }

    if (tr) {
        nodes_[rec.node] = std::move(tr->state);
        rec.actions = std::move(tr->actions);
        apply_actions(rec, rec.node);
    }
    rec.after = snapshot(rec.node);
    trace_.push_back(rec);
    return rec;
}

void Sim::apply_actions(const TraceRecord& rec, ProcessId node) {
    for (const auto& a : rec.actions) {
        if (const auto* s = std::get_if<action::Send>(&a)) {
            Message m = s->msg;
            m.sent_at = now_;
            m.deliver_at = now_ + scenario_.latency;
            push(Event{m.deliver_at, m.source.value, 0, rec.depth + 1, rec.seq, Delivery{m}});
        } else if (const auto* t = std::get_if<action::SetTimer>(&a)) {
            push(Event{now_ + t->duration, node.value, 0, rec.depth, rec.seq,
                       TimerFire{node, t->timer}});
        }
        // CancelTimer needs no queue surgery: stale fires are discarded on pop.
    }
}

SimResult Sim::run_to_quiescence(std::optional<Tick> max_ticks) {
    const Tick limit = max_ticks.value_or(default_max_ticks(scenario_));
    SimResult result;
    result.outcome = Outcome::Quiescent;
    while (auto next = next_event_time()) {
        if (*next > limit) {
            result.outcome = Outcome::NonQuiescent;
            break;
        }
        step();
    }
    result.scenario = scenario_;
    result.final_states = nodes_;
    result.trace = trace_;
    result.quiescence_time = trace_.empty() ? 0 : trace_.back().time;

    std::optional<ProcessId> agreed;
    bool consistent = true;
    for (const auto& [id, n] : nodes_) {
        if (n.status != Status::Up) continue;
        if (!n.known_coordinator || (agreed && *agreed != *n.known_coordinator)) {
            consistent = false;
            break;
        }
        agreed = n.known_coordinator;
    }
    if (consistent) result.agreed_coordinator = agreed;

    result.stats = message_stats(result);
    return result;
}

SimResult run_scenario(const Scenario& scenario, std::optional<Tick> max_ticks) {
    Sim sim(scenario);
    return sim.run_to_quiescence(max_ticks);
}

std::vector<SimResult> run_batch(std::span<const Scenario> scenarios, unsigned threads) {
    std::vector<SimResult> results(scenarios.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, std::max<std::size_t>(1, scenarios.size()));

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(scenarios.size());
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < scenarios.size(); i = next++) {
                    try {
                        results[i] = run_scenario(scenarios[i]);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

MessageStats message_stats(const SimResult& result) {
    MessageStats stats;
    const auto ex = result.scenario.ex_coordinator();
    for (const auto& r : result.trace) {
        if (r.type != RecordType::Delivery && r.type != RecordType::Drop) continue;
        const Message& m = *r.message;
        stats.sent[m.kind] += 1;
        if (ex && m.kind != MessageKind::CrossCheck && (m.source == *ex || m.destination == *ex)) {
            stats.ex_coordinator += 1;
        }
    }
    const auto& c = stats.sent;
    stats.headline_total = c.election + c.ok + c.inform + c.coordinator - stats.ex_coordinator;
    stats.total_with_crosscheck = stats.headline_total + c.crosscheck;
    stats.critical_path_depth = critical_path_depth(result);
    return stats;
}

std::optional<std::uint32_t> critical_path_depth(const SimResult& result) {
    if (!result.quiescent()) return std::nullopt;
    std::uint32_t depth = 0;
    for (const auto& r : result.trace) {
        if (r.type == RecordType::Delivery && r.message->kind == MessageKind::Coordinator) {
            depth = std::max(depth, r.depth);
        }
    }
    return depth;
}

Verdict check_agreement(const SimResult& result) {
    Verdict v;
    if (!result.quiescent()) {
        v.reason = "non-quiescent: event queue did not drain before max_ticks";
        return v;
    }
    std::optional<ProcessId> highest;
    for (const auto& [id, n] : result.final_states) {
        if (n.status == Status::Up) highest = id;
    }
    if (!highest) {
        v.reason = "no live nodes";
        return v;
    }
    for (const auto& [id, n] : result.final_states) {
        if (n.status != Status::Up) continue;
        if (n.known_coordinator != highest) {
            v.reason = "node " + to_string(id) + " believes coordinator is " +
                       (n.known_coordinator ? to_string(*n.known_coordinator) : "none") +
                       ", highest live id is " + to_string(*highest);
            return v;
        }
    }
    v.pass = true;
    v.coordinator = highest;
    return v;
}

}  // namespace election
