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
#include "test_support.hpp"

#include <doctest.h>

using namespace election;
using namespace election::testing;

namespace {

const std::set<ProcessId> kSevenMinus4 = ids({1, 2, 3, 5, 6, 7});

NodeState node(std::uint32_t id, std::uint32_t max, Algorithm a) {
    std::set<ProcessId> peers;
    for (std::uint32_t i = 1; i <= max; ++i) {
        if (i != id) peers.insert(ProcessId{i});
    }
    return init_node(ProcessId{id}, peers, a);
}

TimerId pending(const NodeState& s, TimerKind k) { return s.pending_timers.at(k); }

}  // namespace

TEST_SUITE("init_node") {
    TEST_CASE("classic node starts idle with no timers") {
        auto s = init_node(ProcessId{4}, kSevenMinus4, Algorithm::Classic);
        CHECK(s.status == Status::Up);
        CHECK(s.role == Role::Idle);
        CHECK(s.pending_timers.empty());
        CHECK_FALSE(s.known_coordinator);
    }

    TEST_CASE("modified node starts with flag false and zero coordinator variable") {
        auto s = init_node(ProcessId{4}, kSevenMinus4, Algorithm::Modified);
        CHECK_FALSE(s.election_flag);
        CHECK_FALSE(s.coordinator_var);
        CHECK(s.role == Role::Idle);
    }

    TEST_CASE("configuration errors") {
        CHECK_THROWS_AS(init_node(ProcessId{3}, ids({3, 5}), Algorithm::Classic), ConfigError);
        CHECK_THROWS_AS(init_node(ProcessId{3}, {}, Algorithm::Classic), ConfigError);
        CHECK_THROWS_AS(init_node(ProcessId{0}, ids({1}), Algorithm::Classic), ConfigError);
    }
}

TEST_SUITE("classic") {
    TEST_CASE("detect sends Election to every higher peer and arms AwaitOk") {
        auto [s, acts] = classic_on_detect(node(4, 7, Algorithm::Classic));
        CHECK(destinations(acts, MessageKind::Election) == std::vector<std::uint32_t>{5, 6, 7});
        CHECK(s.role == Role::Initiator);
        CHECK(s.pending_timers.contains(TimerKind::AwaitOk));
        CHECK(find_action<action::SetTimer>(acts)->duration == s.timing.timeout);
    }

    TEST_CASE("highest node detecting wins at once") {
        auto [s, acts] = classic_on_detect(node(7, 7, Algorithm::Classic));
        REQUIRE(find_action<action::DeclareCoordinator>(acts));
        CHECK(find_action<action::DeclareCoordinator>(acts)->id == ProcessId{7});
        CHECK(destinations(acts, MessageKind::Coordinator) == std::vector<std::uint32_t>{1, 2, 3, 4, 5, 6});
        CHECK(s.known_coordinator == ProcessId{7});
        CHECK(s.pending_timers.empty());
    }

    TEST_CASE("lowest of three sends two Elections") {
        auto [s, acts] = classic_on_detect(node(1, 3, Algorithm::Classic));
        CHECK(destinations(acts, MessageKind::Election) == std::vector<std::uint32_t>{2, 3});
        CHECK(sends(acts).size() == 2);
    }

    TEST_CASE("crashed node ignores detect") {
        auto crashed = on_crash(node(4, 7, Algorithm::Classic)).state;
        auto [s, acts] = classic_on_detect(crashed);
        CHECK(sends(acts).empty());
        CHECK(count_actions<action::Note>(acts) == 1);
        CHECK(s == crashed);
    }

    TEST_CASE("Election from lower: Ok back and own election") {
        auto [s, acts] = classic_on_message(node(6, 7, Algorithm::Classic),
                                            msg(MessageKind::Election, 4, 6));
        CHECK(destinations(acts, MessageKind::Ok) == std::vector<std::uint32_t>{4});
        CHECK(destinations(acts, MessageKind::Election) == std::vector<std::uint32_t>{7});
        CHECK(s.role == Role::Initiator);
    }

    TEST_CASE("Coordinator message is adopted silently") {
        auto initiator = classic_on_detect(node(4, 7, Algorithm::Classic)).state;
        auto [s, acts] = classic_on_message(initiator, msg(MessageKind::Coordinator, 6, 4, 1));
        CHECK(s.known_coordinator == ProcessId{6});
        CHECK(s.role == Role::CoordinatorKnown);
        CHECK(sends(acts).empty());
        CHECK(s.pending_timers.empty());
    }

    TEST_CASE("initiator answers a second Election without a second cascade") {
        auto initiator = classic_on_detect(node(4, 7, Algorithm::Classic)).state;
        auto [s, acts] = classic_on_message(initiator, msg(MessageKind::Election, 2, 4));
        CHECK(destinations(acts, MessageKind::Ok) == std::vector<std::uint32_t>{2});
        CHECK(sends(acts).size() == 1);
        CHECK(s.elections_started == 1);
    }

    TEST_CASE("Election older than the last announcement gets Ok only") {
        auto s0 = node(5, 5, Algorithm::Classic);
        s0 = classic_on_detect(s0).state;  // wins, epoch 1
        REQUIRE(s0.epoch == 1);
        auto [s, acts] = classic_on_message(s0, msg(MessageKind::Election, 3, 5, 0));
        CHECK(sends(acts).size() == 1);
        CHECK(destinations(acts, MessageKind::Ok) == std::vector<std::uint32_t>{3});
        // A current-round Election does re-run it.
        auto fresh = classic_on_message(s0, msg(MessageKind::Election, 3, 5, 1));
        CHECK(destinations(fresh.actions, MessageKind::Coordinator).size() == 4);
    }

    TEST_CASE("Ok moves initiator to awaiting takeover") {
        auto initiator = classic_on_detect(node(4, 7, Algorithm::Classic)).state;
        const auto await_ok = pending(initiator, TimerKind::AwaitOk);
        auto [s, acts] = classic_on_message(initiator, msg(MessageKind::Ok, 5, 4));
        CHECK(s.role == Role::AwaitingTakeover);
        CHECK_FALSE(s.has_timer(await_ok));
        CHECK(s.pending_timers.contains(TimerKind::AwaitCoordinator));
        REQUIRE(find_action<action::CancelTimer>(acts));
        CHECK(find_action<action::CancelTimer>(acts)->timer == await_ok);
    }

    TEST_CASE("AwaitOk expiry with no Ok: declare and broadcast") {
        auto s6 = classic_on_message(node(6, 7, Algorithm::Classic), msg(MessageKind::Election, 4, 6)).state;
        auto [s, acts] = classic_on_timeout(s6, pending(s6, TimerKind::AwaitOk));
        CHECK(find_action<action::DeclareCoordinator>(acts)->id == ProcessId{6});
        CHECK(destinations(acts, MessageKind::Coordinator) == std::vector<std::uint32_t>{1, 2, 3, 4, 5, 7});
        CHECK(s.known_coordinator == ProcessId{6});
    }

    TEST_CASE("cancelled AwaitOk is a no-op") {
        auto initiator = classic_on_detect(node(4, 7, Algorithm::Classic)).state;
        const auto await_ok = pending(initiator, TimerKind::AwaitOk);
        auto after_ok = classic_on_message(initiator, msg(MessageKind::Ok, 5, 4)).state;
        auto [s, acts] = classic_on_timeout(after_ok, await_ok);
        CHECK(s == after_ok);
        CHECK(sends(acts).empty());
        CHECK(count_actions<action::Note>(acts) == 1);
    }

    TEST_CASE("AwaitCoordinator expiry re-runs the election") {
        auto waiting = classic_on_message(classic_on_detect(node(4, 7, Algorithm::Classic)).state,
                                          msg(MessageKind::Ok, 5, 4))
                           .state;
        auto [s, acts] = classic_on_timeout(waiting, pending(waiting, TimerKind::AwaitCoordinator));
        CHECK(destinations(acts, MessageKind::Election) == std::vector<std::uint32_t>{5, 6, 7});
        CHECK(s.role == Role::Initiator);
        CHECK(s.elections_started == 2);
    }

    TEST_CASE("announcement from a lower node is bullied back") {
        auto [s, acts] = classic_on_message(node(6, 7, Algorithm::Classic), msg(MessageKind::Coordinator, 3, 6));
        CHECK(s.known_coordinator != ProcessId{3});
        CHECK(destinations(acts, MessageKind::Election) == std::vector<std::uint32_t>{7});
    }
}

TEST_SUITE("modified") {
    TEST_CASE("detect: Elections upward, flag raised, variable zeroed") {
        auto [s, acts] = modified_on_detect(node(4, 7, Algorithm::Modified));
        CHECK(destinations(acts, MessageKind::Election) == std::vector<std::uint32_t>{5, 6, 7});
        CHECK(s.election_flag);
        CHECK_FALSE(s.coordinator_var);
        CHECK(s.role == Role::Initiator);
        CHECK(s.pending_timers.contains(TimerKind::AwaitOk));
        CHECK(s.pending_timers.contains(TimerKind::FlagLease));
        CHECK(s.pending_timers.at(TimerKind::FlagLease).kind == TimerKind::FlagLease);
    }

    TEST_CASE("flag set suppresses initiation") {
        auto s0 = node(4, 7, Algorithm::Modified);
        s0.election_flag = true;
        auto [s, acts] = modified_on_detect(s0);
        CHECK(sends(acts).empty());
        CHECK(count_actions<action::Note>(acts) == 1);
        CHECK(s == s0);
    }

    TEST_CASE("highest node detecting self-declares") {
        auto [s, acts] = modified_on_detect(node(7, 7, Algorithm::Modified));
        CHECK(find_action<action::DeclareCoordinator>(acts)->id == ProcessId{7});
        CHECK(destinations(acts, MessageKind::Coordinator).size() == 6);
        CHECK_FALSE(s.election_flag);
    }

    TEST_CASE("Election receipt: Ok, flag, no cascade") {
        auto [s, acts] = modified_on_message(node(6, 7, Algorithm::Modified), msg(MessageKind::Election, 4, 6));
        CHECK(destinations(acts, MessageKind::Ok) == std::vector<std::uint32_t>{4});
        CHECK(sends(acts).size() == 1);
        CHECK(s.election_flag);
        CHECK(s.elections_started == 0);
        CHECK(s.role == Role::Idle);
    }

    TEST_CASE("coordinator variable keeps the highest responder") {
        auto s = modified_on_detect(node(4, 7, Algorithm::Modified)).state;
        s = modified_on_message(s, msg(MessageKind::Ok, 5, 4)).state;
        CHECK(s.coordinator_var == ProcessId{5});
        s = modified_on_message(s, msg(MessageKind::Ok, 6, 4)).state;
        CHECK(s.coordinator_var == ProcessId{6});
        s = modified_on_message(s, msg(MessageKind::Ok, 5, 4)).state;
        CHECK(s.coordinator_var == ProcessId{6});
    }

    TEST_CASE("InformCoordinator: cross-check every higher peer") {
        auto [s, acts] = modified_on_message(node(6, 7, Algorithm::Modified),
                                             msg(MessageKind::InformCoordinator, 4, 6));
        CHECK(s.role == Role::CandidateCoordinator);
        CHECK(destinations(acts, MessageKind::CrossCheck) == std::vector<std::uint32_t>{7});
        CHECK(s.pending_timers.contains(TimerKind::AwaitCrossCheck));
    }

    TEST_CASE("InformCoordinator at the highest node announces directly") {
        auto [s, acts] = modified_on_message(node(7, 7, Algorithm::Modified),
                                             msg(MessageKind::InformCoordinator, 4, 7));
        CHECK(destinations(acts, MessageKind::Coordinator).size() == 6);
        CHECK(s.known_coordinator == ProcessId{7});
    }

    TEST_CASE("AwaitOk expiry with a responder: inform it") {
        auto s = modified_on_detect(node(4, 7, Algorithm::Modified)).state;
        s = modified_on_message(s, msg(MessageKind::Ok, 5, 4)).state;
        s = modified_on_message(s, msg(MessageKind::Ok, 6, 4)).state;
        auto [after, acts] = modified_on_timeout(s, pending(s, TimerKind::AwaitOk));
        CHECK(sends(acts).size() == 1);
        CHECK(destinations(acts, MessageKind::InformCoordinator) == std::vector<std::uint32_t>{6});
        CHECK(after.pending_timers.contains(TimerKind::AwaitCoordinator));
    }

    TEST_CASE("AwaitOk expiry without responders: self-declare") {
        auto s = modified_on_detect(node(4, 7, Algorithm::Modified)).state;
        auto [after, acts] = modified_on_timeout(s, pending(s, TimerKind::AwaitOk));
        CHECK(find_action<action::DeclareCoordinator>(acts)->id == ProcessId{4});
        CHECK(destinations(acts, MessageKind::Coordinator).size() == 6);
        CHECK_FALSE(after.election_flag);
    }

    TEST_CASE("unanswered cross-check: candidate broadcasts") {
        auto s = modified_on_message(node(6, 7, Algorithm::Modified), msg(MessageKind::InformCoordinator, 4, 6)).state;
        auto [after, acts] = modified_on_timeout(s, pending(s, TimerKind::AwaitCrossCheck));
        CHECK(destinations(acts, MessageKind::Coordinator) == std::vector<std::uint32_t>{1, 2, 3, 4, 5, 7});
        CHECK(after.known_coordinator == ProcessId{6});
        CHECK(after.coordinator_var == ProcessId{6});
    }

    TEST_CASE("answered cross-check: candidate stands down, the higher node takes over") {
        auto cand = modified_on_message(node(6, 7, Algorithm::Modified), msg(MessageKind::InformCoordinator, 4, 6)).state;
        auto [stood_down, acts] = modified_on_message(cand, msg(MessageKind::Ok, 7, 6));
        CHECK(sends(acts).empty());
        CHECK_FALSE(stood_down.pending_timers.contains(TimerKind::AwaitCrossCheck));

        auto [seven, acts7] = modified_on_message(node(7, 7, Algorithm::Modified), msg(MessageKind::CrossCheck, 6, 7));
        CHECK(destinations(acts7, MessageKind::Ok) == std::vector<std::uint32_t>{6});
        CHECK(destinations(acts7, MessageKind::Coordinator).size() == 6);
        CHECK(seven.known_coordinator == ProcessId{7});
    }

    TEST_CASE("Coordinator resets the flag and stores the id") {
        auto s = modified_on_message(node(5, 7, Algorithm::Modified), msg(MessageKind::Election, 4, 5)).state;
        REQUIRE(s.election_flag);
        auto [after, acts] = modified_on_message(s, msg(MessageKind::Coordinator, 6, 5, 1));
        CHECK_FALSE(after.election_flag);
        CHECK(after.known_coordinator == ProcessId{6});
        CHECK(after.coordinator_var == ProcessId{6});
        CHECK(after.pending_timers.empty());
        REQUIRE(find_action<action::SetFlag>(acts));
        CHECK_FALSE(find_action<action::SetFlag>(acts)->value);
    }

    TEST_CASE("flag lease expiry clears a stuck flag") {
        auto s = modified_on_message(node(5, 7, Algorithm::Modified), msg(MessageKind::Election, 4, 5)).state;
        auto [after, acts] = modified_on_timeout(s, pending(s, TimerKind::FlagLease));
        CHECK_FALSE(after.election_flag);
        // Election can be initiated again.
        CHECK(destinations(modified_on_detect(after).actions, MessageKind::Election).size() == 2);
    }

    TEST_CASE("stale timer is a noted no-op") {
        auto s = modified_on_detect(node(4, 7, Algorithm::Modified)).state;
        TimerId stale{TimerKind::AwaitOk, 999};
        auto [after, acts] = modified_on_timeout(s, stale);
        CHECK(after == s);
        CHECK(count_actions<action::Note>(acts) == 1);
    }
}

TEST_SUITE("recovery") {
    TEST_CASE("higher node recovering runs the election and wins") {
        for (auto alg : {Algorithm::Classic, Algorithm::Modified}) {
            auto s = node(7, 7, alg);
            s.known_coordinator = ProcessId{6};
            s = on_crash(s).state;
            auto [after, acts] = on_recovery(s, 10);
            CHECK(after.status == Status::Up);
            CHECK(find_action<action::DeclareCoordinator>(acts)->id == ProcessId{7});
            CHECK(destinations(acts, MessageKind::Coordinator).size() == 6);
        }
    }

    TEST_CASE("lower node recovering stays quiet") {
        auto s = node(2, 7, Algorithm::Modified);
        s.known_coordinator = ProcessId{6};
        s = on_crash(s).state;
        auto [after, acts] = on_recovery(s, 10);
        CHECK(after.status == Status::Up);
        CHECK(after.role == Role::Idle);
        CHECK(acts.empty());
        CHECK(after.known_coordinator == ProcessId{6});
    }

    TEST_CASE("recovering a node that is up changes nothing") {
        auto s = node(2, 7, Algorithm::Classic);
        auto [after, acts] = on_recovery(s, 3);
        CHECK(after == s);
        CHECK(count_actions<action::Note>(acts) == 1);
    }

    TEST_CASE("recovering ex-coordinator does not trust its own stale title") {
        auto s = node(7, 7, Algorithm::Classic);
        s.known_coordinator = ProcessId{7};
        s = on_crash(s).state;
        auto [after, acts] = on_recovery(s, 4);
        CHECK(find_action<action::DeclareCoordinator>(acts));
    }

    TEST_CASE("crash clears timers") {
        auto s = classic_on_detect(node(4, 7, Algorithm::Classic)).state;
        auto crashed = on_crash(s).state;
        CHECK(crashed.pending_timers.empty());
        CHECK(crashed.status == Status::Crashed);
        CHECK(sends(classic_on_message(crashed, msg(MessageKind::Election, 1, 4)).actions).empty());
    }
}

TEST_CASE("transitions are pure") {
    std::vector<NodeState> states{node(4, 7, Algorithm::Classic), node(4, 7, Algorithm::Modified)};
    states.push_back(on_detect(states[0]).state);
    states.push_back(on_detect(states[1]).state);
    const std::vector<Message> inputs{msg(MessageKind::Election, 2, 4), msg(MessageKind::Ok, 6, 4),
                                      msg(MessageKind::Coordinator, 6, 4, 1),
                                      msg(MessageKind::InformCoordinator, 1, 4),
                                      msg(MessageKind::CrossCheck, 3, 4)};
    for (const auto& s : states) {
        auto a = on_detect(s);
        auto b = on_detect(s);
        CHECK(a.state == b.state);
        CHECK(a.actions == b.actions);
        for (const auto& m : inputs) {
            auto x = on_message(s, m);
            auto y = on_message(s, m);
            CHECK(x.state == y.state);
            CHECK(x.actions == y.actions);
        }
        for (const auto& [kind, t] : s.pending_timers) {
            CHECK(on_timeout(s, t).state == on_timeout(s, t).state);
            CHECK(on_timeout(s, t).actions == on_timeout(s, t).actions);
        }
    }
}
