#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "support.hpp"

using namespace rtsplan;
using namespace rtsplan::test;

TEST_CASE("load_map builds the standard 8x8 start") {
    GameState s = make_state(kBasesWorkers8x8);
    CHECK(s.width() == 8);
    CHECK(s.height() == 8);
    CHECK(s.tick() == 0);
    CHECK(s.resources(0) == 5);
    CHECK(s.resources(1) == 5);
    for (PlayerId p : {0, 1}) {
        int bases = 0, workers = 0;
        for (const auto& [id, u] : s.units()) {
            if (u.owner != p) continue;
            bases += u.kind == UnitKind::Base;
            workers += u.kind == UnitKind::Worker;
        }
        CHECK(bases == 1);
        CHECK(workers == 1);
    }
    CHECK(s.initial_field_total() == 40);
    CHECK(terminal_status(s, 2000) == MatchOutcome::Ongoing);
}

TEST_CASE("empty 2x2 map loads and is an immediate draw") {
    GameState s = make_state("version 1\nsize 2 2\n");
    CHECK(s.units().empty());
    CHECK(terminal_status(s, 2000) == MatchOutcome::Draw);
}

TEST_CASE("map load errors") {
    StatsTable stats = default_stats();
    SECTION("overlapping units") {
        CHECK_THROWS_WITH(
            load_map_text("version 1\nsize 4 4\nunit worker p0 1 1\nunit base p0 1 1\n", stats),
            Catch::Matchers::ContainsSubstring("share cell"));
    }
    SECTION("unknown kind") {
        CHECK_THROWS_WITH(load_map_text("version 1\nsize 4 4\nunit dragon p0 1 1\n", stats),
                          Catch::Matchers::ContainsSubstring("unknown unit kind"));
    }
    SECTION("too small") {
        CHECK_THROWS(load_map_text("version 1\nsize 1 4\n", stats));
    }
    SECTION("missing version") {
        CHECK_THROWS(load_map_text("size 4 4\n", stats));
    }
    SECTION("out of bounds unit") {
        CHECK_THROWS(load_map_text("version 1\nsize 4 4\nunit worker p0 9 1\n", stats));
    }
}

TEST_CASE("legal actions on the economy fixture match the hand enumeration") {
    GameState s = make_state(kEconomy3x3);
    const Unit* worker = unit_of_kind(s, 0, UnitKind::Worker);
    const Unit* base = unit_of_kind(s, 0, UnitKind::Base);
    REQUIRE(worker);
    REQUIRE(base);

    // Worker at (0,0): mineral to the east, free cell to the south.
    auto worker_legal = legal_actions_for(s, 0, *worker);
    std::vector<AtomicAction> expected_worker = {
        AtomicAction::noop(),
        AtomicAction::move(Direction::South),
        AtomicAction::harvest(Direction::East),
    };
    CHECK(worker_legal == expected_worker);

    // Base at (1,1) with 5 resources: produce worker toward each free
    // neighbor; north is the mineral field.
    auto base_legal = legal_actions_for(s, 0, *base);
    std::vector<AtomicAction> expected_base = {
        AtomicAction::noop(),
        AtomicAction::produce(UnitKind::Worker, Direction::East),
        AtomicAction::produce(UnitKind::Worker, Direction::South),
        AtomicAction::produce(UnitKind::Worker, Direction::West),
    };
    CHECK(base_legal == expected_base);

    // p1 worker at (2,2): moves only; the p0 base is diagonal, out of reach.
    const Unit* enemy = unit_of_kind(s, 1, UnitKind::Worker);
    auto enemy_legal = legal_actions_for(s, 1, *enemy);
    std::vector<AtomicAction> expected_enemy = {
        AtomicAction::noop(),
        AtomicAction::move(Direction::North),
        AtomicAction::move(Direction::West),
    };
    CHECK(enemy_legal == expected_enemy);
}

TEST_CASE("worker adjacent to a mineral with a free east cell") {
    GameState s = make_state(
        "version 1\nsize 3 3\nstockpile 0 0\nunit worker p0 0 0\nunit resource neutral 0 1 5\n");
    const Unit* worker = unit_of_kind(s, 0, UnitKind::Worker);
    auto legal = legal_actions_for(s, 0, *worker);
    CHECK(std::count(legal.begin(), legal.end(), AtomicAction::move(Direction::East)) == 1);
    CHECK(std::count(legal.begin(), legal.end(), AtomicAction::harvest(Direction::South)) == 1);
}

TEST_CASE("busy units contribute no legal actions") {
    GameState s = make_state(kEconomy3x3);
    const Unit* worker = unit_of_kind(s, 0, UnitKind::Worker);
    UnitId id = worker->id;
    step_single(s, id, AtomicAction::move(Direction::South));
    CHECK_FALSE(s.find_unit(id)->idle());
    CHECK(legal_actions_for(s, 0, *s.find_unit(id)).empty());
    auto all = legal_actions(s, 0);
    for (const auto& [uid, action] : all) CHECK(uid != id);
}

TEST_CASE("move is durative: busy for move_time ticks, then relocated") {
    GameState s = make_state(kEconomy3x3);
    UnitId id = unit_of_kind(s, 0, UnitKind::Worker)->id;
    int m = s.stats().of(UnitKind::Worker).move_time;
    step_single(s, id, AtomicAction::move(Direction::South));
    for (int t = 1; t < m; ++t) {
        CHECK(s.find_unit(id)->pos == Position{0, 0});
        CHECK_FALSE(s.find_unit(id)->idle());
        step_idle(s, 1);
    }
    CHECK(s.tick() == m);
    CHECK(s.find_unit(id)->pos == Position{0, 1});
    CHECK(s.find_unit(id)->idle());
}

TEST_CASE("simultaneous moves into one cell: lower id wins, other cancelled") {
    GameState s = load_map_text(
        "version 1\nsize 3 3\nunit worker p0 0 0\nunit worker p0 2 0\n", default_stats());
    UnitId low = unit_of_kind(s, 0, UnitKind::Worker)->id;
    UnitId high = low + 1;
    ActionVector v0 = noop_vector(s);
    v0.at(0, 0) = AtomicAction::move(Direction::East);
    v0.at(2, 0) = AtomicAction::move(Direction::West);
    step(s, v0, noop_vector(s));
    step_idle(s, s.stats().of(UnitKind::Worker).move_time - 1);

    CHECK(s.find_unit(low)->pos == Position{1, 0});
    CHECK(s.find_unit(high)->pos == Position{2, 0});
    CHECK(s.find_unit(high)->idle());  // cancelled, not re-queued
}

TEST_CASE("attack kills a 1-hp worker and updates both damage counters") {
    GameState s = load_map_text(
        "version 1\nsize 3 3\nunit worker p0 0 0\nunit worker p1 1 0\n", default_stats());
    UnitId attacker = unit_of_kind(s, 0, UnitKind::Worker)->id;
    UnitId victim = unit_of_kind(s, 1, UnitKind::Worker)->id;
    step_single(s, attacker, AtomicAction::attack_delta(1, 0));
    step_idle(s, s.stats().of(UnitKind::Worker).attack_time - 1);

    CHECK(s.find_unit(victim) == nullptr);
    CHECK(s.counters(0).damage_dealt == 1);
    CHECK(s.counters(1).damage_taken == 1);
    CHECK(terminal_status(s, 2000) == MatchOutcome::WinP0);
}

TEST_CASE("harvest and deposit move resources through the full cycle") {
    GameState s = make_state(kEconomy3x3);
    UnitId worker = unit_of_kind(s, 0, UnitKind::Worker)->id;
    const UnitStats& ws = s.stats().of(UnitKind::Worker);

    step_single(s, worker, AtomicAction::harvest(Direction::East));
    step_idle(s, ws.harvest_time - 1);
    CHECK(s.find_unit(worker)->carried == 1);
    CHECK(unit_of_kind(s, kNeutralOwner, UnitKind::Resource)->resources_remaining == 2);
    CHECK(s.counters(0).resources_harvested == 0);  // not yet deposited

    step_single(s, worker, AtomicAction::move(Direction::South));
    step_idle(s, ws.move_time - 1);
    CHECK(s.find_unit(worker)->pos == Position{0, 1});

    step_single(s, worker, AtomicAction::deposit(Direction::East));
    step_idle(s, ws.return_time - 1);
    CHECK(s.find_unit(worker)->carried == 0);
    CHECK(s.resources(0) == 6);
    CHECK(s.counters(0).resources_harvested == 1);
}

TEST_CASE("produce spends at start, reserves the cell, spawns on completion") {
    GameState s = make_state(kEconomy3x3);
    UnitId base = unit_of_kind(s, 0, UnitKind::Base)->id;
    int cost = s.stats().of(UnitKind::Worker).cost;
    int before = s.resources(0);

    step_single(s, base, AtomicAction::produce(UnitKind::Worker, Direction::East));
    CHECK(s.resources(0) == before - cost);
    CHECK(s.counters(0).resources_spent == cost);
    CHECK(s.reserved({2, 1}));
    CHECK_FALSE(s.cell_free({2, 1}));
    CHECK(s.counters(0).unit_production == 0);

    step_idle(s, s.stats().of(UnitKind::Worker).build_time - 1);
    const Unit* spawned = s.unit_at({2, 1});
    REQUIRE(spawned);
    CHECK(spawned->kind == UnitKind::Worker);
    CHECK(spawned->owner == 0);
    CHECK(s.counters(0).unit_production == 1);
    CHECK_FALSE(s.reserved({2, 1}));
}

TEST_CASE("illegal submissions are dropped with events, never errors") {
    GameState s = make_state(kEconomy3x3);
    UnitId worker = unit_of_kind(s, 0, UnitKind::Worker)->id;
    ActionVector v0 = noop_vector(s);
    v0.at(0, 0) = AtomicAction::move(Direction::North);  // off the board
    v0.at(2, 2) = AtomicAction::move(Direction::North);  // enemy unit, wrong owner
    auto events = step(s, v0, noop_vector(s));
    int drops = 0;
    for (const Event& e : events) drops += e.kind == EventKind::ActionDropped;
    CHECK(drops == 2);
    CHECK(s.find_unit(worker)->idle());
}

TEST_CASE("step rejects mismatched dimensions") {
    GameState s = make_state(kEconomy3x3);
    ActionVector wrong(2, 2);
    CHECK_THROWS_AS(step(s, wrong, wrong), std::invalid_argument);
}

TEST_CASE("terminal status covers win, draw and ongoing") {
    GameState s = load_map_text("version 1\nsize 3 3\nunit base p0 0 0\n", default_stats());
    CHECK(terminal_status(s, 2000) == MatchOutcome::WinP0);

    GameState both = make_state(kEconomy3x3);
    CHECK(terminal_status(both, 2000) == MatchOutcome::Ongoing);
    CHECK(terminal_status(both, 0) == MatchOutcome::Draw);  // tick cap reached
}

TEST_CASE("determinism: identical seeds give identical hash sequences") {
    auto run = [] {
        GameState s = make_state(kBasesWorkers8x8);
        Rng rng(99);
        std::vector<std::uint64_t> hashes;
        for (int t = 0; t < 120; ++t) {
            ActionVector a0 = random_biased(s, 0, rng);
            ActionVector a1 = worker_rush(s, 1);
            step(s, a0, a1);
            hashes.push_back(state_hash(s));
        }
        return hashes;
    };
    CHECK(run() == run());
}

TEST_CASE("engine invariants hold across a random-biased playout") {
    GameState s = make_state(kBasesWorkers8x8);
    Rng rng0(7), rng1(8);
    for (int t = 0; t < 400; ++t) {
        if (terminal_status(s, 400) != MatchOutcome::Ongoing) break;
        ActionVector a0 = random_biased(s, 0, rng0);
        ActionVector a1 = random_biased(s, 1, rng1);
        step(s, a0, a1);
        auto report = check_invariants(s);
        INFO(report.message);
        REQUIRE(report.ok);
    }
}
