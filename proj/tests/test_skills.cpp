#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace rtsplan;
using namespace rtsplan::test;

namespace {

PlanEntry entry_of(SkillId id, ParamList params) {
    const SkillDef& def = default_registry().by_id(id);
    PlanEntry e;
    e.skill = id;
    e.name = def.name;
    e.params = std::move(params);
    return e;
}

// Drives a one-entry plan against a passive opponent for up to `ticks`.
void drive(GameState& s, SkillPlan& plan, int ticks) {
    const SkillRegistry& reg = default_registry();
    for (int t = 0; t < ticks && !plan.entries.empty(); ++t) {
        ActionVector mine = plan_tick(reg, plan, s);
        ActionVector theirs(s.width(), s.height());
        if (plan.player == 0)
            step(s, mine, theirs);
        else
            step(s, theirs, mine);
        prune(reg, plan, s);
    }
}

}  // namespace

TEST_CASE("applicability of the five skills") {
    const SkillRegistry& reg = default_registry();
    GameState s = make_state(kBasesWorkers8x8);

    SECTION("harvest at a real field on the initial map") {
        PlanEntry e = entry_of(SkillId::HarvestMineral, {Position{0, 0}});
        CHECK(applicability(reg, e, s, 0));
    }
    SECTION("harvest at an empty cell is inapplicable") {
        PlanEntry e = entry_of(SkillId::HarvestMineral, {Position{4, 4}});
        CHECK_FALSE(applicability(reg, e, s, 0));
    }
    SECTION("build needs funds") {
        PlanEntry e = entry_of(SkillId::BuildBuilding, {UnitKind::Barrack, Position{4, 4}});
        CHECK(s.resources(0) >= s.stats().of(UnitKind::Barrack).cost);
        CHECK(applicability(reg, e, s, 0));
        GameState broke = make_state(kBasesWorkers8x8);
        broke.set_resources(0, s.stats().of(UnitKind::Barrack).cost - 1);
        CHECK_FALSE(applicability(reg, e, broke, 0));
    }
    SECTION("attack needs an owned unit of the commanded type") {
        PlanEntry e = entry_of(SkillId::AttackEnemy, {UnitKind::Light, UnitKind::Base});
        CHECK_FALSE(applicability(reg, e, s, 0));  // no light units yet
        PlanEntry w = entry_of(SkillId::AttackEnemy, {UnitKind::Worker, UnitKind::Base});
        CHECK(applicability(reg, w, s, 0));
    }
    SECTION("produce needs a free neighbor in the requested direction") {
        PlanEntry e = entry_of(SkillId::ProduceUnit, {UnitKind::Worker, Direction::North});
        CHECK(applicability(reg, e, s, 0));  // (2,0) is free
        PlanEntry blocked = entry_of(SkillId::ProduceUnit, {UnitKind::Worker, Direction::West});
        CHECK_FALSE(applicability(reg, blocked, s, 0));  // the starting worker blocks (1,1)
    }
    SECTION("deploy needs a reachable destination") {
        PlanEntry e = entry_of(SkillId::DeployUnit, {UnitKind::Worker, Position{4, 4}});
        CHECK(applicability(reg, e, s, 0));
        PlanEntry occupied = entry_of(SkillId::DeployUnit, {UnitKind::Worker, Position{2, 1}});
        CHECK_FALSE(applicability(reg, occupied, s, 0));  // own base sits there
    }
    SECTION("unknown parameters out of domain") {
        PlanEntry e = entry_of(SkillId::HarvestMineral, {Position{99, 99}});
        CHECK_FALSE(applicability(reg, e, s, 0));
    }
}

TEST_CASE("policy: harvest proposes the pickup when adjacent and empty-handed") {
    const SkillRegistry& reg = default_registry();
    GameState s = make_state(kEconomy3x3);
    PlanEntry e = entry_of(SkillId::HarvestMineral, {Position{1, 0}});
    auto binding = resolve_applicability(reg, e, s, 0, {});
    REQUIRE(binding);
    e.binding = *binding;
    auto proposals = policy_step(reg, e, s, 0);
    REQUIRE(proposals.size() == 1);
    CHECK(proposals[0].second == AtomicAction::harvest(Direction::East));
}

TEST_CASE("policy: produce emits one produce proposal") {
    const SkillRegistry& reg = default_registry();
    GameState s = make_state(kEconomy3x3);
    PlanEntry e = entry_of(SkillId::ProduceUnit, {UnitKind::Worker, Direction::East});
    auto binding = resolve_applicability(reg, e, s, 0, {});
    REQUIRE(binding);
    e.binding = *binding;
    auto proposals = policy_step(reg, e, s, 0);
    REQUIRE(proposals.size() == 1);
    CHECK(proposals[0].second == AtomicAction::produce(UnitKind::Worker, Direction::East));
}

TEST_CASE("policy: deploy at its destination proposes nothing and terminates") {
    const SkillRegistry& reg = default_registry();
    GameState s = make_state(kEconomy3x3);
    const Unit* worker = unit_of_kind(s, 0, UnitKind::Worker);
    PlanEntry e = entry_of(SkillId::DeployUnit, {UnitKind::Worker, worker->pos});
    e.binding = {worker->id};
    CHECK(policy_step(reg, e, s, 0).empty());
    CHECK(termination(reg, e, s, 0));
}

TEST_CASE("harvest loop runs the field to exhaustion, then terminates") {
    const SkillRegistry& reg = default_registry();
    GameState s = make_state(kEconomy3x3);
    SkillPlan plan;
    plan.player = 0;
    plan.entries = {entry_of(SkillId::HarvestMineral, {Position{1, 0}})};

    drive(s, plan, 400);
    CHECK(plan.entries.empty());  // field exhausted fires the termination
    CHECK(s.counters(0).resources_harvested == 3);
    CHECK(s.resources(0) == 8);
    CHECK(unit_of_kind(s, kNeutralOwner, UnitKind::Resource) == nullptr);
}

TEST_CASE("build raises the barrack and terminates; produce is one-shot") {
    // Stockpile 6 funds the barrack (5) plus one worker (1).
    GameState s = load_map_text(R"(version 1
size 8 8
stockpile 0 6
unit resource neutral 0 0 20
unit base p0 2 1
unit worker p0 1 1
unit worker p1 6 6
)",
                                default_stats());
    SkillPlan plan;
    plan.player = 0;
    plan.entries = {entry_of(SkillId::BuildBuilding, {UnitKind::Barrack, Position{4, 1}}),
                    entry_of(SkillId::ProduceUnit, {UnitKind::Worker, Direction::North})};

    drive(s, plan, 600);
    CHECK(plan.entries.empty());
    const Unit* barrack = s.unit_at({4, 1});
    REQUIRE(barrack);
    CHECK(barrack->kind == UnitKind::Barrack);
    CHECK(barrack->owner == 0);
    CHECK(s.counters(0).unit_production == 2);  // barrack + one worker, exactly once each
    CHECK(s.resources(0) == 0);
}

TEST_CASE("termination table") {
    const SkillRegistry& reg = default_registry();
    GameState s = make_state(kBasesWorkers8x8);
    SECTION("attack not terminated while the enemy base stands") {
        PlanEntry e = entry_of(SkillId::AttackEnemy, {UnitKind::Worker, UnitKind::Base});
        CHECK_FALSE(termination(reg, e, s, 0));
    }
    SECTION("build terminated once the building stands") {
        PlanEntry e = entry_of(SkillId::BuildBuilding, {UnitKind::Base, Position{2, 1}});
        CHECK(termination(reg, e, s, 0));  // a base already stands there
    }
    SECTION("harvest terminated without workers") {
        GameState no_workers = load_map_text(
            "version 1\nsize 3 3\nunit base p0 1 1\nunit resource neutral 0 0 5\n",
            default_stats());
        PlanEntry e = entry_of(SkillId::HarvestMineral, {Position{0, 0}});
        CHECK(termination(reg, e, no_workers, 0));
    }
}

TEST_CASE("beta-monotone: build stays terminated while the goal object persists") {
    const SkillRegistry& reg = default_registry();
    GameState s = make_state(kBasesWorkers8x8);
    PlanEntry e = entry_of(SkillId::BuildBuilding, {UnitKind::Base, Position{2, 1}});
    for (int t = 0; t < 5; ++t) {
        CHECK(termination(reg, e, s, 0));
        step_idle(s, 1);
    }
}

TEST_CASE("soundness: every proposal is in legal_actions") {
    const SkillRegistry& reg = default_registry();
    GameState s = make_state(kBasesWorkers8x8);
    SkillPlan plan;
    plan.player = 0;
    plan.entries = {entry_of(SkillId::HarvestMineral, {Position{0, 0}}),
                    entry_of(SkillId::ProduceUnit, {UnitKind::Worker, Direction::North}),
                    entry_of(SkillId::AttackEnemy, {UnitKind::Worker, UnitKind::Worker})};
    for (int t = 0; t < 300; ++t) {
        for (size_t i : active_set(reg, plan, s)) {
            for (const auto& [unit, action] : policy_step(reg, plan.entries[i], s, 0)) {
                const Unit* u = s.find_unit(unit);
                REQUIRE(u);
                INFO("tick " << s.tick() << " unit " << unit << " " << action_str(action));
                CHECK(is_legal_action(s, 0, *u, action));
            }
        }
        ActionVector mine = plan_tick(reg, plan, s);
        step(s, mine, noop_vector(s));
        prune(reg, plan, s);
        if (plan.entries.empty()) break;
    }
}

TEST_CASE("claim exclusivity: one unit never serves two entries") {
    const SkillRegistry& reg = default_registry();
    GameState s = make_state(kEconomy3x3);
    SkillPlan plan;
    plan.player = 0;
    plan.entries = {entry_of(SkillId::HarvestMineral, {Position{1, 0}}),
                    entry_of(SkillId::HarvestMineral, {Position{1, 0}})};
    auto active = active_set(reg, plan, s);
    CHECK(active == std::vector<size_t>{0});  // single worker: second entry starved

    std::set<UnitId> seen;
    for (const auto& [unit, idx] : plan.last_claims) CHECK(seen.insert(unit).second);
}

TEST_CASE("skill descriptions parse back through the plan grammar") {
    const SkillRegistry& reg = default_registry();
    std::string block = describe_skills(reg);
    CHECK(block.find("- [Harvest Mineral] (x, y): Assign one worker to harvest resources") !=
          std::string::npos);
    CHECK(block.find("- [Produce Unit] (unit_type, direction):") != std::string::npos);

    std::istringstream lines(block);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        auto lb = line.find('[');
        auto rb = line.find(']');
        REQUIRE(lb != std::string::npos);
        REQUIRE(rb != std::string::npos);
        std::string name = line.substr(lb + 1, rb - lb - 1);
        CHECK(reg.find(name) != nullptr);
        ++count;
    }
    CHECK(count == 5);
}
