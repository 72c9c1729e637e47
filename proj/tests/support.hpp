#pragma once

// Shared fixtures and oracles for the test suites.

#include <set>
#include <string>
#include <vector>

#include "rtsplan/rtsplan.hpp"

namespace rtsplan::test {

inline const char* kBasesWorkers8x8 = R"(version 1
size 8 8
stockpile 0 5
stockpile 1 5
unit resource neutral 0 0 20
unit resource neutral 7 7 20
unit base p0 2 1
unit worker p0 1 1
unit base p1 5 6
unit worker p1 6 6
)";

// 3x3 economy fixture: p0 worker (0,0), mineral (1,0) with 3 left, p0 base
// (1,1), p1 worker (2,2).
inline const char* kEconomy3x3 = R"(version 1
size 3 3
stockpile 0 5
stockpile 1 0
unit worker p0 0 0
unit resource neutral 1 0 3
unit base p0 1 1
unit worker p1 2 2
)";

inline GameState make_state(const std::string& text) {
    return load_map_text(text, default_stats());
}

inline ActionVector noop_vector(const GameState& s) {
    return ActionVector(s.width(), s.height());
}

// Steps the world with a single commanded unit, everyone else idle.
inline std::vector<Event> step_single(GameState& s, UnitId id, const AtomicAction& a) {
    ActionVector v0 = noop_vector(s);
    ActionVector v1 = noop_vector(s);
    const Unit* u = s.find_unit(id);
    if (!u) throw std::logic_error("step_single: unknown unit");
    (u->owner == 0 ? v0 : v1).at(u->pos.x, u->pos.y) = a;
    return step(s, v0, v1);
}

inline void step_idle(GameState& s, int ticks) {
    for (int i = 0; i < ticks; ++i) step(s, noop_vector(s), noop_vector(s));
}

inline const Unit* unit_of_kind(const GameState& s, PlayerId player, UnitKind kind) {
    for (const auto& [id, u] : s.units())
        if (u.owner == player && u.kind == kind) return &u;
    return nullptr;
}

// Uniformly random valid action vector: in-range parameters, zeroed unused
// fields. Validity here means encodable, not game-legal.
inline ActionVector random_action_vector(Rng& rng, int w, int h) {
    ActionVector v(w, h);
    for (auto& cell : v.cells) {
        switch (rng.below(6)) {
            case 0: cell = AtomicAction::noop(); break;
            case 1: cell = AtomicAction::move(static_cast<Direction>(rng.below(4))); break;
            case 2: cell = AtomicAction::harvest(static_cast<Direction>(rng.below(4))); break;
            case 3: cell = AtomicAction::deposit(static_cast<Direction>(rng.below(4))); break;
            case 4:
                cell = AtomicAction::produce(static_cast<UnitKind>(rng.below(7)),
                                             static_cast<Direction>(rng.below(4)));
                break;
            case 5: cell = AtomicAction::attack(static_cast<int>(rng.below(kAttackCells))); break;
        }
    }
    return v;
}

struct InvariantReport {
    bool ok = true;
    std::string message;
};

// Engine-wide invariants checked after every step of soak tests: occupancy,
// hp bounds, stockpile identity, global resource conservation, counter
// symmetry.
inline InvariantReport check_invariants(const GameState& s) {
    InvariantReport report;
    auto fail = [&](const std::string& msg) {
        report.ok = false;
        report.message = msg + " at tick " + std::to_string(s.tick());
    };
    std::set<std::pair<int, int>> seen;
    for (const auto& [id, u] : s.units()) {
        if (!seen.insert({u.pos.x, u.pos.y}).second) {
            fail("two units share " + pos_str(u.pos));
            return report;
        }
        if (s.unit_id_at(u.pos) != id) {
            fail("occupancy map inconsistent for unit " + std::to_string(id));
            return report;
        }
        const UnitStats& stats = s.stats().of(u.kind);
        if (u.hp <= 0 || u.hp > stats.max_hp) {
            fail("hp out of bounds for unit " + std::to_string(id));
            return report;
        }
        if (u.carried < 0 || u.resources_remaining < 0) {
            fail("negative resources on unit " + std::to_string(id));
            return report;
        }
    }
    std::int64_t fields = 0, carried = 0;
    for (const auto& [id, u] : s.units()) {
        fields += u.resources_remaining;
        carried += u.carried;
    }
    std::int64_t deposited = 0, lost = 0;
    for (PlayerId p : {0, 1}) {
        const MatchCounters& c = s.counters(p);
        deposited += c.resources_harvested;
        lost += s.carried_lost(p);
        if (s.resources(p) !=
            s.initial_resources(p) + c.resources_harvested - c.resources_spent) {
            fail("stockpile identity broken for player " + std::to_string(p));
            return report;
        }
        if (s.resources(p) < 0) {
            fail("negative stockpile for player " + std::to_string(p));
            return report;
        }
    }
    if (fields + carried + deposited + lost != s.initial_field_total()) {
        fail("field resources not conserved");
        return report;
    }
    if (s.counters(0).damage_dealt != s.counters(1).damage_taken ||
        s.counters(1).damage_dealt != s.counters(0).damage_taken) {
        fail("damage counters asymmetric");
        return report;
    }
    return report;
}

}  // namespace rtsplan::test
