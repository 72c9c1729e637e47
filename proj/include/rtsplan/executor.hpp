#pragma once

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rtsplan/skills.hpp"

namespace rtsplan {

// An ordered skill plan for one side. Entry order is priority: earlier
// entries claim units first. The claim ledger is rebuilt from the live state
// every tick, so executed actions never depend on stale proposals.
struct SkillPlan {
    PlayerId player = 0;
    long created_tick = 0;
    std::vector<PlanEntry> entries;

    // Ledger from the most recent active_set evaluation, for traces.
    std::vector<std::pair<UnitId, size_t>> last_claims;

    bool operator==(const SkillPlan& o) const {
        return player == o.player && entries == o.entries;
    }
};

// Evaluates applicability in plan order, re-securing each entry's binding
// greedily. Returns the indices of active entries. Inactive entries keep
// their sticky bindings but contribute nothing to the ledger, so later
// entries may claim those units this tick.
inline std::vector<size_t> active_set(const SkillRegistry& registry, SkillPlan& plan,
                                      const GameState& s) {
    std::vector<size_t> active;
    std::set<UnitId> claimed;
    plan.last_claims.clear();
    for (size_t i = 0; i < plan.entries.size(); ++i) {
        PlanEntry& entry = plan.entries[i];
        auto binding = resolve_applicability(registry, entry, s, plan.player, claimed);
        if (!binding) continue;
        entry.binding = *binding;
        for (UnitId id : *binding) {
            claimed.insert(id);
            plan.last_claims.emplace_back(id, i);
        }
        active.push_back(i);
    }
    return active;
}

// Compiles the plan into this tick's action vector: every active entry
// contributes its proposals, at most one action per unit (the ledger keeps
// bindings disjoint), NOOP everywhere else.
inline ActionVector plan_tick(const SkillRegistry& registry, SkillPlan& plan, const GameState& s) {
    ActionVector v(s.width(), s.height());
    for (size_t i : active_set(registry, plan, s)) {
        PlanEntry& entry = plan.entries[i];
        for (const auto& [unit_id, action] : policy_step(registry, entry, s, plan.player)) {
            const Unit* u = s.find_unit(unit_id);
            if (!u) continue;
            AtomicAction& cell = v.at(u->pos.x, u->pos.y);
            if (cell.type != ActionType::Noop) continue;
            cell = action;
        }
    }
    return v;
}

// Removes entries whose termination predicate holds and refreshes per-entry
// runtime bookkeeping. Runs after each environment step.
inline void prune(const SkillRegistry& registry, SkillPlan& plan, const GameState& s) {
    for (PlanEntry& entry : plan.entries) update_entry_runtime(entry, s, plan.player);
    std::vector<PlanEntry> kept;
    kept.reserve(plan.entries.size());
    for (PlanEntry& entry : plan.entries) {
        if (!termination(registry, entry, s, plan.player)) kept.push_back(std::move(entry));
    }
    plan.entries = std::move(kept);
}

// Marker-delimited text form; parse_plan() round-trips it.
inline std::string serialize_plan(const SkillPlan& plan) {
    std::ostringstream out;
    out << "START OF SKILL_PLAN\n";
    for (const PlanEntry& e : plan.entries) {
        out << "[" << e.name << "](";
        for (size_t i = 0; i < e.params.size(); ++i) {
            if (i) out << ", ";
            out << param_str(e.params[i]);
        }
        out << ")\n";
    }
    out << "END OF SKILL_PLAN\n";
    return out.str();
}

}  // namespace rtsplan
