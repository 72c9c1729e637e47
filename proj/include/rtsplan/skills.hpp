#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "rtsplan/engine.hpp"
#include "rtsplan/path.hpp"

namespace rtsplan {

enum class SkillId { DeployUnit, HarvestMineral, BuildBuilding, ProduceUnit, AttackEnemy };

// Parameter domains a skill invocation is validated against.
enum class ParamKind {
    MobileUnitType,  // worker | light | heavy | ranged
    BuildingType,    // base | barrack
    MoveDirection,   // north | east | south | west
    Location,        // in-bounds (x, y)
    EnemyType,       // worker | light | heavy | ranged | base | barrack
};

using ParamValue = std::variant<UnitKind, Direction, Position>;
using ParamList = std::vector<ParamValue>;

inline bool param_in_domain(ParamKind kind, const ParamValue& v, const GameState& s) {
    switch (kind) {
        case ParamKind::MobileUnitType: {
            const UnitKind* k = std::get_if<UnitKind>(&v);
            return k && (*k == UnitKind::Worker || *k == UnitKind::Light ||
                         *k == UnitKind::Heavy || *k == UnitKind::Ranged);
        }
        case ParamKind::BuildingType: {
            const UnitKind* k = std::get_if<UnitKind>(&v);
            return k && (*k == UnitKind::Base || *k == UnitKind::Barrack);
        }
        case ParamKind::EnemyType: {
            const UnitKind* k = std::get_if<UnitKind>(&v);
            return k && *k != UnitKind::Resource;
        }
        case ParamKind::MoveDirection: return std::holds_alternative<Direction>(v);
        case ParamKind::Location: {
            const Position* p = std::get_if<Position>(&v);
            return p && s.in_bounds(*p);
        }
    }
    return false;
}

inline std::string param_str(const ParamValue& v) {
    if (const UnitKind* k = std::get_if<UnitKind>(&v)) return std::string(kind_name(*k));
    if (const Direction* d = std::get_if<Direction>(&v)) return std::string(dir_name(*d));
    return pos_str(std::get<Position>(v));
}

struct SkillDef {
    SkillId id;
    std::string name;  // canonical display name, e.g. "Harvest Mineral"
    std::vector<ParamKind> params;
    std::string param_label;  // how the parameters are shown in the prompt
    std::string description;
};

// One planned invocation of a skill. `binding` is the sticky set of unit ids
// the entry controls; the executor re-secures it every tick. The produce_*
// fields track the one-shot lifecycle of Produce Unit entries.
struct PlanEntry {
    SkillId skill;
    std::string name;
    ParamList params;
    std::vector<UnitId> binding;
    long produce_pending_tick = -1;  // tick the produce proposal was emitted
    bool produce_seen_busy = false;  // producer observed running our produce
    bool produce_done = false;

    bool operator==(const PlanEntry& o) const {
        return skill == o.skill && params == o.params;
    }
};

class SkillRegistry {
public:
    SkillRegistry(std::initializer_list<SkillDef> defs) : defs_(defs) {}

    const std::vector<SkillDef>& all() const { return defs_; }

    // Lookup is case-insensitive with inner whitespace collapsed.
    const SkillDef* find(std::string_view name) const {
        std::string key = normalize(name);
        for (const SkillDef& d : defs_) {
            if (normalize(d.name) == key) return &d;
        }
        return nullptr;
    }

    const SkillDef& by_id(SkillId id) const {
        for (const SkillDef& d : defs_) {
            if (d.id == id) return d;
        }
        throw std::logic_error("skill registry: unknown id");
    }

    static std::string normalize(std::string_view name) {
        std::string out;
        bool pending_space = false;
        for (char c : name) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                pending_space = !out.empty();
                continue;
            }
            if (pending_space) {
                out.push_back(' ');
                pending_space = false;
            }
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
        return out;
    }

private:
    std::vector<SkillDef> defs_;
};

inline const SkillRegistry& default_registry() {
    static const SkillRegistry registry{
        {SkillId::DeployUnit,
         "Deploy Unit",
         {ParamKind::MobileUnitType, ParamKind::Location},
         "unit_type, (x, y)",
         "Move one unit of the specified type (\"worker\", \"light\", \"heavy\", or \"ranged\") "
         "to the location (x, y)."},
        {SkillId::HarvestMineral,
         "Harvest Mineral",
         {ParamKind::Location},
         "x, y",
         "Assign one worker to harvest resources from the mineral field located at (x, y) and "
         "return them to your base."},
        {SkillId::BuildBuilding,
         "Build Building",
         {ParamKind::BuildingType, ParamKind::Location},
         "building_type, (x, y)",
         "Send a worker to build a building of the specified type (\"base\" or \"barrack\") at "
         "the location (x, y)."},
        {SkillId::ProduceUnit,
         "Produce Unit",
         {ParamKind::MobileUnitType, ParamKind::MoveDirection},
         "unit_type, direction",
         "Produce a unit of the specified type (\"worker\", \"light\", \"heavy\", or \"ranged\") "
         "in the specified direction (\"north\", \"east\", \"south\", or \"west\")."},
        {SkillId::AttackEnemy,
         "Attack Enemy",
         {ParamKind::MobileUnitType, ParamKind::EnemyType},
         "unit_type, enemy_type",
         "Command all your units of the specified type to attack enemy units of the specified "
         "type (\"worker\", \"light\", \"heavy\", \"ranged\", \"base\", or \"barrack\")."},
    };
    return registry;
}

// The prompt-facing skill list, one bracketed line per skill. Each name round-
// trips through the plan parser's grammar.
inline std::string describe_skills(const SkillRegistry& registry) {
    std::ostringstream out;
    for (const SkillDef& d : registry.all()) {
        out << "- [" << d.name << "] (" << d.param_label << "): " << d.description << "\n";
    }
    return out.str();
}

namespace skills_detail {

inline const Unit* live_field_at(const GameState& s, Position p) {
    const Unit* u = s.unit_at(p);
    return u && u->kind == UnitKind::Resource && u->resources_remaining > 0 ? u : nullptr;
}

inline bool has_owned_kind(const GameState& s, PlayerId player, UnitKind kind) {
    for (const auto& [id, u] : s.units())
        if (u.owner == player && u.kind == kind) return true;
    return false;
}

inline bool enemy_kind_exists(const GameState& s, PlayerId player, UnitKind kind) {
    for (const auto& [id, u] : s.units())
        if (u.owner == opponent_of(player) && u.kind == kind) return true;
    return false;
}

// Nearest (Manhattan, ties to the lowest id) owned unit of `kind` not in `excluded`.
inline std::optional<UnitId> nearest_owned(const GameState& s, PlayerId player, UnitKind kind,
                                           Position target, const std::set<UnitId>& excluded) {
    std::optional<UnitId> best;
    int best_dist = 0;
    for (const auto& [id, u] : s.units()) {
        if (u.owner != player || u.kind != kind || excluded.count(id)) continue;
        int dist = manhattan(u.pos, target);
        if (!best || dist < best_dist) {
            best = id;
            best_dist = dist;
        }
    }
    return best;
}

inline const Unit* valid_sticky(const GameState& s, PlayerId player, UnitKind kind,
                                const std::vector<UnitId>& sticky,
                                const std::set<UnitId>& excluded) {
    if (sticky.empty()) return nullptr;
    const Unit* u = s.find_unit(sticky.front());
    if (u && u->owner == player && u->kind == kind && !excluded.count(u->id)) return u;
    return nullptr;
}

// Nearest enemy of `kind` to `from` (Manhattan, ties to the lowest id).
inline const Unit* nearest_enemy(const GameState& s, PlayerId player, UnitKind kind,
                                 Position from) {
    const Unit* best = nullptr;
    int best_dist = 0;
    for (const auto& [id, u] : s.units()) {
        if (u.owner != opponent_of(player) || u.kind != kind) continue;
        int dist = manhattan(u.pos, from);
        if (!best || dist < best_dist) {
            best = &u;
            best_dist = dist;
        }
    }
    return best;
}

inline std::vector<Position> base_adjacent_goals(const GameState& s, PlayerId player,
                                                 const PathFinder& paths) {
    std::vector<Position> goals;
    for (const auto& [id, u] : s.units()) {
        if (u.owner != player || u.kind != UnitKind::Base) continue;
        for (Position p : paths.free_neighbors(u.pos)) goals.push_back(p);
    }
    return goals;
}

// First direction whose neighbor satisfies `pred`, in north/east/south/west order.
template <typename Pred>
inline std::optional<Direction> adjacent_dir(const GameState& s, Position from, Pred pred) {
    for (Direction d : all_directions) {
        Position p = step_towards(from, d);
        if (s.in_bounds(p) && pred(p)) return d;
    }
    return std::nullopt;
}

}  // namespace skills_detail

// Secures the units an entry needs, preferring its sticky binding and then
// claiming the nearest eligible unclaimed unit(s). Returns nullopt when the
// skill is not applicable this tick; on success the returned ids are exactly
// the entry's binding. `claimed` holds units taken by higher-priority entries.
inline std::optional<std::vector<UnitId>> resolve_applicability(
    const SkillRegistry& registry, const PlanEntry& entry, const GameState& s, PlayerId player,
    const std::set<UnitId>& claimed) {
    using namespace skills_detail;
    const SkillDef& def = registry.by_id(entry.skill);
    for (size_t i = 0; i < def.params.size(); ++i) {
        if (i >= entry.params.size() || !param_in_domain(def.params[i], entry.params[i], s))
            return std::nullopt;
    }
    PathFinder paths(s);
    switch (entry.skill) {
        case SkillId::HarvestMineral: {
            Position loc = std::get<Position>(entry.params[0]);
            if (!live_field_at(s, loc)) return std::nullopt;
            if (!has_owned_kind(s, player, UnitKind::Base)) return std::nullopt;
            if (const Unit* sticky = valid_sticky(s, player, UnitKind::Worker, entry.binding, claimed))
                return std::vector<UnitId>{sticky->id};
            auto worker = nearest_owned(s, player, UnitKind::Worker, loc, claimed);
            if (!worker) return std::nullopt;
            return std::vector<UnitId>{*worker};
        }
        case SkillId::BuildBuilding: {
            UnitKind type = std::get<UnitKind>(entry.params[0]);
            Position loc = std::get<Position>(entry.params[1]);
            if (s.resources(player) < s.stats().of(type).cost) return std::nullopt;
            if (!s.cell_free(loc)) return std::nullopt;
            if (const Unit* sticky = valid_sticky(s, player, UnitKind::Worker, entry.binding, claimed))
                return std::vector<UnitId>{sticky->id};
            auto worker = nearest_owned(s, player, UnitKind::Worker, loc, claimed);
            if (!worker) return std::nullopt;
            return std::vector<UnitId>{*worker};
        }
        case SkillId::ProduceUnit: {
            UnitKind type = std::get<UnitKind>(entry.params[0]);
            Direction dir = std::get<Direction>(entry.params[1]);
            if (s.resources(player) < s.stats().of(type).cost) return std::nullopt;
            UnitKind producer_kind = s.stats().of(type).producible_by.value_or(UnitKind::Resource);
            auto neighbor_free = [&](const Unit& u) {
                return s.cell_free(step_towards(u.pos, dir));
            };
            if (const Unit* sticky =
                    valid_sticky(s, player, producer_kind, entry.binding, claimed)) {
                if (neighbor_free(*sticky)) return std::vector<UnitId>{sticky->id};
                return std::nullopt;
            }
            for (const auto& [id, u] : s.units()) {
                if (u.owner != player || u.kind != producer_kind || claimed.count(id)) continue;
                if (neighbor_free(u)) return std::vector<UnitId>{id};
            }
            return std::nullopt;
        }
        case SkillId::AttackEnemy: {
            UnitKind unit_type = std::get<UnitKind>(entry.params[0]);
            UnitKind enemy_type = std::get<UnitKind>(entry.params[1]);
            if (!enemy_kind_exists(s, player, enemy_type)) return std::nullopt;
            std::vector<UnitId> bound;
            for (const auto& [id, u] : s.units()) {
                if (u.owner == player && u.kind == unit_type && !claimed.count(id))
                    bound.push_back(id);
            }
            if (bound.empty()) return std::nullopt;
            return bound;
        }
        case SkillId::DeployUnit: {
            UnitKind unit_type = std::get<UnitKind>(entry.params[0]);
            Position loc = std::get<Position>(entry.params[1]);
            const Unit* unit = valid_sticky(s, player, unit_type, entry.binding, claimed);
            if (!unit) {
                auto id = nearest_owned(s, player, unit_type, loc, claimed);
                if (!id) return std::nullopt;
                unit = s.find_unit(*id);
            }
            if (unit->pos == loc) return std::vector<UnitId>{unit->id};
            if (!s.cell_free(loc)) return std::nullopt;
            if (!paths.first_step(unit->pos, {loc})) return std::nullopt;
            return std::vector<UnitId>{unit->id};
        }
    }
    return std::nullopt;
}

// Spec-facing predicate: would the entry be applicable, given the claims of
// higher-priority entries?
inline bool applicability(const SkillRegistry& registry, const PlanEntry& entry,
                          const GameState& s, PlayerId player,
                          const std::set<UnitId>& claimed = {}) {
    return resolve_applicability(registry, entry, s, player, claimed).has_value();
}

// This tick's action proposals for a bound, applicable entry: at most one
// action per bound unit, every one legal right now. An empty list keeps the
// entry active; the environment may unblock it later. Mutates only the
// entry's produce bookkeeping.
inline std::vector<std::pair<UnitId, AtomicAction>> policy_step(const SkillRegistry& registry,
                                                                PlanEntry& entry,
                                                                const GameState& s,
                                                                PlayerId player) {
    using namespace skills_detail;
    std::vector<std::pair<UnitId, AtomicAction>> proposals;
    PathFinder paths(s);
    auto propose = [&](UnitId id, AtomicAction a) {
        const Unit* u = s.find_unit(id);
        if (u && is_legal_action(s, player, *u, a)) proposals.emplace_back(id, a);
    };

    switch (entry.skill) {
        case SkillId::HarvestMineral: {
            if (entry.binding.empty()) break;
            const Unit* worker = s.find_unit(entry.binding.front());
            if (!worker || !worker->idle()) break;
            Position loc = std::get<Position>(entry.params[0]);
            if (worker->carried == 0) {
                if (!live_field_at(s, loc)) break;
                if (auto d = direction_between(worker->pos, loc)) {
                    propose(worker->id, AtomicAction::harvest(*d));
                } else if (auto d2 = paths.first_step(worker->pos, paths.free_neighbors(loc))) {
                    propose(worker->id, AtomicAction::move(*d2));
                }
            } else {
                auto base_dir = adjacent_dir(s, worker->pos, [&](Position p) {
                    const Unit* u = s.unit_at(p);
                    return u && u->kind == UnitKind::Base && u->owner == player;
                });
                if (base_dir) {
                    propose(worker->id, AtomicAction::deposit(*base_dir));
                } else if (auto d = paths.first_step(worker->pos,
                                                     base_adjacent_goals(s, player, paths))) {
                    propose(worker->id, AtomicAction::move(*d));
                }
            }
            break;
        }
        case SkillId::BuildBuilding: {
            if (entry.binding.empty()) break;
            const Unit* worker = s.find_unit(entry.binding.front());
            if (!worker || !worker->idle()) break;
            UnitKind type = std::get<UnitKind>(entry.params[0]);
            Position loc = std::get<Position>(entry.params[1]);
            if (!s.cell_free(loc)) break;
            if (auto d = direction_between(worker->pos, loc)) {
                propose(worker->id, AtomicAction::produce(type, *d));
            } else if (auto d2 = paths.first_step(worker->pos, paths.free_neighbors(loc))) {
                propose(worker->id, AtomicAction::move(*d2));
            }
            break;
        }
        case SkillId::ProduceUnit: {
            if (entry.binding.empty()) break;
            const Unit* producer = s.find_unit(entry.binding.front());
            if (!producer || !producer->idle()) break;
            UnitKind type = std::get<UnitKind>(entry.params[0]);
            Direction dir = std::get<Direction>(entry.params[1]);
            size_t before = proposals.size();
            propose(producer->id, AtomicAction::produce(type, dir));
            if (proposals.size() > before) entry.produce_pending_tick = s.tick();
            break;
        }
        case SkillId::AttackEnemy: {
            UnitKind enemy_type = std::get<UnitKind>(entry.params[1]);
            for (UnitId id : entry.binding) {
                const Unit* u = s.find_unit(id);
                if (!u || !u->idle()) continue;
                const Unit* target = nearest_enemy(s, player, enemy_type, u->pos);
                if (!target) continue;
                const UnitStats& stats = s.stats().of(u->kind);
                if (attack_in_range(stats, u->pos, target->pos)) {
                    propose(id, AtomicAction::attack_delta(target->pos.x - u->pos.x,
                                                           target->pos.y - u->pos.y));
                } else if (auto d = paths.first_step(u->pos,
                                                     paths.attack_positions(stats, target->pos))) {
                    propose(id, AtomicAction::move(*d));
                }
            }
            break;
        }
        case SkillId::DeployUnit: {
            if (entry.binding.empty()) break;
            const Unit* unit = s.find_unit(entry.binding.front());
            if (!unit || !unit->idle() || unit->pos == std::get<Position>(entry.params[1])) break;
            if (auto d = paths.first_step(unit->pos, {std::get<Position>(entry.params[1])}))
                propose(unit->id, AtomicAction::move(*d));
            break;
        }
    }
    return proposals;
}

// Refreshes the one-shot Produce Unit lifecycle from the observed state; runs
// once per tick, after the environment step.
inline void update_entry_runtime(PlanEntry& entry, const GameState& s, PlayerId player) {
    if (entry.skill != SkillId::ProduceUnit || entry.produce_done) return;
    if (entry.binding.empty()) {
        entry.produce_pending_tick = -1;
        return;
    }
    UnitKind type = std::get<UnitKind>(entry.params[0]);
    Direction dir = std::get<Direction>(entry.params[1]);
    const Unit* producer = s.find_unit(entry.binding.front());
    if (!producer) {
        // A producer lost after the order started can never finish the job.
        if (entry.produce_seen_busy || entry.produce_pending_tick >= 0) entry.produce_done = true;
        return;
    }
    auto busy_with_ours = [&]() {
        return producer->busy && producer->busy->action.type == ActionType::Produce &&
               producer->busy->action.produce_kind == type && producer->busy->action.dir == dir;
    };
    if (entry.produce_seen_busy) {
        if (!busy_with_ours()) entry.produce_done = true;
        return;
    }
    if (entry.produce_pending_tick >= 0 && s.tick() == entry.produce_pending_tick + 1) {
        if (busy_with_ours()) {
            entry.produce_seen_busy = true;
        } else {
            const Unit* spawned = s.unit_at(step_towards(producer->pos, dir));
            if (spawned && spawned->owner == player && spawned->kind == type) {
                entry.produce_done = true;  // one-tick build completed immediately
            } else {
                entry.produce_pending_tick = -1;  // submission was dropped; retry
            }
        }
    }
}

// Termination predicate. True entries are pruned from the plan and never
// emit proposals again.
inline bool termination(const SkillRegistry& registry, const PlanEntry& entry, const GameState& s,
                        PlayerId player) {
    using namespace skills_detail;
    (void)registry;
    switch (entry.skill) {
        case SkillId::DeployUnit: {
            if (entry.binding.empty()) return false;
            const Unit* u = s.find_unit(entry.binding.front());
            return !u || u->pos == std::get<Position>(entry.params[1]);
        }
        case SkillId::HarvestMineral: {
            Position loc = std::get<Position>(entry.params[0]);
            return !live_field_at(s, loc) || !has_owned_kind(s, player, UnitKind::Worker) ||
                   !has_owned_kind(s, player, UnitKind::Base);
        }
        case SkillId::BuildBuilding: {
            const Unit* u = s.unit_at(std::get<Position>(entry.params[1]));
            return u && u->kind == std::get<UnitKind>(entry.params[0]);
        }
        case SkillId::ProduceUnit:
            return entry.produce_done;
        case SkillId::AttackEnemy:
            return !enemy_kind_exists(s, player, std::get<UnitKind>(entry.params[1]));
    }
    return false;
}

}  // namespace rtsplan
