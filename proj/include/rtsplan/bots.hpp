#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rtsplan/engine.hpp"
#include "rtsplan/path.hpp"

namespace rtsplan {

// Engine-wide deterministic RNG wrapper; bounded draws go through operator()%
// so sequences are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }

private:
    std::mt19937_64 engine_;
};

namespace bot_detail {

inline const Unit* nearest_enemy_any(const GameState& s, PlayerId player, Position from) {
    const Unit* best = nullptr;
    int best_dist = 0;
    for (const auto& [id, u] : s.units()) {
        if (u.owner != opponent_of(player)) continue;
        int dist = manhattan(u.pos, from);
        if (!best || dist < best_dist) {
            best = &u;
            best_dist = dist;
        }
    }
    return best;
}

inline const Unit* nearest_field(const GameState& s, Position from) {
    const Unit* best = nullptr;
    int best_dist = 0;
    for (const auto& [id, u] : s.units()) {
        if (u.kind != UnitKind::Resource || u.resources_remaining <= 0) continue;
        int dist = manhattan(u.pos, from);
        if (!best || dist < best_dist) {
            best = &u;
            best_dist = dist;
        }
    }
    return best;
}

// Advance toward the nearest enemy and strike when in range.
inline std::optional<AtomicAction> attack_move(const GameState& s, PlayerId player, const Unit& u,
                                               const PathFinder& paths) {
    const Unit* target = nearest_enemy_any(s, player, u.pos);
    if (!target) return std::nullopt;
    const UnitStats& stats = s.stats().of(u.kind);
    if (stats.can_attack() && attack_in_range(stats, u.pos, target->pos))
        return AtomicAction::attack_delta(target->pos.x - u.pos.x, target->pos.y - u.pos.y);
    if (auto d = paths.first_step(u.pos, paths.attack_positions(stats, target->pos)))
        return AtomicAction::move(*d);
    return std::nullopt;
}

// One step of the gather cycle: walk to the nearest live field, harvest,
// walk back to a base, deposit.
inline std::optional<AtomicAction> harvest_cycle(const GameState& s, PlayerId player,
                                                 const Unit& worker, const PathFinder& paths) {
    if (worker.carried > 0) {
        for (Direction d : all_directions) {
            const Unit* base = s.unit_at(step_towards(worker.pos, d));
            if (base && base->kind == UnitKind::Base && base->owner == player)
                return AtomicAction::deposit(d);
        }
        std::vector<Position> goals;
        for (const auto& [id, u] : s.units()) {
            if (u.owner != player || u.kind != UnitKind::Base) continue;
            for (Position p : paths.free_neighbors(u.pos)) goals.push_back(p);
        }
        if (auto d = paths.first_step(worker.pos, goals)) return AtomicAction::move(*d);
        return std::nullopt;
    }
    const Unit* field = nearest_field(s, worker.pos);
    if (!field) return std::nullopt;
    if (auto d = direction_between(worker.pos, field->pos)) return AtomicAction::harvest(*d);
    if (auto d = paths.first_step(worker.pos, paths.free_neighbors(field->pos)))
        return AtomicAction::move(*d);
    return std::nullopt;
}

inline std::optional<Direction> first_free_direction(const GameState& s, Position from) {
    for (Direction d : all_directions) {
        if (s.cell_free(step_towards(from, d))) return d;
    }
    return std::nullopt;
}

inline bool barrack_in_progress(const GameState& s, PlayerId player) {
    for (const auto& [id, u] : s.units()) {
        if (u.owner == player && u.busy && u.busy->action.type == ActionType::Produce &&
            u.busy->action.produce_kind == UnitKind::Barrack)
            return true;
    }
    return false;
}

}  // namespace bot_detail

// Uniformly random legal play with attack, harvest and return weighted five
// times higher than the other choices.
inline ActionVector random_biased(const GameState& s, PlayerId player, Rng& rng) {
    ActionVector v(s.width(), s.height());
    for (const auto& [id, u] : s.units()) {
        if (u.owner != player || !u.idle()) continue;
        auto legal = legal_actions_for(s, player, u);
        if (legal.empty()) continue;
        std::uint64_t total = 0;
        std::vector<std::uint64_t> weights;
        weights.reserve(legal.size());
        for (const AtomicAction& a : legal) {
            bool biased = a.type == ActionType::Attack || a.type == ActionType::Harvest ||
                          a.type == ActionType::Return;
            weights.push_back(biased ? 5 : 1);
            total += weights.back();
        }
        std::uint64_t pick = rng.below(total);
        for (size_t i = 0; i < legal.size(); ++i) {
            if (pick < weights[i]) {
                v.at(u.pos.x, u.pos.y) = legal[i];
                break;
            }
            pick -= weights[i];
        }
    }
    return v;
}

// Rush strategy: every base trains workers nonstop, the lowest-id worker
// gathers, everyone else attacks the closest enemy unit.
inline ActionVector worker_rush(const GameState& s, PlayerId player) {
    ActionVector v(s.width(), s.height());
    PathFinder paths(s);
    UnitId harvester = kInvalidUnit;
    for (const auto& [id, u] : s.units()) {
        if (u.owner == player && u.kind == UnitKind::Worker) {
            harvester = id;
            break;
        }
    }
    for (const auto& [id, u] : s.units()) {
        if (u.owner != player || !u.idle()) continue;
        std::optional<AtomicAction> action;
        if (u.kind == UnitKind::Base) {
            if (s.resources(player) >= s.stats().of(UnitKind::Worker).cost) {
                if (auto d = bot_detail::first_free_direction(s, u.pos))
                    action = AtomicAction::produce(UnitKind::Worker, *d);
            }
        } else if (u.kind == UnitKind::Worker && id == harvester) {
            action = bot_detail::harvest_cycle(s, player, u, paths);
            if (!action) {
                // Nothing left to gather or nowhere to deposit: join the fight.
                bool fields_left = bot_detail::nearest_field(s, u.pos) != nullptr;
                bool base_alive = false;
                for (const auto& [bid, b] : s.units())
                    if (b.owner == player && b.kind == UnitKind::Base) base_alive = true;
                if (!fields_left || !base_alive)
                    action = bot_detail::attack_move(s, player, u, paths);
            }
        } else if (s.stats().of(u.kind).can_attack()) {
            action = bot_detail::attack_move(s, player, u, paths);
        }
        if (action) v.at(u.pos.x, u.pos.y) = *action;
    }
    return v;
}

// Rush strategy: one worker gathers and raises a barrack as soon as it is
// affordable; the barrack trains light units nonstop and they attack at once.
inline ActionVector light_rush(const GameState& s, PlayerId player) {
    ActionVector v(s.width(), s.height());
    PathFinder paths(s);
    const UnitStats& barrack_stats = s.stats().of(UnitKind::Barrack);

    UnitId harvester = kInvalidUnit;
    const Unit* home_base = nullptr;
    bool have_barrack = false;
    for (const auto& [id, u] : s.units()) {
        if (u.owner != player) continue;
        if (u.kind == UnitKind::Worker && harvester == kInvalidUnit) harvester = id;
        if (u.kind == UnitKind::Base && !home_base) home_base = &u;
        if (u.kind == UnitKind::Barrack) have_barrack = true;
    }
    bool barrack_wanted = !have_barrack && !bot_detail::barrack_in_progress(s, player) &&
                          s.resources(player) >= barrack_stats.cost;

    std::optional<Position> build_site;
    if (barrack_wanted && home_base) {
        for (Direction d : all_directions) {
            Position p = step_towards(home_base->pos, d);
            if (s.cell_free(p)) {
                build_site = p;
                break;
            }
        }
    }

    for (const auto& [id, u] : s.units()) {
        if (u.owner != player || !u.idle()) continue;
        std::optional<AtomicAction> action;
        if (u.kind == UnitKind::Barrack) {
            if (s.resources(player) >= s.stats().of(UnitKind::Light).cost) {
                if (auto d = bot_detail::first_free_direction(s, u.pos))
                    action = AtomicAction::produce(UnitKind::Light, *d);
            }
        } else if (u.kind == UnitKind::Worker && id == harvester) {
            if (build_site) {
                if (auto d = direction_between(u.pos, *build_site)) {
                    action = AtomicAction::produce(UnitKind::Barrack, *d);
                } else if (auto d2 = paths.first_step(u.pos, paths.free_neighbors(*build_site))) {
                    action = AtomicAction::move(*d2);
                }
            } else {
                action = bot_detail::harvest_cycle(s, player, u, paths);
            }
        } else if (u.kind == UnitKind::Light) {
            action = bot_detail::attack_move(s, player, u, paths);
        }
        if (action) v.at(u.pos.x, u.pos.y) = *action;
    }
    return v;
}

// Emits nothing, forever. Useful as a sparring dummy.
inline ActionVector passive_bot(const GameState& s) { return ActionVector(s.width(), s.height()); }

}  // namespace rtsplan
