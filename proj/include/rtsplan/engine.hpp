#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rtsplan/state.hpp"

namespace rtsplan {

enum class EventKind {
    ActionDropped,    // illegal submission, ignored
    ActionCancelled,  // completion conflict, action lost
    UnitSpawned,
    UnitDied,
    HarvestPickup,
    Deposit,
    FieldExhausted,
    AttackHit,
};

inline std::string_view event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::ActionDropped: return "dropped";
        case EventKind::ActionCancelled: return "cancelled";
        case EventKind::UnitSpawned: return "spawned";
        case EventKind::UnitDied: return "died";
        case EventKind::HarvestPickup: return "pickup";
        case EventKind::Deposit: return "deposit";
        case EventKind::FieldExhausted: return "exhausted";
        case EventKind::AttackHit: return "hit";
    }
    return "?";
}

struct Event {
    EventKind kind;
    UnitId unit = kInvalidUnit;
    Position pos{};
    int amount = 0;
    std::string detail;
};

enum class MatchOutcome { Ongoing, WinP0, WinP1, Draw };

inline bool attack_in_range(const UnitStats& attacker, Position from, Position to) {
    int dx = to.x - from.x;
    int dy = to.y - from.y;
    return dx * dx + dy * dy <= attacker.attack_range * attacker.attack_range;
}

// Shared legality predicate: exactly the submissions step() will accept this
// tick for an idle, player-owned unit. Fills `why` with a reason on rejection.
inline bool is_legal_action(const GameState& s, PlayerId player, const Unit& u,
                            const AtomicAction& a, std::string* why = nullptr) {
    auto reject = [&](std::string_view reason) {
        if (why) *why = reason;
        return false;
    };
    if (u.owner != player) return reject("not_owner");
    if (!u.idle()) return reject("busy");
    const UnitStats& stats = s.stats().of(u.kind);
    switch (a.type) {
        case ActionType::Noop:
            return true;
        case ActionType::Move: {
            if (!stats.can_move()) return reject("cannot_move");
            Position to = step_towards(u.pos, a.dir);
            if (!s.in_bounds(to)) return reject("out_of_bounds");
            if (!s.cell_free(to)) return reject("cell_occupied");
            return true;
        }
        case ActionType::Harvest: {
            if (!stats.can_harvest()) return reject("cannot_harvest");
            if (u.carried > 0) return reject("already_carrying");
            Position to = step_towards(u.pos, a.dir);
            const Unit* field = s.unit_at(to);
            if (!field || field->kind != UnitKind::Resource || field->resources_remaining <= 0)
                return reject("no_field");
            return true;
        }
        case ActionType::Return: {
            if (!stats.can_harvest()) return reject("cannot_harvest");
            if (u.carried <= 0) return reject("not_carrying");
            Position to = step_towards(u.pos, a.dir);
            const Unit* base = s.unit_at(to);
            if (!base || base->kind != UnitKind::Base || base->owner != player)
                return reject("no_base");
            return true;
        }
        case ActionType::Produce: {
            if (!s.stats().can_produce(u.kind, a.produce_kind)) return reject("wrong_producer");
            if (s.resources(player) < s.stats().of(a.produce_kind).cost)
                return reject("insufficient_funds");
            Position to = step_towards(u.pos, a.dir);
            if (!s.in_bounds(to)) return reject("out_of_bounds");
            if (!s.cell_free(to)) return reject("cell_occupied");
            return true;
        }
        case ActionType::Attack: {
            if (!stats.can_attack()) return reject("cannot_attack");
            auto [dx, dy] = attack_delta_from_offset(a.attack_offset);
            if (dx == 0 && dy == 0) return reject("no_target");
            Position to{u.pos.x + dx, u.pos.y + dy};
            if (!s.in_bounds(to)) return reject("out_of_bounds");
            if (!attack_in_range(stats, u.pos, to)) return reject("out_of_range");
            const Unit* target = s.unit_at(to);
            if (!target || target->owner != opponent_of(player)) return reject("no_target");
            return true;
        }
    }
    return reject("unknown_action");
}

// Every action executable by this unit right now, NOOP first, in a canonical
// deterministic order.
inline std::vector<AtomicAction> legal_actions_for(const GameState& s, PlayerId player,
                                                   const Unit& u) {
    std::vector<AtomicAction> out;
    if (u.owner != player || !u.idle()) return out;
    out.push_back(AtomicAction::noop());
    const UnitStats& stats = s.stats().of(u.kind);
    for (Direction d : all_directions) {
        AtomicAction a = AtomicAction::move(d);
        if (is_legal_action(s, player, u, a)) out.push_back(a);
    }
    for (Direction d : all_directions) {
        AtomicAction a = AtomicAction::harvest(d);
        if (is_legal_action(s, player, u, a)) out.push_back(a);
    }
    for (Direction d : all_directions) {
        AtomicAction a = AtomicAction::deposit(d);
        if (is_legal_action(s, player, u, a)) out.push_back(a);
    }
    for (UnitKind k : all_unit_kinds) {
        if (!s.stats().can_produce(u.kind, k)) continue;
        for (Direction d : all_directions) {
            AtomicAction a = AtomicAction::produce(k, d);
            if (is_legal_action(s, player, u, a)) out.push_back(a);
        }
    }
    if (stats.can_attack()) {
        for (int offset = 0; offset < kAttackCells; ++offset) {
            AtomicAction a = AtomicAction::attack(offset);
            if (is_legal_action(s, player, u, a)) out.push_back(a);
        }
    }
    return out;
}

// All executable (unit, action) pairs for the player this tick, ascending by
// unit id. Busy units contribute nothing.
inline std::vector<std::pair<UnitId, AtomicAction>> legal_actions(const GameState& s,
                                                                  PlayerId player) {
    std::vector<std::pair<UnitId, AtomicAction>> out;
    for (const auto& [id, u] : s.units()) {
        for (const AtomicAction& a : legal_actions_for(s, player, u)) out.emplace_back(id, a);
    }
    return out;
}

inline MatchOutcome terminal_status(const GameState& s, long max_ticks) {
    int n0 = s.live_unit_count(0);
    int n1 = s.live_unit_count(1);
    if (n0 == 0 && n1 == 0) return MatchOutcome::Draw;
    if (n1 == 0) return MatchOutcome::WinP0;
    if (n0 == 0) return MatchOutcome::WinP1;
    if (s.tick() >= max_ticks) return MatchOutcome::Draw;
    return MatchOutcome::Ongoing;
}

namespace detail {

inline int action_duration(const StatsTable& stats, const Unit& u, const AtomicAction& a) {
    const UnitStats& own = stats.of(u.kind);
    switch (a.type) {
        case ActionType::Move: return own.move_time;
        case ActionType::Harvest: return own.harvest_time;
        case ActionType::Return: return own.return_time;
        case ActionType::Produce: return stats.of(a.produce_kind).build_time;
        case ActionType::Attack: return own.attack_time;
        case ActionType::Noop: return 0;
    }
    return 0;
}

inline Position action_target(const Unit& u, const AtomicAction& a) {
    if (a.type == ActionType::Attack) {
        auto [dx, dy] = attack_delta_from_offset(a.attack_offset);
        return {u.pos.x + dx, u.pos.y + dy};
    }
    return step_towards(u.pos, a.dir);
}

// Starts the submitted actions of both players that are still legal at this
// point, ascending by unit id across both vectors. Produce spends and
// reserves immediately, so later submissions see the updated stockpile and
// reservation map.
inline void start_submissions(GameState& s, const ActionVector& a0, const ActionVector& a1,
                              std::vector<Event>& events) {
    struct Submission {
        UnitId unit;
        PlayerId player;
        AtomicAction action;
    };
    std::vector<Submission> subs;
    for (PlayerId player : {0, 1}) {
        const ActionVector& v = player == 0 ? a0 : a1;
        for (int y = 0; y < s.height(); ++y) {
            for (int x = 0; x < s.width(); ++x) {
                const AtomicAction& a = v.at(x, y);
                if (a.type == ActionType::Noop) continue;
                UnitId id = s.unit_id_at({x, y});
                if (id == kInvalidUnit) {
                    events.push_back({EventKind::ActionDropped, kInvalidUnit, {x, y}, 0,
                                      "empty_cell"});
                    continue;
                }
                subs.push_back({id, player, a});
            }
        }
    }
    std::sort(subs.begin(), subs.end(),
              [](const Submission& a, const Submission& b) { return a.unit < b.unit; });

    for (const Submission& sub : subs) {
        const Unit& u = s.units().at(sub.unit);
        std::string why;
        if (!is_legal_action(s, sub.player, u, sub.action, &why)) {
            events.push_back({EventKind::ActionDropped, sub.unit, u.pos, 0, why});
            continue;
        }
        InProgressAction ipa;
        ipa.action = sub.action;
        ipa.target = action_target(u, sub.action);
        ipa.total = action_duration(s.stats(), u, sub.action);
        ipa.remaining = ipa.total;
        if (sub.action.type == ActionType::Produce) {
            int cost = s.stats().of(sub.action.produce_kind).cost;
            s.add_resources(sub.player, -cost);
            s.counters_ref(sub.player).resources_spent += cost;
            s.reserve_cell(ipa.target, sub.unit);
        }
        s.unit_ref(sub.unit).busy = ipa;
    }
}

inline void apply_damage(GameState& s, const Unit& attacker, Unit& target,
                         std::vector<Event>& events) {
    int dmg = s.stats().of(attacker.kind).attack_damage;
    // Counters track inter-player damage only, keeping dealt(p) == taken(1-p).
    if (attacker.owner >= 0 && target.owner == opponent_of(attacker.owner)) {
        s.counters_ref(attacker.owner).damage_dealt += dmg;
        s.counters_ref(target.owner).damage_taken += dmg;
    }
    target.hp -= dmg;
    events.push_back({EventKind::AttackHit, attacker.id, target.pos, dmg,
                      std::string(kind_name(target.kind))});
    if (target.hp <= 0) {
        events.push_back({EventKind::UnitDied, target.id, target.pos, target.carried,
                          std::string(kind_name(target.kind))});
        s.remove_unit(target.id);
    }
}

inline void complete_action(GameState& s, UnitId id, std::vector<Event>& events) {
    Unit& u = s.unit_ref(id);
    InProgressAction done = *u.busy;
    u.busy.reset();
    switch (done.action.type) {
        case ActionType::Move: {
            if (s.cell_free(done.target)) {
                s.move_unit(id, done.target);
            } else {
                events.push_back({EventKind::ActionCancelled, id, done.target, 0, "move_conflict"});
            }
            break;
        }
        case ActionType::Harvest: {
            UnitId fid = s.unit_id_at(done.target);
            const Unit* field = fid == kInvalidUnit ? nullptr : s.find_unit(fid);
            if (!field || field->kind != UnitKind::Resource || field->resources_remaining <= 0) {
                events.push_back({EventKind::ActionCancelled, id, done.target, 0, "field_gone"});
                break;
            }
            int amount = std::min(s.stats().of(u.kind).harvest_amount,
                                  field->resources_remaining);
            s.unit_ref(fid).resources_remaining -= amount;
            u.carried += amount;
            events.push_back({EventKind::HarvestPickup, id, done.target, amount, ""});
            if (s.find_unit(fid)->resources_remaining == 0) {
                events.push_back({EventKind::FieldExhausted, fid, done.target, 0, ""});
                s.remove_unit(fid);
            }
            break;
        }
        case ActionType::Return: {
            const Unit* base = s.unit_at(done.target);
            if (!base || base->kind != UnitKind::Base || base->owner != u.owner) {
                events.push_back({EventKind::ActionCancelled, id, done.target, 0, "base_gone"});
                break;
            }
            s.add_resources(u.owner, u.carried);
            s.counters_ref(u.owner).resources_harvested += u.carried;
            events.push_back({EventKind::Deposit, id, done.target, u.carried, ""});
            u.carried = 0;
            break;
        }
        case ActionType::Produce: {
            s.release_reservation(done.target);
            UnitId spawned = s.add_unit(done.action.produce_kind, u.owner, done.target);
            s.counters_ref(u.owner).unit_production += 1;
            events.push_back({EventKind::UnitSpawned, spawned, done.target, 0,
                              std::string(kind_name(done.action.produce_kind))});
            break;
        }
        case ActionType::Attack: {
            UnitId tid = s.unit_id_at(done.target);
            if (tid == kInvalidUnit) {
                events.push_back({EventKind::ActionCancelled, id, done.target, 0, "target_gone"});
                break;
            }
            apply_damage(s, u, s.unit_ref(tid), events);
            break;
        }
        case ActionType::Noop:
            break;
    }
}

}  // namespace detail

// Advances the world one tick: newly submitted legal actions start their
// countdowns, every in-flight action ticks down, and completions apply their
// effects in ascending unit-id order. Illegal or conflicting submissions are
// dropped with an event; only a dimension mismatch is an error.
inline std::vector<Event> step(GameState& s, const ActionVector& a0, const ActionVector& a1) {
    for (const ActionVector* v : {&a0, &a1}) {
        if (v->width != s.width() || v->height != s.height())
            throw std::invalid_argument("step: action vector dimensions do not match the board");
    }
    std::vector<Event> events;
    detail::start_submissions(s, a0, a1, events);

    std::vector<UnitId> completing;
    for (auto& [id, u] : s.units_mut()) {
        if (!u.busy) continue;
        if (--u.busy->remaining == 0) completing.push_back(id);
    }
    for (UnitId id : completing) {
        if (!s.find_unit(id)) continue;  // killed earlier this tick
        detail::complete_action(s, id, events);
    }
    s.advance_tick();
    return events;
}

}  // namespace rtsplan
