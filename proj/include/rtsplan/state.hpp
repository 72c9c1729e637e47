#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtsplan/action.hpp"
#include "rtsplan/stats.hpp"
#include "rtsplan/types.hpp"

namespace rtsplan {

// An action that has been issued and is counting down to its completion tick.
// The absolute target cell is resolved at issue time.
struct InProgressAction {
    AtomicAction action;
    Position target;
    int remaining = 0;
    int total = 0;

    bool operator==(const InProgressAction&) const = default;
};

struct Unit {
    UnitId id = kInvalidUnit;
    UnitKind kind = UnitKind::Resource;
    int owner = kNeutralOwner;  // 0, 1, or kNeutralOwner
    Position pos;
    int hp = 1;
    int carried = 0;              // resources carried (workers)
    int resources_remaining = 0;  // minerals left (resource fields)
    std::optional<InProgressAction> busy;

    bool idle() const { return !busy.has_value(); }
};

// Cumulative per-player tallies; every evaluation metric reads from these.
struct MatchCounters {
    std::int64_t resources_harvested = 0;  // counted at deposit time
    std::int64_t resources_spent = 0;      // counted when a produce starts
    std::int64_t unit_production = 0;      // counted when a produce completes
    std::int64_t damage_dealt = 0;
    std::int64_t damage_taken = 0;

    bool operator==(const MatchCounters&) const = default;
};

class GameState {
public:
    GameState() = default;
    GameState(int w, int h, StatsTable stats_table)
        : width_(w),
          height_(h),
          stats_(std::move(stats_table)),
          occupancy_(static_cast<size_t>(w) * h, kInvalidUnit),
          reservation_(static_cast<size_t>(w) * h, kInvalidUnit) {}

    int width() const { return width_; }
    int height() const { return height_; }
    long tick() const { return tick_; }
    const StatsTable& stats() const { return stats_; }
    const std::map<UnitId, Unit>& units() const { return units_; }

    bool in_bounds(Position p) const {
        return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
    }

    UnitId unit_id_at(Position p) const {
        return in_bounds(p) ? occupancy_[cell_index(p)] : kInvalidUnit;
    }

    const Unit* unit_at(Position p) const {
        UnitId id = unit_id_at(p);
        return id == kInvalidUnit ? nullptr : &units_.at(id);
    }

    const Unit* find_unit(UnitId id) const {
        auto it = units_.find(id);
        return it == units_.end() ? nullptr : &it->second;
    }

    bool reserved(Position p) const {
        return in_bounds(p) && reservation_[cell_index(p)] != kInvalidUnit;
    }

    // Empty and unreserved: a unit may be ordered into or spawned on this cell.
    bool cell_free(Position p) const {
        return in_bounds(p) && unit_id_at(p) == kInvalidUnit && !reserved(p);
    }

    int resources(PlayerId p) const { return player_resources_[static_cast<size_t>(p)]; }
    const MatchCounters& counters(PlayerId p) const { return counters_[static_cast<size_t>(p)]; }

    int live_unit_count(PlayerId p) const {
        int n = 0;
        for (const auto& [id, u] : units_)
            if (u.owner == p) ++n;
        return n;
    }

    std::int64_t carried_lost(PlayerId p) const { return carried_lost_[static_cast<size_t>(p)]; }
    int initial_field_total() const { return initial_field_total_; }
    int initial_resources(PlayerId p) const {
        return initial_resources_[static_cast<size_t>(p)];
    }

    // --- mutation (engine and map loader only) ---

    UnitId add_unit(UnitKind kind, int owner, Position pos, int resources_remaining = 0) {
        if (!in_bounds(pos)) throw std::runtime_error("add_unit: position out of bounds");
        if (unit_id_at(pos) != kInvalidUnit)
            throw std::runtime_error("add_unit: cell " + pos_str(pos) + " already occupied");
        Unit u;
        u.id = next_unit_id_++;
        u.kind = kind;
        u.owner = owner;
        u.pos = pos;
        u.hp = stats_.of(kind).max_hp;
        u.resources_remaining = resources_remaining;
        occupancy_[cell_index(pos)] = u.id;
        units_.emplace(u.id, u);
        return u.id;
    }

    void remove_unit(UnitId id) {
        auto it = units_.find(id);
        if (it == units_.end()) return;
        const Unit& u = it->second;
        if (u.carried > 0 && u.owner >= 0)
            carried_lost_[static_cast<size_t>(u.owner)] += u.carried;
        if (u.busy && u.busy->action.type == ActionType::Produce) release_reservation(u.busy->target);
        occupancy_[cell_index(u.pos)] = kInvalidUnit;
        units_.erase(it);
    }

    void move_unit(UnitId id, Position to) {
        Unit& u = units_.at(id);
        occupancy_[cell_index(u.pos)] = kInvalidUnit;
        occupancy_[cell_index(to)] = id;
        u.pos = to;
    }

    Unit& unit_ref(UnitId id) { return units_.at(id); }
    std::map<UnitId, Unit>& units_mut() { return units_; }
    void set_resources(PlayerId p, int amount) { player_resources_[static_cast<size_t>(p)] = amount; }
    void add_resources(PlayerId p, int delta) { player_resources_[static_cast<size_t>(p)] += delta; }
    MatchCounters& counters_ref(PlayerId p) { return counters_[static_cast<size_t>(p)]; }
    void reserve_cell(Position p, UnitId producer) { reservation_[cell_index(p)] = producer; }
    void release_reservation(Position p) {
        if (in_bounds(p)) reservation_[cell_index(p)] = kInvalidUnit;
    }
    void advance_tick() { ++tick_; }

    void finalize_load() {
        initial_field_total_ = 0;
        for (const auto& [id, u] : units_)
            if (u.kind == UnitKind::Resource) initial_field_total_ += u.resources_remaining;
        initial_resources_ = player_resources_;
    }

private:
    size_t cell_index(Position p) const { return static_cast<size_t>(p.y) * width_ + p.x; }

    int width_ = 0;
    int height_ = 0;
    long tick_ = 0;
    StatsTable stats_;
    std::map<UnitId, Unit> units_;
    std::array<int, 2> player_resources_{};
    std::array<MatchCounters, 2> counters_{};
    std::array<std::int64_t, 2> carried_lost_{};
    std::array<int, 2> initial_resources_{};
    std::vector<UnitId> occupancy_;
    std::vector<UnitId> reservation_;
    UnitId next_unit_id_ = 0;
    int initial_field_total_ = 0;
};

namespace detail {

inline std::uint64_t fnv1a64_init() { return 14695981039346656037ULL; }

inline void fnv1a64_feed(std::uint64_t& h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (i * 8)) & 0xFF;
        h *= 1099511628211ULL;
    }
}

}  // namespace detail

// Order-independent of map iteration details: units are hashed in ascending id
// order with every behavior-relevant field, so equal hashes over a whole match
// mean equal simulations.
inline std::uint64_t state_hash(const GameState& s) {
    std::uint64_t h = detail::fnv1a64_init();
    auto feed = [&h](std::int64_t v) { detail::fnv1a64_feed(h, static_cast<std::uint64_t>(v)); };
    feed(s.tick());
    feed(s.width());
    feed(s.height());
    feed(s.resources(0));
    feed(s.resources(1));
    for (PlayerId p : {0, 1}) {
        const MatchCounters& c = s.counters(p);
        feed(c.resources_harvested);
        feed(c.resources_spent);
        feed(c.unit_production);
        feed(c.damage_dealt);
        feed(c.damage_taken);
        feed(s.carried_lost(p));
    }
    for (const auto& [id, u] : s.units()) {
        feed(id);
        feed(static_cast<int>(u.kind));
        feed(u.owner);
        feed(u.pos.x);
        feed(u.pos.y);
        feed(u.hp);
        feed(u.carried);
        feed(u.resources_remaining);
        if (u.busy) {
            const auto row = pre_one_hot_row(u.busy->action);
            for (int c : row) feed(c);
            feed(u.busy->target.x);
            feed(u.busy->target.y);
            feed(u.busy->remaining);
        } else {
            feed(-1);
        }
    }
    return h;
}

inline std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace rtsplan
