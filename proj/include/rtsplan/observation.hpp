#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtsplan/state.hpp"

namespace rtsplan {

// Per-cell one-hot feature groups of the (h, w, 27) observation tensor:
// hit points bucketed 0..3 and >=4, resources bucketed the same way, owner
// (self, none, enemy), unit type (none + 7 kinds), current action class.
inline constexpr int kHpPlanes = 5;
inline constexpr int kResourcePlanes = 5;
inline constexpr int kOwnerPlanes = 3;
inline constexpr int kTypePlanes = 8;
inline constexpr int kActionPlanes = 6;
inline constexpr int kObservationPlanes =
    kHpPlanes + kResourcePlanes + kOwnerPlanes + kTypePlanes + kActionPlanes;  // 27

struct ObservationTensor {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // [y][x][plane], row-major

    ObservationTensor() = default;
    ObservationTensor(int w, int h)
        : width(w), height(h), data(static_cast<size_t>(w) * h * kObservationPlanes, 0) {}

    size_t index(int x, int y, int plane) const {
        return (static_cast<size_t>(y) * width + x) * kObservationPlanes + plane;
    }
    std::uint8_t at(int x, int y, int plane) const { return data[index(x, y, plane)]; }
    void set(int x, int y, int plane) { data[index(x, y, plane)] = 1; }
};

inline int bucket4(int v) { return v <= 0 ? 0 : std::min(v, 4); }

// Builds the observation from `player`'s point of view: the first owner plane
// is the querying player, the third the opponent, so both sides see a
// symmetric encoding.
inline ObservationTensor build_tensor(const GameState& s, PlayerId player) {
    ObservationTensor t(s.width(), s.height());
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            const Unit* u = s.unit_at({x, y});
            int hp_bucket = 0;
            int res_bucket = 0;
            int owner_plane = 1;  // none
            int type_plane = 0;   // none
            int action_plane = 0; // none
            if (u) {
                hp_bucket = bucket4(u->hp);
                res_bucket = bucket4(u->kind == UnitKind::Resource ? u->resources_remaining
                                                                   : u->carried);
                owner_plane = u->owner == player ? 0 : (u->owner == kNeutralOwner ? 1 : 2);
                type_plane = 1 + static_cast<int>(u->kind);
                action_plane = u->busy ? static_cast<int>(u->busy->action.type) : 0;
            }
            int base = 0;
            t.set(x, y, base + hp_bucket);
            base += kHpPlanes;
            t.set(x, y, base + res_bucket);
            base += kResourcePlanes;
            t.set(x, y, base + owner_plane);
            base += kOwnerPlanes;
            t.set(x, y, base + type_plane);
            base += kTypePlanes;
            t.set(x, y, base + action_plane);
        }
    }
    return t;
}

// One JSON record per cell, for debugging dumps.
inline std::string dump_tensor_jsonl(const ObservationTensor& t) {
    std::ostringstream out;
    for (int y = 0; y < t.height; ++y) {
        for (int x = 0; x < t.width; ++x) {
            nlohmann::json planes = nlohmann::json::array();
            for (int p = 0; p < kObservationPlanes; ++p) planes.push_back(t.at(x, y, p));
            out << nlohmann::json{{"x", x}, {"y", y}, {"planes", planes}}.dump() << "\n";
        }
    }
    return out.str();
}

namespace detail {

inline std::string unit_status(const Unit& u) {
    if (!u.busy) return "idle";
    std::ostringstream out;
    const AtomicAction& a = u.busy->action;
    switch (a.type) {
        case ActionType::Move: out << "moving " << dir_name(a.dir); break;
        case ActionType::Harvest: out << "harvesting"; break;
        case ActionType::Return: out << "returning resources"; break;
        case ActionType::Produce: out << "producing " << kind_name(a.produce_kind); break;
        case ActionType::Attack: out << "attacking " << pos_str(u.busy->target); break;
        case ActionType::Noop: out << "idle"; break;
    }
    out << " (" << u.busy->remaining << " ticks left)";
    return out.str();
}

inline void describe_units(std::ostringstream& out, const GameState& s, PlayerId owner) {
    bool any = false;
    for (const auto& [id, u] : s.units()) {
        if (u.owner != owner) continue;
        any = true;
        out << "- " << kind_name(u.kind) << " #" << id << " at " << pos_str(u.pos) << ", "
            << u.hp << "/" << s.stats().of(u.kind).max_hp << " HP";
        if (u.carried > 0) out << ", carrying " << u.carried;
        out << ", " << unit_status(u) << "\n";
    }
    if (!any) out << "- none\n";
}

}  // namespace detail

// Deterministic textual rendering of the state from `player`'s side. The
// template is frozen by golden-file tests; units appear in ascending id order.
inline std::string to_text(const GameState& s, PlayerId player) {
    std::ostringstream out;
    PlayerId enemy = opponent_of(player);
    out << "Game tick: " << s.tick() << " | Map size: " << s.width() << "x" << s.height()
        << " (x grows right, y grows down, origin at the top-left)\n";
    out << "Your resources: " << s.resources(player) << " | Enemy resources: " << s.resources(enemy)
        << "\n";
    out << "\nMineral fields:\n";
    bool any_field = false;
    for (const auto& [id, u] : s.units()) {
        if (u.kind != UnitKind::Resource) continue;
        any_field = true;
        out << "- mineral field at " << pos_str(u.pos) << ", " << u.resources_remaining
            << " remaining\n";
    }
    if (!any_field) out << "- none\n";
    out << "\nYour units:\n";
    detail::describe_units(out, s, player);
    out << "\nEnemy units:\n";
    detail::describe_units(out, s, enemy);
    out << "\nHints:\n";
    if (s.resources(player) == 0 && !any_field) {
        out << "- You have zero resources and there are no mineral fields left on the map: "
               "let all your units attack the enemy's units and buildings to launch the final "
               "decisive battle.\n";
    } else {
        out << "- none\n";
    }
    return out.str();
}

}  // namespace rtsplan
