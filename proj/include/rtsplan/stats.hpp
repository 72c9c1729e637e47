#pragma once

#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rtsplan/types.hpp"

namespace rtsplan {

// Per-kind unit statistics. A time of 0 means the unit cannot perform that
// action at all; permitted actions always have times >= 1.
struct UnitStats {
    int max_hp = 1;
    int cost = 0;
    int build_time = 1;    // ticks a producer is busy creating this unit
    int move_time = 0;     // ticks per one-cell move
    int harvest_time = 0;  // ticks per harvest pickup
    int return_time = 0;   // ticks per stockpile deposit
    int attack_time = 0;   // ticks per attack
    int attack_damage = 0;
    int attack_range = 0;  // Euclidean range in cells, at most 3
    int harvest_amount = 0;
    std::optional<UnitKind> producible_by;

    bool can_move() const { return move_time > 0; }
    bool can_harvest() const { return harvest_time > 0; }
    bool can_attack() const { return attack_time > 0; }

    bool operator==(const UnitStats&) const = default;
};

struct StatsTable {
    std::array<UnitStats, kUnitKindCount> per_kind{};

    const UnitStats& of(UnitKind k) const { return per_kind[static_cast<size_t>(k)]; }
    UnitStats& of(UnitKind k) { return per_kind[static_cast<size_t>(k)]; }

    bool can_produce(UnitKind producer, UnitKind product) const {
        return of(product).producible_by == producer;
    }

    bool operator==(const StatsTable&) const = default;
};

// Built-in defaults mirror data/config/unit_stats.json (the shipped config is
// the authoritative record; see the source comments there).
inline StatsTable default_stats() {
    StatsTable t;
    auto& res = t.of(UnitKind::Resource);
    res = UnitStats{.max_hp = 1, .cost = 1, .build_time = 10};
    auto& base = t.of(UnitKind::Base);
    base = UnitStats{.max_hp = 10, .cost = 10, .build_time = 250, .producible_by = UnitKind::Worker};
    auto& barrack = t.of(UnitKind::Barrack);
    barrack = UnitStats{.max_hp = 4, .cost = 5, .build_time = 100, .producible_by = UnitKind::Worker};
    auto& worker = t.of(UnitKind::Worker);
    worker = UnitStats{.max_hp = 1,
                       .cost = 1,
                       .build_time = 50,
                       .move_time = 10,
                       .harvest_time = 20,
                       .return_time = 10,
                       .attack_time = 5,
                       .attack_damage = 1,
                       .attack_range = 1,
                       .harvest_amount = 1,
                       .producible_by = UnitKind::Base};
    auto& light = t.of(UnitKind::Light);
    light = UnitStats{.max_hp = 4,
                      .cost = 2,
                      .build_time = 80,
                      .move_time = 8,
                      .attack_time = 5,
                      .attack_damage = 2,
                      .attack_range = 1,
                      .producible_by = UnitKind::Barrack};
    auto& heavy = t.of(UnitKind::Heavy);
    heavy = UnitStats{.max_hp = 8,
                      .cost = 3,
                      .build_time = 120,
                      .move_time = 10,
                      .attack_time = 5,
                      .attack_damage = 4,
                      .attack_range = 1,
                      .producible_by = UnitKind::Barrack};
    auto& ranged = t.of(UnitKind::Ranged);
    ranged = UnitStats{.max_hp = 1,
                       .cost = 2,
                       .build_time = 100,
                       .move_time = 10,
                       .attack_time = 5,
                       .attack_damage = 1,
                       .attack_range = 3,
                       .producible_by = UnitKind::Barrack};
    return t;
}

inline nlohmann::json stats_to_json(const StatsTable& table) {
    nlohmann::json units = nlohmann::json::object();
    for (UnitKind k : all_unit_kinds) {
        const UnitStats& s = table.of(k);
        nlohmann::json j{{"max_hp", s.max_hp},
                         {"cost", s.cost},
                         {"build_time", s.build_time},
                         {"move_time", s.move_time},
                         {"harvest_time", s.harvest_time},
                         {"return_time", s.return_time},
                         {"attack_time", s.attack_time},
                         {"attack_damage", s.attack_damage},
                         {"attack_range", s.attack_range},
                         {"harvest_amount", s.harvest_amount}};
        if (s.producible_by) j["producible_by"] = kind_name(*s.producible_by);
        units[std::string(kind_name(k))] = std::move(j);
    }
    return nlohmann::json{{"version", 1}, {"units", units}};
}

// Parses a stats config document (JSON, // comments allowed). Unknown unit
// names and out-of-range values are load errors.
inline StatsTable stats_from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("stats config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("units") || !doc["units"].is_object())
        throw std::runtime_error("stats config: missing \"units\" object");

    StatsTable table = default_stats();
    for (const auto& [name, j] : doc["units"].items()) {
        auto kind = kind_from_name(name);
        if (!kind) throw std::runtime_error("stats config: unknown unit kind \"" + name + "\"");
        UnitStats& s = table.of(*kind);
        auto get = [&](const char* field, int& out) {
            if (j.contains(field)) out = j.at(field).get<int>();
        };
        get("max_hp", s.max_hp);
        get("cost", s.cost);
        get("build_time", s.build_time);
        get("move_time", s.move_time);
        get("harvest_time", s.harvest_time);
        get("return_time", s.return_time);
        get("attack_time", s.attack_time);
        get("attack_damage", s.attack_damage);
        get("attack_range", s.attack_range);
        get("harvest_amount", s.harvest_amount);
        if (j.contains("producible_by")) {
            if (j.at("producible_by").is_null()) {
                s.producible_by = std::nullopt;
            } else {
                auto producer = kind_from_name(j.at("producible_by").get<std::string>());
                if (!producer)
                    throw std::runtime_error("stats config: unknown producer for \"" + name + "\"");
                s.producible_by = producer;
            }
        }
        if (s.max_hp < 1) throw std::runtime_error("stats config: max_hp must be >= 1 for " + name);
        if (s.cost < 0) throw std::runtime_error("stats config: cost must be >= 0 for " + name);
        if (s.attack_range > 3)
            throw std::runtime_error("stats config: attack_range must be <= 3 for " + name);
        if (s.can_attack() && s.attack_range < 1)
            throw std::runtime_error("stats config: attack_range must be >= 1 for " + name);
    }
    return table;
}

inline StatsTable load_stats_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("stats config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return stats_from_json_text(buf.str());
}

}  // namespace rtsplan
