#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rtsplan {

using UnitId = std::int32_t;
inline constexpr UnitId kInvalidUnit = -1;

// Player 0 is the red side, player 1 the blue side. Neutral owns mineral fields.
using PlayerId = int;
inline constexpr int kNeutralOwner = -1;

inline PlayerId opponent_of(PlayerId p) { return 1 - p; }

inline std::string side_name(PlayerId p) { return p == 0 ? "RED" : "BLUE"; }

// Order matches the produce-type encoding and the unit-type observation planes.
enum class UnitKind : std::uint8_t {
    Resource = 0,
    Base = 1,
    Barrack = 2,
    Worker = 3,
    Light = 4,
    Heavy = 5,
    Ranged = 6,
};
inline constexpr int kUnitKindCount = 7;

inline constexpr std::array<UnitKind, kUnitKindCount> all_unit_kinds = {
    UnitKind::Resource, UnitKind::Base,  UnitKind::Barrack, UnitKind::Worker,
    UnitKind::Light,    UnitKind::Heavy, UnitKind::Ranged,
};

inline std::string_view kind_name(UnitKind k) {
    switch (k) {
        case UnitKind::Resource: return "resource";
        case UnitKind::Base: return "base";
        case UnitKind::Barrack: return "barrack";
        case UnitKind::Worker: return "worker";
        case UnitKind::Light: return "light";
        case UnitKind::Heavy: return "heavy";
        case UnitKind::Ranged: return "ranged";
    }
    return "?";
}

inline std::optional<UnitKind> kind_from_name(std::string_view s) {
    for (UnitKind k : all_unit_kinds) {
        if (s == kind_name(k)) return k;
    }
    // Accept the plural-ish spelling used by some rule sets.
    if (s == "barracks") return UnitKind::Barrack;
    return std::nullopt;
}

// Order matches the move/harvest/return/produce direction encoding.
enum class Direction : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };
inline constexpr std::array<Direction, 4> all_directions = {
    Direction::North, Direction::East, Direction::South, Direction::West};

inline std::string_view dir_name(Direction d) {
    switch (d) {
        case Direction::North: return "north";
        case Direction::East: return "east";
        case Direction::South: return "south";
        case Direction::West: return "west";
    }
    return "?";
}

inline std::optional<Direction> dir_from_name(std::string_view s) {
    for (Direction d : all_directions) {
        if (s == dir_name(d)) return d;
    }
    return std::nullopt;
}

struct Position {
    int x = 0;
    int y = 0;

    bool operator==(const Position&) const = default;
    auto operator<=>(const Position&) const = default;
};

inline Position step_towards(Position p, Direction d) {
    switch (d) {
        case Direction::North: return {p.x, p.y - 1};
        case Direction::East: return {p.x + 1, p.y};
        case Direction::South: return {p.x, p.y + 1};
        case Direction::West: return {p.x - 1, p.y};
    }
    return p;
}

// Direction from `from` to an orthogonally adjacent `to`, if any.
inline std::optional<Direction> direction_between(Position from, Position to) {
    for (Direction d : all_directions) {
        if (step_towards(from, d) == to) return d;
    }
    return std::nullopt;
}

inline int manhattan(Position a, Position b) {
    int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
    int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
    return dx + dy;
}

inline std::string pos_str(Position p) {
    return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
}

}  // namespace rtsplan
