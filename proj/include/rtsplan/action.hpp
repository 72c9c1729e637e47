#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtsplan/types.hpp"

namespace rtsplan {

// Order matches the action-type encoding and the current-action observation planes.
enum class ActionType : std::uint8_t {
    Noop = 0,
    Move = 1,
    Harvest = 2,
    Return = 3,
    Produce = 4,
    Attack = 5,
};

inline std::string_view action_type_name(ActionType t) {
    switch (t) {
        case ActionType::Noop: return "noop";
        case ActionType::Move: return "move";
        case ActionType::Harvest: return "harvest";
        case ActionType::Return: return "return";
        case ActionType::Produce: return "produce";
        case ActionType::Attack: return "attack";
    }
    return "?";
}

// The attack parameter addresses a cell in a 7x7 window centered on the
// acting unit: offset = (dy + 3) * 7 + (dx + 3).
inline constexpr int kAttackWindow = 7;
inline constexpr int kAttackCells = kAttackWindow * kAttackWindow;

inline int attack_offset_from_delta(int dx, int dy) {
    return (dy + kAttackWindow / 2) * kAttackWindow + (dx + kAttackWindow / 2);
}

inline std::pair<int, int> attack_delta_from_offset(int offset) {
    return {offset % kAttackWindow - kAttackWindow / 2, offset / kAttackWindow - kAttackWindow / 2};
}

// One atomic per-unit command. Fields irrelevant to the action type stay zero,
// so equality and the one-hot encoding agree.
struct AtomicAction {
    ActionType type = ActionType::Noop;
    Direction dir = Direction::North;          // move / harvest / return / produce
    UnitKind produce_kind = UnitKind::Resource;  // produce
    std::uint8_t attack_offset = 0;              // attack

    bool operator==(const AtomicAction&) const = default;

    static AtomicAction noop() { return {}; }
    static AtomicAction move(Direction d) { return {ActionType::Move, d, UnitKind::Resource, 0}; }
    static AtomicAction harvest(Direction d) {
        return {ActionType::Harvest, d, UnitKind::Resource, 0};
    }
    static AtomicAction deposit(Direction d) {
        return {ActionType::Return, d, UnitKind::Resource, 0};
    }
    static AtomicAction produce(UnitKind kind, Direction d) {
        return {ActionType::Produce, d, kind, 0};
    }
    static AtomicAction attack(int offset) {
        return {ActionType::Attack, Direction::North, UnitKind::Resource,
                static_cast<std::uint8_t>(offset)};
    }
    static AtomicAction attack_delta(int dx, int dy) {
        return attack(attack_offset_from_delta(dx, dy));
    }
};

inline std::string action_str(const AtomicAction& a) {
    switch (a.type) {
        case ActionType::Noop: return "noop";
        case ActionType::Move: return "move " + std::string(dir_name(a.dir));
        case ActionType::Harvest: return "harvest " + std::string(dir_name(a.dir));
        case ActionType::Return: return "return " + std::string(dir_name(a.dir));
        case ActionType::Produce:
            return "produce " + std::string(kind_name(a.produce_kind)) + " " +
                   std::string(dir_name(a.dir));
        case ActionType::Attack: {
            auto [dx, dy] = attack_delta_from_offset(a.attack_offset);
            return "attack (" + std::to_string(dx) + "," + std::to_string(dy) + ")";
        }
    }
    return "?";
}

// Sizes of the seven one-hot groups of one cell's action encoding:
// type, move dir, harvest dir, return dir, produce dir, produce type, attack cell.
inline constexpr std::array<int, 7> kActionGroupSizes = {6, 4, 4, 4, 4, 7, kAttackCells};
inline constexpr int kActionEncodingWidth = 6 + 4 + 4 + 4 + 4 + 7 + kAttackCells;  // 78

// Per-player action assignment for one tick: one atomic action per cell,
// NOOP everywhere a unit is not being commanded.
struct ActionVector {
    int width = 0;
    int height = 0;
    std::vector<AtomicAction> cells;

    ActionVector() = default;
    ActionVector(int w, int h) : width(w), height(h), cells(static_cast<size_t>(w) * h) {}

    size_t index(int x, int y) const { return static_cast<size_t>(y) * width + x; }
    AtomicAction& at(int x, int y) { return cells[index(x, y)]; }
    const AtomicAction& at(int x, int y) const { return cells[index(x, y)]; }

    bool all_noop() const {
        for (const auto& a : cells)
            if (a.type != ActionType::Noop) return false;
        return true;
    }

    bool operator==(const ActionVector&) const = default;
};

// The seven integer components of one cell, before one-hot expansion.
inline std::array<int, 7> pre_one_hot_row(const AtomicAction& a) {
    std::array<int, 7> row{};
    row[0] = static_cast<int>(a.type);
    switch (a.type) {
        case ActionType::Move: row[1] = static_cast<int>(a.dir); break;
        case ActionType::Harvest: row[2] = static_cast<int>(a.dir); break;
        case ActionType::Return: row[3] = static_cast<int>(a.dir); break;
        case ActionType::Produce:
            row[4] = static_cast<int>(a.dir);
            row[5] = static_cast<int>(a.produce_kind);
            break;
        case ActionType::Attack: row[6] = a.attack_offset; break;
        case ActionType::Noop: break;
    }
    return row;
}

inline std::vector<std::array<int, 7>> pre_one_hot_rows(const ActionVector& v) {
    std::vector<std::array<int, 7>> rows;
    rows.reserve(v.cells.size());
    for (const auto& a : v.cells) rows.push_back(pre_one_hot_row(a));
    return rows;
}

// Rebuilds the atomic action from one pre-one-hot row, normalizing components
// the action type does not use back to zero.
inline AtomicAction action_from_row(const std::array<int, 7>& row) {
    for (size_t g = 0; g < row.size(); ++g) {
        if (row[g] < 0 || row[g] >= kActionGroupSizes[g])
            throw std::invalid_argument("action_from_row: component " + std::to_string(g) +
                                        " out of range: " + std::to_string(row[g]));
    }
    AtomicAction a;
    a.type = static_cast<ActionType>(row[0]);
    switch (a.type) {
        case ActionType::Move: a.dir = static_cast<Direction>(row[1]); break;
        case ActionType::Harvest: a.dir = static_cast<Direction>(row[2]); break;
        case ActionType::Return: a.dir = static_cast<Direction>(row[3]); break;
        case ActionType::Produce:
            a.dir = static_cast<Direction>(row[4]);
            a.produce_kind = static_cast<UnitKind>(row[5]);
            break;
        case ActionType::Attack: a.attack_offset = static_cast<std::uint8_t>(row[6]); break;
        case ActionType::Noop: break;
    }
    return a;
}

// Flattens to the 78*w*h one-hot tensor: cells row-major, then per cell the
// seven groups in order, each with exactly one hot component.
inline std::vector<std::uint8_t> encode_action_vector(const ActionVector& v) {
    std::vector<std::uint8_t> out(static_cast<size_t>(kActionEncodingWidth) * v.cells.size(), 0);
    size_t base = 0;
    for (const auto& a : v.cells) {
        const auto row = pre_one_hot_row(a);
        size_t offset = base;
        for (size_t g = 0; g < row.size(); ++g) {
            if (row[g] < 0 || row[g] >= kActionGroupSizes[g])
                throw std::invalid_argument("encode_action_vector: component " + std::to_string(g) +
                                            " out of range: " + std::to_string(row[g]));
            out[offset + static_cast<size_t>(row[g])] = 1;
            offset += static_cast<size_t>(kActionGroupSizes[g]);
        }
        base += kActionEncodingWidth;
    }
    return out;
}

// Inverse of encode_action_vector. Rejects wrong lengths and multi-hot groups.
inline ActionVector decode_action_vector(const std::vector<std::uint8_t>& tensor, int w, int h) {
    const size_t expected = static_cast<size_t>(kActionEncodingWidth) * w * h;
    if (tensor.size() != expected)
        throw std::invalid_argument("decode_action_vector: tensor length " +
                                    std::to_string(tensor.size()) + ", expected " +
                                    std::to_string(expected));
    ActionVector v(w, h);
    size_t base = 0;
    for (size_t c = 0; c < v.cells.size(); ++c) {
        std::array<int, 7> row{};
        size_t offset = base;
        for (size_t g = 0; g < row.size(); ++g) {
            int hot = -1;
            for (int i = 0; i < kActionGroupSizes[g]; ++i) {
                if (!tensor[offset + static_cast<size_t>(i)]) continue;
                if (hot >= 0)
                    throw std::invalid_argument("decode_action_vector: multi-hot group " +
                                                std::to_string(g) + " at cell " + std::to_string(c));
                hot = i;
            }
            row[g] = hot < 0 ? 0 : hot;
            offset += static_cast<size_t>(kActionGroupSizes[g]);
        }
        v.cells[c] = action_from_row(row);
        base += kActionEncodingWidth;
    }
    return v;
}

}  // namespace rtsplan
