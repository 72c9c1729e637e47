#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "rtsplan/state.hpp"

namespace rtsplan {

// Grid BFS with units (and produce reservations) as obstacles. Neighbor
// expansion order is north, east, south, west, which makes path choice and
// tie-breaking deterministic. Paths are recomputed every tick by callers.
class PathFinder {
public:
    explicit PathFinder(const GameState& s) : state_(s) {}

    // First move direction on a shortest path from `from` to any goal cell.
    // Goal cells must themselves be standable (free). Returns nullopt when
    // `from` already satisfies a goal or no goal is reachable.
    std::optional<Direction> first_step(Position from, const std::vector<Position>& goals) const {
        const int w = state_.width();
        const int h = state_.height();
        std::vector<std::uint8_t> goal_mask(static_cast<size_t>(w) * h, 0);
        bool any_goal = false;
        for (Position g : goals) {
            if (!state_.in_bounds(g)) continue;
            if (g == from) return std::nullopt;
            if (!state_.cell_free(g)) continue;
            goal_mask[idx(g)] = 1;
            any_goal = true;
        }
        if (!any_goal) return std::nullopt;

        std::vector<std::int8_t> first_dir(static_cast<size_t>(w) * h, -1);
        std::vector<std::uint8_t> seen(static_cast<size_t>(w) * h, 0);
        std::deque<Position> queue;
        seen[idx(from)] = 1;
        queue.push_back(from);
        while (!queue.empty()) {
            Position cur = queue.front();
            queue.pop_front();
            for (Direction d : all_directions) {
                Position next = step_towards(cur, d);
                if (!state_.in_bounds(next) || seen[idx(next)]) continue;
                seen[idx(next)] = 1;
                if (!state_.cell_free(next)) continue;
                std::int8_t dir0 = cur == from ? static_cast<std::int8_t>(d) : first_dir[idx(cur)];
                first_dir[idx(next)] = dir0;
                if (goal_mask[idx(next)]) return static_cast<Direction>(dir0);
                queue.push_back(next);
            }
        }
        return std::nullopt;
    }

    // Free cells orthogonally adjacent to `p`.
    std::vector<Position> free_neighbors(Position p) const {
        std::vector<Position> out;
        for (Direction d : all_directions) {
            Position n = step_towards(p, d);
            if (state_.cell_free(n)) out.push_back(n);
        }
        return out;
    }

    // Free cells from which `attacker` could attack a unit standing at `target`.
    std::vector<Position> attack_positions(const UnitStats& attacker, Position target) const {
        std::vector<Position> out;
        int r = attacker.attack_range;
        for (int dy = -r; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
                if (dx == 0 && dy == 0) continue;
                if (dx * dx + dy * dy > r * r) continue;
                Position p{target.x + dx, target.y + dy};
                if (state_.cell_free(p)) out.push_back(p);
            }
        }
        return out;
    }

private:
    size_t idx(Position p) const { return static_cast<size_t>(p.y) * state_.width() + p.x; }

    const GameState& state_;
};

}  // namespace rtsplan
