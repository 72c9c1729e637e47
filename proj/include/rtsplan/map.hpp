#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtsplan/state.hpp"

namespace rtsplan {

// Map documents are line-oriented text (format version 1, documented in the
// README):
//
//   # comment
//   version 1
//   size W H
//   stockpile <0|1> <amount>
//   unit <kind> <p0|p1|neutral> <x> <y> [resources]
//
// Units must not overlap and dimensions must be at least 2x2.
inline GameState load_map_text(const std::string& text, const StatsTable& stats) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int width = -1, height = -1;
    bool version_seen = false;
    struct PendingUnit {
        UnitKind kind;
        int owner;
        Position pos;
        int resources;
        int lineno;
    };
    std::vector<PendingUnit> pending;
    std::array<int, 2> stockpiles{0, 0};

    auto fail = [&](const std::string& msg) -> void {
        throw std::runtime_error("map: line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "version") {
            int v = 0;
            if (!(ls >> v) || v != 1) fail("unsupported map version");
            version_seen = true;
        } else if (tok == "size") {
            if (!(ls >> width >> height)) fail("size expects: size W H");
            if (width < 2 || height < 2) fail("map must be at least 2x2");
        } else if (tok == "stockpile") {
            int player = -1, amount = -1;
            if (!(ls >> player >> amount) || (player != 0 && player != 1) || amount < 0)
                fail("stockpile expects: stockpile <0|1> <amount>");
            stockpiles[static_cast<size_t>(player)] = amount;
        } else if (tok == "unit") {
            std::string kind_s, owner_s;
            int x = 0, y = 0, resources = 0;
            if (!(ls >> kind_s >> owner_s >> x >> y))
                fail("unit expects: unit <kind> <owner> <x> <y> [resources]");
            ls >> resources;
            auto kind = kind_from_name(kind_s);
            if (!kind) fail("unknown unit kind \"" + kind_s + "\"");
            int owner;
            if (owner_s == "p0")
                owner = 0;
            else if (owner_s == "p1")
                owner = 1;
            else if (owner_s == "neutral")
                owner = kNeutralOwner;
            else
                fail("owner must be p0, p1 or neutral");
            if ((*kind == UnitKind::Resource) != (owner == kNeutralOwner))
                fail("resource fields are neutral and nothing else is");
            pending.push_back({*kind, owner, {x, y}, resources, lineno});
        } else {
            fail("unknown directive \"" + tok + "\"");
        }
    }
    if (!version_seen) throw std::runtime_error("map: missing version line");
    if (width < 0) throw std::runtime_error("map: missing size line");

    GameState state(width, height, stats);
    state.set_resources(0, stockpiles[0]);
    state.set_resources(1, stockpiles[1]);
    for (const auto& pu : pending) {
        lineno = pu.lineno;
        if (!state.in_bounds(pu.pos)) fail("unit position out of bounds " + pos_str(pu.pos));
        if (state.unit_id_at(pu.pos) != kInvalidUnit)
            fail("two units share cell " + pos_str(pu.pos));
        state.add_unit(pu.kind, pu.owner, pu.pos,
                       pu.kind == UnitKind::Resource ? pu.resources : 0);
    }
    state.finalize_load();
    return state;
}

inline GameState load_map_file(const std::string& path, const StatsTable& stats) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("map: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return load_map_text(buf.str(), stats);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace rtsplan
