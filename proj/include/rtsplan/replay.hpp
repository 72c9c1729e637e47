#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtsplan/engine.hpp"
#include "rtsplan/map.hpp"

namespace rtsplan {

struct ReplayError : std::runtime_error {
    long last_valid_tick;
    ReplayError(const std::string& msg, long tick)
        : std::runtime_error(msg + " (last valid tick " + std::to_string(tick) + ")"),
          last_valid_tick(tick) {}
};

namespace replay_detail {

inline nlohmann::json sparse_actions(const ActionVector& v) {
    nlohmann::json out = nlohmann::json::array();
    for (size_t i = 0; i < v.cells.size(); ++i) {
        if (v.cells[i].type == ActionType::Noop) continue;
        out.push_back(nlohmann::json::array(
            {i, pre_one_hot_row(v.cells[i])}));
    }
    return out;
}

inline ActionVector actions_from_sparse(const nlohmann::json& j, int w, int h) {
    ActionVector v(w, h);
    for (const auto& cell : j) {
        size_t index = cell.at(0).get<size_t>();
        std::array<int, 7> row = cell.at(1).get<std::array<int, 7>>();
        if (index >= v.cells.size()) throw std::runtime_error("replay: cell index out of range");
        v.cells[index] = action_from_row(row);
    }
    return v;
}

inline nlohmann::json event_to_json(const Event& e) {
    return nlohmann::json{{"kind", event_kind_name(e.kind)},
                          {"unit", e.unit},
                          {"x", e.pos.x},
                          {"y", e.pos.y},
                          {"amount", e.amount},
                          {"detail", e.detail}};
}

inline nlohmann::json counters_to_json(const MatchCounters& c) {
    return nlohmann::json{{"resources_harvested", c.resources_harvested},
                          {"resources_spent", c.resources_spent},
                          {"unit_production", c.unit_production},
                          {"damage_dealt", c.damage_dealt},
                          {"damage_taken", c.damage_taken}};
}

inline MatchCounters counters_from_json(const nlohmann::json& j) {
    MatchCounters c;
    c.resources_harvested = j.at("resources_harvested").get<std::int64_t>();
    c.resources_spent = j.at("resources_spent").get<std::int64_t>();
    c.unit_production = j.at("unit_production").get<std::int64_t>();
    c.damage_dealt = j.at("damage_dealt").get<std::int64_t>();
    c.damage_taken = j.at("damage_taken").get<std::int64_t>();
    return c;
}

}  // namespace replay_detail

// Line-delimited match log: a header record, one record per tick (both action
// vectors pre one-hot, the engine events, and the post-step state hash), and
// a final result record. Appended as the match runs so a crash leaves a
// truncated but parseable prefix.
class ReplayWriter {
public:
    ReplayWriter() = default;

    void open(const std::string& path, const std::string& map_text, const StatsTable& stats,
              std::uint64_t seed, const std::vector<std::string>& agents, int k, long max_ticks) {
        out_.open(path, std::ios::trunc);
        if (!out_) throw std::runtime_error("replay: cannot open " + path + " for writing");
        path_ = path;
        nlohmann::json header{{"type", "header"}, {"version", 1},      {"map", map_text},
                              {"stats", stats_to_json(stats)},         {"seed", seed},
                              {"agents", agents}, {"k", k},            {"max_ticks", max_ticks}};
        out_ << header.dump() << "\n";
        out_.flush();
    }

    bool is_open() const { return out_.is_open(); }
    const std::string& path() const { return path_; }

    void record_tick(long tick, const ActionVector& a0, const ActionVector& a1,
                     const std::vector<Event>& events, std::uint64_t hash_after) {
        if (!out_) return;
        nlohmann::json evs = nlohmann::json::array();
        for (const Event& e : events) evs.push_back(replay_detail::event_to_json(e));
        nlohmann::json rec{{"type", "tick"},
                           {"t", tick},
                           {"a0", replay_detail::sparse_actions(a0)},
                           {"a1", replay_detail::sparse_actions(a1)},
                           {"events", evs},
                           {"hash", hash_hex(hash_after)}};
        out_ << rec.dump() << "\n";
    }

    void record_trace(const nlohmann::json& trace) {
        if (!out_) return;
        nlohmann::json rec = trace;
        rec["type"] = "trace";
        out_ << rec.dump() << "\n";
    }

    void record_result(int winner, long game_time, const MatchCounters& c0,
                       const MatchCounters& c1) {
        if (!out_) return;
        nlohmann::json rec{{"type", "result"},
                           {"winner", winner},  // 0, 1, or -1 for a draw
                           {"game_time", game_time},
                           {"counters", nlohmann::json::array({replay_detail::counters_to_json(c0),
                                                               replay_detail::counters_to_json(c1)})}};
        out_ << rec.dump() << "\n";
        out_.flush();
    }

private:
    std::ofstream out_;
    std::string path_;
};

struct ReplayTick {
    long tick = 0;
    ActionVector a0;
    ActionVector a1;
    std::string hash;
};

struct Replay {
    std::string map_text;
    StatsTable stats;
    std::uint64_t seed = 0;
    std::vector<std::string> agents;
    int k = 0;
    long max_ticks = 0;
    std::vector<ReplayTick> ticks;
    bool has_result = false;
    int winner = -1;
    long game_time = 0;
    MatchCounters counters[2];
};

// Parses a replay file, insisting on a header, consecutive tick records and
// (when present) a final result. Corruption raises ReplayError carrying the
// last tick that parsed cleanly.
inline Replay load_replay(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("replay: cannot open " + path);
    Replay replay;
    std::string line;
    long last_valid = -1;
    bool header_seen = false;
    int width = 0, height = 0;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
            throw ReplayError("replay: corrupt record at line " + std::to_string(lineno),
                              last_valid);
        }
        try {
            std::string type = rec.at("type").get<std::string>();
            if (type == "header") {
                replay.map_text = rec.at("map").get<std::string>();
                replay.stats = stats_from_json_text(rec.at("stats").dump());
                replay.seed = rec.at("seed").get<std::uint64_t>();
                replay.agents = rec.at("agents").get<std::vector<std::string>>();
                replay.k = rec.at("k").get<int>();
                replay.max_ticks = rec.at("max_ticks").get<long>();
                GameState probe = load_map_text(replay.map_text, replay.stats);
                width = probe.width();
                height = probe.height();
                header_seen = true;
            } else if (type == "tick") {
                if (!header_seen) throw std::runtime_error("tick before header");
                ReplayTick t;
                t.tick = rec.at("t").get<long>();
                if (t.tick != static_cast<long>(replay.ticks.size()))
                    throw std::runtime_error("non-consecutive tick");
                t.a0 = replay_detail::actions_from_sparse(rec.at("a0"), width, height);
                t.a1 = replay_detail::actions_from_sparse(rec.at("a1"), width, height);
                t.hash = rec.at("hash").get<std::string>();
                replay.ticks.push_back(std::move(t));
                last_valid = replay.ticks.back().tick;
            } else if (type == "result") {
                replay.has_result = true;
                replay.winner = rec.at("winner").get<int>();
                replay.game_time = rec.at("game_time").get<long>();
                replay.counters[0] = replay_detail::counters_from_json(rec.at("counters").at(0));
                replay.counters[1] = replay_detail::counters_from_json(rec.at("counters").at(1));
            }
            // Unknown record types (traces, transcripts) are skipped.
        } catch (const ReplayError&) {
            throw;
        } catch (const std::exception& e) {
            throw ReplayError("replay: bad record at line " + std::to_string(lineno) + ": " +
                                  e.what(),
                              last_valid);
        }
    }
    if (!header_seen) throw ReplayError("replay: missing header", -1);
    if (!replay.has_result)
        throw ReplayError("replay: truncated before result record", last_valid);
    return replay;
}

struct VerifyReport {
    bool ok = false;
    long ticks_checked = 0;
    std::string message;
};

// Re-simulates the recorded action streams from the embedded map and checks
// every per-tick state hash plus the final counters.
inline VerifyReport verify_replay(const Replay& replay) {
    VerifyReport report;
    GameState state = load_map_text(replay.map_text, replay.stats);
    for (const ReplayTick& t : replay.ticks) {
        step(state, t.a0, t.a1);
        if (hash_hex(state_hash(state)) != t.hash) {
            report.message = "state hash diverged at tick " + std::to_string(t.tick);
            return report;
        }
        ++report.ticks_checked;
    }
    if (replay.has_result) {
        if (state.tick() != replay.game_time) {
            report.message = "game_time mismatch";
            return report;
        }
        for (PlayerId p : {0, 1}) {
            if (!(state.counters(p) == replay.counters[p])) {
                report.message = "final counters mismatch for player " + std::to_string(p);
                return report;
            }
        }
    }
    report.ok = true;
    report.message = "ok";
    return report;
}

}  // namespace rtsplan
