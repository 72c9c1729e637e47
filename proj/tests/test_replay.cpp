#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "support.hpp"

using namespace rtsplan;
using namespace rtsplan::test;

namespace {

std::string temp_dir(const std::string& name) {
    auto path = std::filesystem::temp_directory_path() / "rtsplan_replay" / name;
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
    return path.string();
}

MatchResult run_recorded(const std::string& dir, long max_ticks) {
    MatchConfig cfg;
    cfg.map_text = kBasesWorkers8x8;
    cfg.agents = {"RandomBiasedAI", "RandomBiasedAI"};
    cfg.seed = 31;
    cfg.max_ticks = max_ticks;
    cfg.output_dir = dir;
    return run_match(cfg);
}

}  // namespace

TEST_CASE("a 200-tick match writes 200 tick records plus header and result") {
    std::string dir = temp_dir("counting");
    MatchResult result = run_recorded(dir, 200);
    REQUIRE(result.game_time == 200);  // random self-play never ends that fast

    std::ifstream in(result.replay_path);
    std::string line;
    int headers = 0, ticks = 0, results = 0;
    while (std::getline(in, line)) {
        auto doc = nlohmann::json::parse(line);
        std::string type = doc.at("type").get<std::string>();
        headers += type == "header";
        ticks += type == "tick";
        results += type == "result";
    }
    CHECK(headers == 1);
    CHECK(ticks == 200);
    CHECK(results == 1);
}

TEST_CASE("re-simulating the recorded streams reproduces the counters") {
    std::string dir = temp_dir("resim");
    MatchResult result = run_recorded(dir, 300);
    Replay replay = load_replay(result.replay_path);

    GameState state = load_map_text(replay.map_text, replay.stats);
    for (const ReplayTick& t : replay.ticks) step(state, t.a0, t.a1);
    CHECK(state.tick() == result.game_time);
    CHECK(state.counters(0) == result.counters[0]);
    CHECK(state.counters(1) == result.counters[1]);

    VerifyReport report = verify_replay(replay);
    INFO(report.message);
    CHECK(report.ok);
}

TEST_CASE("verification catches a tampered hash") {
    std::string dir = temp_dir("tamper");
    MatchResult result = run_recorded(dir, 150);
    Replay replay = load_replay(result.replay_path);
    replay.ticks[40].hash[0] = replay.ticks[40].hash[0] == '0' ? '1' : '0';
    VerifyReport report = verify_replay(replay);
    CHECK_FALSE(report.ok);
    CHECK(report.message.find("diverged at tick 40") != std::string::npos);
}

TEST_CASE("truncated replays report the last valid tick") {
    std::string dir = temp_dir("truncate");
    MatchResult result = run_recorded(dir, 150);

    // Keep the header and the first 57 tick records (t = 0..56).
    std::ifstream in(result.replay_path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    in.close();
    std::string cut_path = dir + "/cut.jsonl";
    {
        std::ofstream out(cut_path);
        for (size_t i = 0; i < 58 && i < lines.size(); ++i) out << lines[i] << "\n";
    }
    try {
        load_replay(cut_path);
        FAIL("expected ReplayError");
    } catch (const ReplayError& e) {
        CHECK(e.last_valid_tick == 56);
        CHECK(std::string(e.what()).find("56") != std::string::npos);
    }

    // A corrupt line in the middle also reports the last clean tick.
    std::string garbled_path = dir + "/garbled.jsonl";
    {
        std::ofstream out(garbled_path);
        for (size_t i = 0; i < 30; ++i) out << lines[i] << "\n";
        out << "{this is not json\n";
    }
    try {
        load_replay(garbled_path);
        FAIL("expected ReplayError");
    } catch (const ReplayError& e) {
        CHECK(e.last_valid_tick == 28);  // header + 29 ticks kept, t = 0..28
    }
}
