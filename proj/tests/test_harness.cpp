#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "support.hpp"

using namespace rtsplan;
using namespace rtsplan::test;

namespace {

std::string fixture_path(const std::string& rel) {
    return std::string(RTSPLAN_SOURCE_DIR) + "/data/" + rel;
}

std::string temp_dir(const std::string& name) {
    auto path = std::filesystem::temp_directory_path() / "rtsplan_tests" / name;
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
    return path.string();
}

MatchConfig base_config() {
    MatchConfig cfg;
    cfg.map_text = kBasesWorkers8x8;
    return cfg;
}

std::vector<std::string> hash_sequence(const MatchConfig& cfg) {
    std::vector<std::string> hashes;
    MatchConfig with_observer = cfg;
    run_match(with_observer, [&](const GameState& s, const ActionVector&, const ActionVector&) {
        hashes.push_back(hash_hex(state_hash(s)));
    });
    return hashes;
}

}  // namespace

TEST_CASE("score maps outcomes to +1/0/-1 and is antisymmetric") {
    MatchResult win0;
    win0.winner = 0;
    MatchResult draw;
    draw.winner = -1;
    MatchResult win1;
    win1.winner = 1;
    CHECK(score(win0, 0) == 1);
    CHECK(score(win0, 1) == -1);
    CHECK(score(draw, 0) == 0);
    CHECK(score(draw, 1) == 0);
    CHECK(score(win1, 1) == 1);
    for (const MatchResult& r : {win0, draw, win1}) CHECK(score(r, 0) == -score(r, 1));
}

TEST_CASE("metrics formulas are exact") {
    MatchResult result;
    result.winner = 0;
    result.game_time = 2000;
    result.counters[0].resources_harvested = 40;
    result.counters[0].resources_spent = 30;
    result.counters[0].unit_production = 25;
    result.counters[0].damage_dealt = 12;
    result.counters[0].damage_taken = 8;
    MetricsReport report = compute_metrics(result);
    CHECK(report.per_player[0].rhr == 2.0);
    CHECK(report.per_player[0].rur == 1.5);
    CHECK(report.per_player[0].upr == 1.25);
    REQUIRE(report.per_player[0].cer.has_value());
    CHECK(*report.per_player[0].cer == 1.5);

    SECTION("shorter game") {
        result.game_time = 1000;
        MetricsReport r2 = compute_metrics(result);
        CHECK(r2.per_player[0].rur == 3.0);
        CHECK(r2.per_player[0].upr == 2.5);
    }
    SECTION("zero game time is an error") {
        result.game_time = 0;
        CHECK_THROWS_AS(compute_metrics(result), std::invalid_argument);
    }
    SECTION("zero damage taken reports the sentinel") {
        CHECK_FALSE(report.per_player[1].cer.has_value());
        CHECK(report.per_player[1].damage_dealt == 0);
    }
}

TEST_CASE("max_ticks zero is an immediate draw") {
    MatchConfig cfg = base_config();
    cfg.max_ticks = 0;
    MatchResult result = run_match(cfg);
    CHECK(result.winner == -1);
    CHECK(result.game_time == 0);
}

TEST_CASE("matches are deterministic and replays verify") {
    MatchConfig cfg = base_config();
    cfg.agents = {"WorkerRush", "RandomBiasedAI"};
    cfg.seed = 7;
    cfg.max_ticks = 2000;
    auto h1 = hash_sequence(cfg);
    auto h2 = hash_sequence(cfg);
    CHECK(h1 == h2);
    REQUIRE_FALSE(h1.empty());

    cfg.output_dir = temp_dir("det_match");
    MatchResult result = run_match(cfg);
    REQUIRE_FALSE(result.replay_path.empty());
    Replay replay = load_replay(result.replay_path);
    CHECK(replay.ticks.size() == static_cast<size_t>(result.game_time));
    VerifyReport report = verify_replay(replay);
    INFO(report.message);
    CHECK(report.ok);
    CHECK(replay.counters[0] == result.counters[0]);
    CHECK(replay.counters[1] == result.counters[1]);
}

TEST_CASE("mock plap match harvests, produces and attacks deterministically") {
    MatchConfig cfg = base_config();
    cfg.agents = {std::string("mock:") + fixture_path("fixtures/mock_plan_basic.txt"),
                  "Passive"};
    cfg.max_ticks = 500;
    bool attack_seen = false;
    MatchResult result = run_match(
        cfg, [&](const GameState& s, const ActionVector& a0, const ActionVector&) {
            for (const auto& a : a0.cells)
                if (a.type == ActionType::Attack) attack_seen = true;
        });
    CHECK(result.counters[0].resources_harvested > 0);
    CHECK(result.counters[0].unit_production >= 1);
    CHECK(attack_seen);
    CHECK(result.planning_events[0] == 5);  // ticks 0, 100, 200, 300, 400
}

TEST_CASE("tournament schedules both side assignments with derived seeds") {
    auto schedule = tournament_schedule(8, 5, 42);
    CHECK(schedule.size() == 8 * 7 / 2 * 2 * 5);
    std::map<size_t, int> per_agent;
    for (const auto& m : schedule) {
        per_agent[m.red] += 1;
        per_agent[m.blue] += 1;
    }
    for (const auto& [agent, count] : per_agent) CHECK(count == 70);

    auto two = tournament_schedule(2, 1, 0);
    CHECK(two.size() == 2);
    CHECK(two[0].red != two[1].red);
}

TEST_CASE("tournament aggregates scores and runs parallel equal to serial") {
    TournamentConfig cfg;
    cfg.map_text = kBasesWorkers8x8;
    cfg.agents = {"WorkerRush", "RandomBiasedAI", "Passive"};
    cfg.rounds = 1;
    cfg.max_ticks = 400;
    cfg.root_seed = 5;
    cfg.jobs = 1;
    TournamentResult serial = run_tournament(cfg);
    cfg.jobs = 4;
    TournamentResult parallel = run_tournament(cfg);

    REQUIRE(serial.leaderboard.size() == 3);
    CHECK(serial.leaderboard[0].agent == "WorkerRush");
    for (size_t i = 0; i < serial.leaderboard.size(); ++i) {
        CHECK(serial.leaderboard[i].agent == parallel.leaderboard[i].agent);
        CHECK(serial.leaderboard[i].scores == parallel.leaderboard[i].scores);
        CHECK(serial.leaderboard[i].wr == parallel.leaderboard[i].wr);
        CHECK(serial.leaderboard[i].rhr == parallel.leaderboard[i].rhr);
    }
    for (const auto& rec : serial.matches) {
        CHECK(rec.result.game_time <= 400);
        CHECK(score(rec.result, 0) == -score(rec.result, 1));
    }
}

TEST_CASE("tournament rejects bad configurations before running") {
    TournamentConfig cfg;
    cfg.map_text = kBasesWorkers8x8;
    cfg.agents = {"WorkerRush"};
    CHECK_THROWS_AS(run_tournament(cfg), std::invalid_argument);
    cfg.agents = {"WorkerRush", "NoSuchBot"};
    CHECK_THROWS_AS(run_tournament(cfg), std::invalid_argument);
}

TEST_CASE("qa probe grades by numeric token match") {
    std::vector<QaItem> items = {{"How many time units does it take to build the Base?", "250"},
                                 {"How many hit points of the Barrack?", "4"}};
    SECTION("a knowledgeable mock gets full marks") {
        QueryFn oracle = [](const PromptContext& ctx) -> std::string {
            if (ctx.prompt.find("Base") != std::string::npos)
                return "It takes 250 time units to build.";
            return "The barrack has 4 hit points.";
        };
        CHECK(qa_probe(items, oracle) == 1.0);
    }
    SECTION("a silent mock scores zero") {
        QueryFn silent = [](const PromptContext&) { return std::string(); };
        CHECK(qa_probe(items, silent) == 0.0);
    }
    SECTION("partial credit") {
        QueryFn half = [](const PromptContext& ctx) -> std::string {
            if (ctx.prompt.find("Base") != std::string::npos) return "roughly 250";
            return "maybe 7?";
        };
        CHECK(qa_probe(items, half) == 0.5);
    }
}

TEST_CASE("shipped question file has ten graded items") {
    auto items = load_questions(fixture_path("qa/questions.json"));
    REQUIRE(items.size() == 10);
    // The engine's own stats answer the first five questions.
    StatsTable stats = default_stats();
    CHECK(items[0].answer == std::to_string(stats.of(UnitKind::Base).build_time));
    CHECK(items[1].answer == std::to_string(stats.of(UnitKind::Barrack).max_hp));
    CHECK(items[2].answer == std::to_string(stats.of(UnitKind::Light).cost));
    CHECK(items[3].answer == std::to_string(stats.of(UnitKind::Light).build_time));
    CHECK(items[4].answer == std::to_string(stats.of(UnitKind::Ranged).attack_damage));

    QueryFn oracle = [&](const PromptContext& ctx) -> std::string {
        for (const QaItem& item : items)
            if (ctx.prompt == item.question) return "The answer is " + item.answer + ".";
        return "";
    };
    CHECK(qa_probe(items, oracle) == 1.0);
}

TEST_CASE("shipped stats config matches the built-in defaults") {
    StatsTable loaded = load_stats_file(fixture_path("config/unit_stats.json"));
    CHECK(loaded == default_stats());
}

TEST_CASE("plap agents write transcripts per planning event") {
    MatchConfig cfg = base_config();
    cfg.agents = {std::string("mock:") + fixture_path("fixtures/mock_plan_basic.txt"),
                  "Passive"};
    cfg.max_ticks = 250;
    cfg.k = 100;
    cfg.output_dir = temp_dir("transcripts");
    MatchResult result = run_match(cfg);
    CHECK(result.transcript_paths.size() == 3);  // ticks 0, 100, 200
    for (const std::string& path : result.transcript_paths) {
        CHECK(std::filesystem::exists(path));
        nlohmann::json doc = nlohmann::json::parse(read_text_file(path));
        CHECK(doc.at("prompt").get<std::string>().find("## Battlefield Situation") !=
              std::string::npos);
    }
}
