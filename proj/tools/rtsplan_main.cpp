// Command-line front end: single matches, round-robin tournaments, the
// environment-knowledge probe, replay verification and observation dumps.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rtsplan/llm_client.hpp"
#include "rtsplan/rtsplan.hpp"

namespace {

using namespace rtsplan;

StatsTable resolve_stats(const std::string& stats_path) {
    if (stats_path.empty()) return default_stats();
    return load_stats_file(stats_path);
}

// Lazy transport: the client is only constructed if a plap: agent actually
// queries, so offline runs never need credentials.
QueryFn make_live_query(const PlannerConfig& cfg) {
    auto shared_cfg = std::make_shared<PlannerConfig>(cfg);
    auto client = std::make_shared<std::unique_ptr<HttpChatClient>>();
    return [shared_cfg, client](const PromptContext& ctx) {
        if (!*client) *client = std::make_unique<HttpChatClient>(*shared_cfg);
        return (**client)(ctx);
    };
}

void print_match_result(const MatchResult& result) {
    if (result.winner < 0)
        std::cout << "result: draw";
    else
        std::cout << "result: player " << result.winner << " wins";
    std::cout << " after " << result.game_time << " ticks\n";
    MetricsReport metrics =
        result.game_time > 0 ? compute_metrics(result) : MetricsReport{};
    for (PlayerId p : {0, 1}) {
        const MatchCounters& c = result.counters[static_cast<size_t>(p)];
        const PlayerMetrics& m = metrics.per_player[static_cast<size_t>(p)];
        std::cout << "player " << p << ": harvested " << c.resources_harvested << ", spent "
                  << c.resources_spent << ", produced " << c.unit_production << ", dealt "
                  << c.damage_dealt << ", taken " << c.damage_taken;
        if (result.game_time > 0) {
            std::cout << " | RHR " << m.rhr << " RUR " << m.rur << " UPR " << m.upr << " CER ";
            if (m.cer)
                std::cout << *m.cer;
            else
                std::cout << "inf(dealt " << m.damage_dealt << ")";
        }
        std::cout << "\n";
    }
    if (!result.replay_path.empty()) std::cout << "replay: " << result.replay_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grid RTS simulation and skill-planning harness"};
    app.require_subcommand(1);

    std::string map_path = "data/maps/basesWorkers8x8.map";
    std::string stats_path;
    std::string model = "gpt-4o";
    std::string endpoint;
    int k = 100;
    long max_ticks = 2000;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--map", map_path, "map file")->capture_default_str();
        cmd->add_option("--stats", stats_path, "unit stats config (JSON)");
        cmd->add_option("--k", k, "planning interval in ticks")->capture_default_str();
        cmd->add_option("--max-ticks", max_ticks, "tick cap before a draw")
            ->capture_default_str();
        cmd->add_option("--model", model, "model name for plap agents")->capture_default_str();
        cmd->add_option("--endpoint", endpoint,
                        "chat-completion base URL (default $RTSPLAN_API_BASE)");
    };

    // --- match ---
    auto* match_cmd = app.add_subcommand("match", "run one match");
    std::string p0 = "WorkerRush", p1 = "RandomBiasedAI", out_dir;
    std::uint64_t seed = 0;
    bool verbose = false;
    add_common(match_cmd);
    match_cmd->add_option("--p0", p0, "player 0 agent spec")->capture_default_str();
    match_cmd->add_option("--p1", p1, "player 1 agent spec")->capture_default_str();
    match_cmd->add_option("--seed", seed, "match seed")->capture_default_str();
    match_cmd->add_option("--out", out_dir, "output directory (replay + transcripts)");
    match_cmd->add_flag("--verbose", verbose, "log per-tick events to stdout");

    // --- tournament ---
    auto* tour_cmd = app.add_subcommand("tournament", "round-robin tournament");
    std::vector<std::string> agents;
    int rounds = 5, jobs = 1;
    std::uint64_t root_seed = 42;
    std::string tour_out;
    bool save_replays = false;
    add_common(tour_cmd);
    tour_cmd->add_option("--agents", agents, "agent specs (comma separated)")
        ->required()
        ->delimiter(',');
    tour_cmd->add_option("--rounds", rounds, "matches per side assignment")
        ->capture_default_str();
    tour_cmd->add_option("--jobs", jobs, "parallel match workers")->capture_default_str();
    tour_cmd->add_option("--seed", root_seed, "root seed")->capture_default_str();
    tour_cmd->add_option("--out", tour_out, "output directory (results.json)");
    tour_cmd->add_flag("--save-replays", save_replays, "persist every match replay");

    // --- qa ---
    auto* qa_cmd = app.add_subcommand("qa", "environment-knowledge probe");
    std::string questions_path = "data/qa/questions.json";
    add_common(qa_cmd);
    qa_cmd->add_option("--questions", questions_path, "questions file")->capture_default_str();

    // --- replay verify ---
    auto* replay_cmd = app.add_subcommand("replay", "replay utilities");
    auto* verify_cmd = replay_cmd->add_subcommand("verify", "re-simulate and check a replay");
    std::string replay_path;
    verify_cmd->add_option("file", replay_path, "replay file")->required();

    // --- obs ---
    auto* obs_cmd = app.add_subcommand("obs", "print the textual observation of a map");
    int obs_player = 0;
    bool obs_tensor = false;
    add_common(obs_cmd);
    obs_cmd->add_option("--player", obs_player, "observing player")->capture_default_str();
    obs_cmd->add_flag("--tensor", obs_tensor, "dump the feature tensor as JSON lines");

    CLI11_PARSE(app, argc, argv);

    try {
        PlannerConfig planner;
        planner.model = model;
        planner.interval = k;
        planner.endpoint_base = endpoint;
        planner.examples_path = "data/prompts/few_shot_examples.txt";
        planner.tips_path = "data/prompts/tips.txt";

        if (match_cmd->parsed()) {
            MatchConfig cfg;
            cfg.map_path = map_path;
            cfg.agents = {p0, p1};
            cfg.k = k;
            cfg.max_ticks = max_ticks;
            cfg.seed = seed;
            cfg.output_dir = out_dir;
            cfg.stats = resolve_stats(stats_path);
            cfg.planner = planner;
            cfg.query_fn = make_live_query(planner);
            MatchResult result = run_match(cfg);
            print_match_result(result);
            if (verbose)
                std::cout << "planning events: p0=" << result.planning_events[0]
                          << " p1=" << result.planning_events[1]
                          << ", planner faults: p0=" << result.planner_faults[0]
                          << " p1=" << result.planner_faults[1] << "\n";
        } else if (tour_cmd->parsed()) {
            TournamentConfig cfg;
            cfg.agents = agents;
            cfg.map_path = map_path;
            cfg.rounds = rounds;
            cfg.k = k;
            cfg.max_ticks = max_ticks;
            cfg.root_seed = root_seed;
            cfg.jobs = jobs;
            cfg.output_dir = tour_out;
            cfg.save_replays = save_replays;
            cfg.stats = resolve_stats(stats_path);
            cfg.planner = planner;
            cfg.query_fn = make_live_query(planner);
            TournamentResult result = run_tournament(cfg);
            std::cout << format_leaderboard(result);
            if (!tour_out.empty()) std::cout << "results: " << tour_out << "/results.json\n";
        } else if (qa_cmd->parsed()) {
            auto items = load_questions(questions_path);
            QueryFn query = make_live_query(planner);
            std::vector<bool> per_item;
            double accuracy = qa_probe(items, query, &per_item);
            for (size_t i = 0; i < items.size(); ++i)
                std::cout << (per_item[i] ? "[ok]   " : "[miss] ") << items[i].question << "\n";
            std::cout << "accuracy: " << accuracy << " (" << items.size() << " questions)\n";
        } else if (verify_cmd->parsed()) {
            Replay replay = load_replay(replay_path);
            VerifyReport report = verify_replay(replay);
            std::cout << (report.ok ? "OK" : "FAIL") << ": " << report.message << " ("
                      << report.ticks_checked << " ticks checked)\n";
            return report.ok ? 0 : 1;
        } else if (obs_cmd->parsed()) {
            GameState state = load_map_file(map_path, resolve_stats(stats_path));
            if (obs_tensor)
                std::cout << dump_tensor_jsonl(build_tensor(state, obs_player));
            else
                std::cout << to_text(state, obs_player);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
