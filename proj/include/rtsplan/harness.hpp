#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rtsplan/bots.hpp"
#include "rtsplan/observation.hpp"
#include "rtsplan/planner.hpp"
#include "rtsplan/replay.hpp"

namespace rtsplan {

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t h = detail::fnv1a64_init();
    detail::fnv1a64_feed(h, root);
    detail::fnv1a64_feed(h, a);
    detail::fnv1a64_feed(h, b);
    detail::fnv1a64_feed(h, c);
    return h;
}

struct MatchConfig {
    std::string map_path;
    std::string map_text;  // wins over map_path when set
    std::array<std::string, 2> agents{"WorkerRush", "RandomBiasedAI"};
    int k = 100;
    long max_ticks = 2000;
    std::uint64_t seed = 0;
    std::string output_dir;  // empty: nothing persisted
    bool verbose = false;
    StatsTable stats = default_stats();
    PlannerConfig planner;
    QueryFn query_fn;  // transport for plap: agents; mock: agents bring their own
};

struct MatchResult {
    int winner = -1;  // 0, 1, or -1 for a draw
    long game_time = 0;
    std::array<MatchCounters, 2> counters{};
    std::string replay_path;
    std::vector<std::string> transcript_paths;
    std::array<int, 2> planner_faults{};
    std::array<long, 2> planning_events{};
};

inline int score(const MatchResult& result, PlayerId side) {
    if (result.winner < 0) return 0;
    return result.winner == side ? 1 : -1;
}

struct PlayerMetrics {
    double rhr = 0.0;
    double rur = 0.0;
    double upr = 0.0;
    std::optional<double> cer;  // undefined while damage_taken is zero
    std::int64_t damage_dealt = 0;
};

struct MetricsReport {
    std::array<PlayerMetrics, 2> per_player{};
};

// Rates are per 100 ticks of game time; CER is the dealt/taken ratio and is
// reported as an unset optional (with damage_dealt attached) when no damage
// was taken.
inline MetricsReport compute_metrics(const MatchResult& result) {
    if (result.game_time <= 0)
        throw std::invalid_argument("compute_metrics: rates undefined for game_time 0");
    MetricsReport report;
    for (PlayerId p : {0, 1}) {
        const MatchCounters& c = result.counters[static_cast<size_t>(p)];
        PlayerMetrics& m = report.per_player[static_cast<size_t>(p)];
        double t = static_cast<double>(result.game_time);
        m.rhr = static_cast<double>(c.resources_harvested) / t * 100.0;
        m.rur = static_cast<double>(c.resources_spent) / t * 100.0;
        m.upr = static_cast<double>(c.unit_production) / t * 100.0;
        m.damage_dealt = c.damage_dealt;
        if (c.damage_taken > 0)
            m.cer = static_cast<double>(c.damage_dealt) / static_cast<double>(c.damage_taken);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Agents

class Agent {
public:
    virtual ~Agent() = default;
    virtual ActionVector act(const GameState& state) = 0;
    virtual void post_step(const GameState& state) { (void)state; }
    const std::string& name() const { return name_; }
    virtual int planner_faults() const { return 0; }
    virtual long planning_events() const { return 0; }
    virtual std::vector<std::string> transcript_paths() const { return {}; }

protected:
    explicit Agent(std::string name) : name_(std::move(name)) {}

private:
    std::string name_;
};

enum class BotKind { RandomBiasedAI, WorkerRush, LightRush, Passive };

class BotAgent : public Agent {
public:
    BotAgent(std::string name, BotKind kind, PlayerId side, std::uint64_t seed)
        : Agent(std::move(name)), kind_(kind), side_(side), rng_(seed) {}

    ActionVector act(const GameState& state) override {
        switch (kind_) {
            case BotKind::RandomBiasedAI: return random_biased(state, side_, rng_);
            case BotKind::WorkerRush: return worker_rush(state, side_);
            case BotKind::LightRush: return light_rush(state, side_);
            case BotKind::Passive: return passive_bot(state);
        }
        return passive_bot(state);
    }

private:
    BotKind kind_;
    PlayerId side_;
    Rng rng_;
};

// The planner-executor loop for one side: every k ticks the planner is
// queried and the plan replaced; every tick the executor compiles the plan
// into an action vector; terminated entries are pruned after each step. A
// planner fault degrades to an empty plan and the match keeps running.
class PlapAgent : public Agent {
public:
    PlapAgent(std::string name, PlayerId side, PlannerConfig cfg, QueryFn query,
              const SkillRegistry& registry, std::string transcript_dir)
        : Agent(std::move(name)),
          side_(side),
          cfg_(std::move(cfg)),
          query_(std::move(query)),
          registry_(registry),
          transcript_dir_(std::move(transcript_dir)) {
        if (!query_) throw std::invalid_argument("plap agent: no planner transport configured");
        plan_.player = side_;
        // Surface template configuration errors before the match starts.
        if (variant_has_examples(cfg_.variant)) read_text_file(cfg_.examples_path);
        if (variant_has_tips(cfg_.variant)) read_text_file(cfg_.tips_path);
    }

    ActionVector act(const GameState& state) override {
        if (state.tick() % cfg_.interval == 0) replan(state);
        return plan_tick(registry_, plan_, state);
    }

    void post_step(const GameState& state) override { prune(registry_, plan_, state); }

    int planner_faults() const override { return faults_; }
    long planning_events() const override { return planning_events_; }
    std::vector<std::string> transcript_paths() const override { return transcripts_; }
    const SkillPlan& plan() const { return plan_; }

private:
    void replan(const GameState& state) {
        ++planning_events_;
        PromptDocument doc =
            build_prompt(to_text(state, side_), cfg_, side_, registry_, state.stats());
        std::string prompt = doc.to_string();
        std::string response;
        bool faulted = false;
        try {
            response = query_(PromptContext{prompt, state.tick(), side_});
        } catch (const std::exception&) {
            ++faults_;
            faulted = true;
        }
        ParseOutcome outcome = parse_plan(response, registry_, state, side_);
        plan_ = std::move(outcome.plan);
        persist_transcript(state.tick(), prompt, outcome.response, faulted);
    }

    void persist_transcript(long tick, const std::string& prompt, const RawResponse& raw,
                            bool faulted) {
        if (transcript_dir_.empty()) return;
        std::filesystem::create_directories(transcript_dir_);
        std::string path = transcript_dir_ + "/t" + std::to_string(tick) + "_p" +
                           std::to_string(side_) + ".json";
        nlohmann::json verdicts = nlohmann::json::array();
        for (const LineVerdict& v : raw.verdicts)
            verdicts.push_back(nlohmann::json{
                {"line", v.line}, {"accepted", v.accepted}, {"reason", v.reason}});
        nlohmann::json rec{{"tick", tick},         {"side", side_},   {"prompt", prompt},
                           {"response", raw.text}, {"faulted", faulted}, {"verdicts", verdicts}};
        std::ofstream out(path);
        out << rec.dump(2) << "\n";
        transcripts_.push_back(path);
    }

    PlayerId side_;
    PlannerConfig cfg_;
    QueryFn query_;
    const SkillRegistry& registry_;
    std::string transcript_dir_;
    SkillPlan plan_;
    int faults_ = 0;
    long planning_events_ = 0;
    std::vector<std::string> transcripts_;
};

// Agent specs: "RandomBiasedAI" | "WorkerRush" | "LightRush" | "Passive"
// | "plap:<zs|zs-tip|fs|fs-tip>[:model]" | "mock:<fixture path>". A "#label"
// suffix distinguishes multiple instances of one kind in a tournament.
inline std::unique_ptr<Agent> make_agent(const std::string& spec, PlayerId side,
                                         const MatchConfig& cfg, std::uint64_t seed) {
    std::string body = spec.substr(0, spec.find('#'));
    if (body == "RandomBiasedAI")
        return std::make_unique<BotAgent>(spec, BotKind::RandomBiasedAI, side, seed);
    if (body == "WorkerRush")
        return std::make_unique<BotAgent>(spec, BotKind::WorkerRush, side, seed);
    if (body == "LightRush")
        return std::make_unique<BotAgent>(spec, BotKind::LightRush, side, seed);
    if (body == "Passive") return std::make_unique<BotAgent>(spec, BotKind::Passive, side, seed);

    std::string transcript_dir =
        cfg.output_dir.empty() ? "" : cfg.output_dir + "/transcripts";
    if (body.rfind("mock:", 0) == 0) {
        PlannerConfig pc = cfg.planner;
        pc.interval = cfg.k;
        MockPlanner mock = MockPlanner::from_file(body.substr(5));
        return std::make_unique<PlapAgent>(spec, side, std::move(pc), mock,
                                           default_registry(), transcript_dir);
    }
    if (body.rfind("plap:", 0) == 0) {
        std::string rest = body.substr(5);
        std::string variant_s = rest;
        std::string model;
        if (auto colon = rest.find(':'); colon != std::string::npos) {
            variant_s = rest.substr(0, colon);
            model = rest.substr(colon + 1);
        }
        auto variant = variant_from_name(variant_s);
        if (!variant)
            throw std::invalid_argument("agent spec: unknown planner variant \"" + variant_s +
                                        "\"");
        PlannerConfig pc = cfg.planner;
        pc.variant = *variant;
        pc.interval = cfg.k;
        if (!model.empty()) pc.model = model;
        if (!cfg.query_fn)
            throw std::invalid_argument(
                "agent spec: plap agents need a planner transport (endpoint or injected mock)");
        return std::make_unique<PlapAgent>(spec, side, std::move(pc), cfg.query_fn,
                                           default_registry(), transcript_dir);
    }
    throw std::invalid_argument("agent spec: unknown agent \"" + spec + "\"");
}

// ---------------------------------------------------------------------------
// Match loop

using MatchObserver =
    std::function<void(const GameState&, const ActionVector&, const ActionVector&)>;

// Runs one match to its terminal state: agents act every tick, plap agents
// replan on their interval, the engine steps, plans are pruned. The observer
// (when given) sees the pre-step state with both submitted vectors.
inline MatchResult run_match(const MatchConfig& cfg, const MatchObserver& observer = nullptr) {
    std::string map_text =
        !cfg.map_text.empty() ? cfg.map_text : read_text_file(cfg.map_path);
    GameState state = load_map_text(map_text, cfg.stats);

    std::array<std::unique_ptr<Agent>, 2> agents;
    for (PlayerId side : {0, 1})
        agents[static_cast<size_t>(side)] = make_agent(
            cfg.agents[static_cast<size_t>(side)], side, cfg,
            derive_seed(cfg.seed, static_cast<std::uint64_t>(side)));

    ReplayWriter writer;
    if (!cfg.output_dir.empty()) {
        std::filesystem::create_directories(cfg.output_dir);
        writer.open(cfg.output_dir + "/replay.jsonl", map_text, cfg.stats, cfg.seed,
                    {cfg.agents[0], cfg.agents[1]}, cfg.k, cfg.max_ticks);
    }

    MatchOutcome outcome;
    while ((outcome = terminal_status(state, cfg.max_ticks)) == MatchOutcome::Ongoing) {
        long tick = state.tick();
        ActionVector a0 = agents[0]->act(state);
        ActionVector a1 = agents[1]->act(state);
        if (observer) observer(state, a0, a1);
        std::vector<Event> events = step(state, a0, a1);
        if (writer.is_open()) writer.record_tick(tick, a0, a1, events, state_hash(state));
        agents[0]->post_step(state);
        agents[1]->post_step(state);
    }

    MatchResult result;
    result.winner = outcome == MatchOutcome::WinP0 ? 0 : outcome == MatchOutcome::WinP1 ? 1 : -1;
    result.game_time = state.tick();
    result.counters = {state.counters(0), state.counters(1)};
    for (PlayerId side : {0, 1}) {
        result.planner_faults[static_cast<size_t>(side)] =
            agents[static_cast<size_t>(side)]->planner_faults();
        result.planning_events[static_cast<size_t>(side)] =
            agents[static_cast<size_t>(side)]->planning_events();
        for (const std::string& p : agents[static_cast<size_t>(side)]->transcript_paths())
            result.transcript_paths.push_back(p);
    }
    if (writer.is_open()) {
        writer.record_result(result.winner, result.game_time, result.counters[0],
                             result.counters[1]);
        result.replay_path = writer.path();
    }
    return result;
}

// ---------------------------------------------------------------------------
// Tournament

struct TournamentConfig {
    std::vector<std::string> agents;
    std::string map_path;
    std::string map_text;
    int rounds = 5;  // matches per side assignment of each pairing
    int k = 100;
    long max_ticks = 2000;
    std::uint64_t root_seed = 42;
    int jobs = 1;
    std::string output_dir;
    bool save_replays = false;
    StatsTable stats = default_stats();
    PlannerConfig planner;
    QueryFn query_fn;
};

struct ScheduledMatch {
    size_t index = 0;
    size_t red = 0;   // plays player 0
    size_t blue = 0;  // plays player 1
    int round = 0;
    std::uint64_t seed = 0;
};

struct MatchRecord {
    ScheduledMatch sched;
    MatchResult result;
};

struct LeaderboardRow {
    std::string agent;
    int scores = 0;
    int wins = 0, draws = 0, losses = 0, matches = 0;
    double wr = 0.0;
    double rhr = 0.0, rur = 0.0, upr = 0.0;
    std::optional<double> cer;
};

struct TournamentResult {
    std::vector<MatchRecord> matches;
    std::vector<LeaderboardRow> leaderboard;
};

// Every unordered pair meets `rounds` times per side assignment, so each
// agent plays 2 * rounds * (n - 1) matches. Seeds derive from the root seed
// per scheduled match, which makes parallel and serial runs identical.
inline std::vector<ScheduledMatch> tournament_schedule(size_t agent_count, int rounds,
                                                       std::uint64_t root_seed) {
    std::vector<ScheduledMatch> schedule;
    for (size_t i = 0; i < agent_count; ++i) {
        for (size_t j = i + 1; j < agent_count; ++j) {
            for (auto [red, blue] : {std::pair{i, j}, std::pair{j, i}}) {
                for (int r = 0; r < rounds; ++r) {
                    ScheduledMatch m;
                    m.index = schedule.size();
                    m.red = red;
                    m.blue = blue;
                    m.round = r;
                    m.seed = derive_seed(root_seed, red, blue, static_cast<std::uint64_t>(r));
                    schedule.push_back(m);
                }
            }
        }
    }
    return schedule;
}

inline TournamentResult run_tournament(const TournamentConfig& cfg) {
    if (cfg.agents.size() < 2)
        throw std::invalid_argument("tournament: need at least two agents");
    if (cfg.rounds < 1) throw std::invalid_argument("tournament: rounds must be >= 1");
    std::string map_text =
        !cfg.map_text.empty() ? cfg.map_text : read_text_file(cfg.map_path);

    // Fail before any match starts if an agent spec cannot be constructed.
    {
        MatchConfig probe;
        probe.map_text = map_text;
        probe.stats = cfg.stats;
        probe.planner = cfg.planner;
        probe.query_fn = cfg.query_fn;
        probe.k = cfg.k;
        for (const std::string& spec : cfg.agents) {
            probe.agents = {spec, spec};
            make_agent(spec, 0, probe, 0);
        }
    }

    std::vector<ScheduledMatch> schedule =
        tournament_schedule(cfg.agents.size(), cfg.rounds, cfg.root_seed);
    std::vector<MatchRecord> records(schedule.size());

    auto run_one = [&](const ScheduledMatch& m) {
        MatchConfig mc;
        mc.map_text = map_text;
        mc.agents = {cfg.agents[m.red], cfg.agents[m.blue]};
        mc.k = cfg.k;
        mc.max_ticks = cfg.max_ticks;
        mc.seed = m.seed;
        mc.stats = cfg.stats;
        mc.planner = cfg.planner;
        mc.query_fn = cfg.query_fn;
        if (cfg.save_replays && !cfg.output_dir.empty())
            mc.output_dir = cfg.output_dir + "/matches/match_" + std::to_string(m.index);
        records[m.index] = {m, run_match(mc)};
    };

    int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        for (const ScheduledMatch& m : schedule) run_one(m);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(static_cast<size_t>(jobs));
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < schedule.size(); i = next.fetch_add(1))
                    run_one(schedule[i]);
            });
        }
        for (auto& t : workers) t.join();
    }

    TournamentResult result;
    result.matches = std::move(records);

    std::vector<LeaderboardRow> rows(cfg.agents.size());
    std::vector<double> cer_sum(cfg.agents.size(), 0.0);
    std::vector<int> cer_count(cfg.agents.size(), 0);
    for (size_t i = 0; i < cfg.agents.size(); ++i) rows[i].agent = cfg.agents[i];
    for (const MatchRecord& rec : result.matches) {
        MetricsReport metrics = compute_metrics(rec.result);
        for (PlayerId side : {0, 1}) {
            size_t agent = side == 0 ? rec.sched.red : rec.sched.blue;
            LeaderboardRow& row = rows[agent];
            int sc = score(rec.result, side);
            row.scores += sc;
            row.matches += 1;
            if (sc > 0)
                row.wins += 1;
            else if (sc == 0)
                row.draws += 1;
            else
                row.losses += 1;
            const PlayerMetrics& m = metrics.per_player[static_cast<size_t>(side)];
            row.rhr += m.rhr;
            row.rur += m.rur;
            row.upr += m.upr;
            if (m.cer) {
                cer_sum[agent] += *m.cer;
                cer_count[agent] += 1;
            }
        }
    }
    for (size_t i = 0; i < rows.size(); ++i) {
        LeaderboardRow& row = rows[i];
        if (row.matches > 0) {
            row.wr = static_cast<double>(row.wins) / row.matches;
            row.rhr /= row.matches;
            row.rur /= row.matches;
            row.upr /= row.matches;
        }
        if (cer_count[i] > 0) row.cer = cer_sum[i] / cer_count[i];
    }
    std::sort(rows.begin(), rows.end(), [](const LeaderboardRow& a, const LeaderboardRow& b) {
        if (a.scores != b.scores) return a.scores > b.scores;
        if (a.wr != b.wr) return a.wr > b.wr;
        return a.agent < b.agent;
    });
    result.leaderboard = std::move(rows);

    if (!cfg.output_dir.empty()) {
        std::filesystem::create_directories(cfg.output_dir);
        nlohmann::json out{{"agents", cfg.agents},
                           {"rounds", cfg.rounds},
                           {"root_seed", cfg.root_seed},
                           {"matches", nlohmann::json::array()},
                           {"leaderboard", nlohmann::json::array()}};
        for (const MatchRecord& rec : result.matches) {
            out["matches"].push_back(nlohmann::json{
                {"index", rec.sched.index},
                {"red", cfg.agents[rec.sched.red]},
                {"blue", cfg.agents[rec.sched.blue]},
                {"round", rec.sched.round},
                {"seed", rec.sched.seed},
                {"winner", rec.result.winner},
                {"game_time", rec.result.game_time}});
        }
        for (const LeaderboardRow& row : result.leaderboard) {
            nlohmann::json j{{"agent", row.agent}, {"scores", row.scores},
                             {"wr", row.wr},       {"rhr", row.rhr},
                             {"rur", row.rur},     {"upr", row.upr},
                             {"matches", row.matches}};
            if (row.cer) j["cer"] = *row.cer;
            out["leaderboard"].push_back(j);
        }
        std::ofstream res(cfg.output_dir + "/results.json");
        res << out.dump(2) << "\n";
    }
    return result;
}

// Tab-separated leaderboard with a header row, sorted by Scores.
inline std::string format_leaderboard(const TournamentResult& result) {
    std::ostringstream out;
    out << "agent\tscores\twr\trhr\trur\tupr\tcer\tmatches\n";
    out << std::fixed << std::setprecision(3);
    for (const LeaderboardRow& row : result.leaderboard) {
        out << row.agent << "\t" << row.scores << "\t" << row.wr << "\t" << row.rhr << "\t"
            << row.rur << "\t" << row.upr << "\t";
        if (row.cer)
            out << *row.cer;
        else
            out << "inf";
        out << "\t" << row.matches << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Environment-knowledge probe

struct QaItem {
    std::string question;
    std::string answer;  // expected numeric token
};

inline std::vector<QaItem> load_questions(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(path), nullptr, true,
                                    /*ignore_comments=*/true);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("questions file: ") + e.what());
    }
    std::vector<QaItem> items;
    for (const auto& j : doc)
        items.push_back({j.at("question").get<std::string>(), j.at("answer").get<std::string>()});
    return items;
}

// Asks each question verbatim and grades by numeric-token match: the item is
// correct when the expected integer appears among the response's numbers.
inline double qa_probe(const std::vector<QaItem>& items, const QueryFn& query,
                       std::vector<bool>* per_item = nullptr) {
    if (items.empty()) throw std::invalid_argument("qa_probe: empty question set");
    auto numeric_tokens = [](const std::string& text) {
        std::vector<long long> out;
        size_t i = 0;
        while (i < text.size()) {
            if (std::isdigit(static_cast<unsigned char>(text[i]))) {
                size_t j = i;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                out.push_back(std::stoll(text.substr(i, j - i)));
                i = j;
            } else {
                ++i;
            }
        }
        return out;
    };
    int correct = 0;
    long tick = 0;
    for (const QaItem& item : items) {
        std::string response = query(PromptContext{item.question, tick++, 0});
        long long expected = std::stoll(item.answer);
        auto numbers = numeric_tokens(response);
        bool ok = std::find(numbers.begin(), numbers.end(), expected) != numbers.end();
        if (ok) ++correct;
        if (per_item) per_item->push_back(ok);
    }
    return static_cast<double>(correct) / static_cast<double>(items.size());
}

inline double qa_probe(const PlannerConfig& cfg, const std::string& question_file,
                       const QueryFn& query) {
    (void)cfg;
    return qa_probe(load_questions(question_file), query);
}

}  // namespace rtsplan
