#pragma once

#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtsplan/executor.hpp"
#include "rtsplan/map.hpp"
#include "rtsplan/skills.hpp"

namespace rtsplan {

inline constexpr const char* kPlanStartMarker = "START OF SKILL_PLAN";
inline constexpr const char* kPlanEndMarker = "END OF SKILL_PLAN";
inline constexpr size_t kMaxPlanEntries = 20;

enum class PromptVariant { ZeroShot, ZeroShotTips, FewShot, FewShotTips };

inline std::string_view variant_name(PromptVariant v) {
    switch (v) {
        case PromptVariant::ZeroShot: return "zs";
        case PromptVariant::ZeroShotTips: return "zs-tip";
        case PromptVariant::FewShot: return "fs";
        case PromptVariant::FewShotTips: return "fs-tip";
    }
    return "?";
}

inline std::optional<PromptVariant> variant_from_name(std::string_view s) {
    if (s == "zs") return PromptVariant::ZeroShot;
    if (s == "zs-tip") return PromptVariant::ZeroShotTips;
    if (s == "fs") return PromptVariant::FewShot;
    if (s == "fs-tip") return PromptVariant::FewShotTips;
    return std::nullopt;
}

inline bool variant_has_examples(PromptVariant v) {
    return v == PromptVariant::FewShot || v == PromptVariant::FewShotTips;
}

inline bool variant_has_tips(PromptVariant v) {
    return v == PromptVariant::ZeroShotTips || v == PromptVariant::FewShotTips;
}

struct PlannerConfig {
    PromptVariant variant = PromptVariant::ZeroShot;
    std::string model = "gpt-4o";
    double temperature = 0.0;
    int max_tokens = 256;
    int interval = 100;  // ticks between planner invocations
    std::string endpoint_base;                        // e.g. https://api.example.com/v1
    std::string api_key_env = "RTSPLAN_API_KEY";      // credentials reference, resolved at query
    std::string examples_path;                        // required by fs variants
    std::string tips_path;                            // required by tip variants
    int max_attempts = 3;
    int backoff_ms = 250;
};

struct PlannerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The assembled prompt, section per section and in a fixed order. Byte
// determinism matters: equal inputs must produce equal prompts.
struct PromptDocument {
    std::string instruction;
    std::string manual;
    std::string skills_block;
    std::string examples;  // empty unless the variant is few-shot
    std::string tips;      // empty unless the variant carries tips
    std::string situation;
    PlayerId side = 0;

    std::string to_string() const {
        std::ostringstream out;
        out << instruction << "\n\n## Game Manual\n" << manual << "\n## Available Skills\n"
            << skills_block;
        if (!examples.empty()) out << "\n## Examples\n" << examples;
        if (!tips.empty()) out << "\n## Tips\n" << tips;
        out << "\n## Battlefield Situation\n" << situation;
        return out.str();
    }
};

// Rule text generated from the live stats table, so the manual can never
// drift from what the engine actually simulates.
inline std::string game_manual_text(const StatsTable& stats) {
    std::ostringstream out;
    out << "Here are the core rules and mechanics you need to follow:\n"
        << "This is a 2-player grid-based game where all units occupy 1x1 tiles. Each player "
           "controls units and can create more by spending a single resource type, which acts "
           "as money. Workers carry minerals from mineral fields back to a base to grow your "
           "stockpile. You win by destroying every enemy unit.\n"
        << "Actions are not instant: moving one tile, harvesting, producing and attacking each "
           "keep a unit busy for the listed number of time units.\n"
        << "Here is the game units description:\n"
        << "- Resource: A non-player unit that provides resources.\n";
    auto line = [&](UnitKind k, const std::string& extra) {
        const UnitStats& s = stats.of(k);
        std::string name(kind_name(k));
        name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
        out << "- " << name << ": " << s.max_hp << " HP, costs " << s.cost
            << (s.cost == 1 ? " resource" : " resources") << ", and takes " << s.build_time
            << " time units to build." << extra << "\n";
    };
    line(UnitKind::Base, " Can produce Workers. Workers deposit minerals here.");
    line(UnitKind::Barrack, " Can produce Light, Heavy and Ranged units.");
    auto combat = [&](UnitKind k) {
        const UnitStats& s = stats.of(k);
        std::ostringstream extra;
        extra << " Moves every " << s.move_time << " time units and deals " << s.attack_damage
              << " damage at range " << s.attack_range << ".";
        return extra.str();
    };
    line(UnitKind::Worker, combat(UnitKind::Worker) + " Can harvest minerals and build Bases "
                               "and Barracks.");
    line(UnitKind::Light, combat(UnitKind::Light));
    line(UnitKind::Heavy, combat(UnitKind::Heavy));
    line(UnitKind::Ranged, combat(UnitKind::Ranged));
    return out.str();
}

inline std::string skill_plan_format_text() {
    std::ostringstream out;
    out << "Develop a winning skill plan using the allowed skill space.\n"
        << "Your game plan should be a list of parameterized skills, with \"" << kPlanStartMarker
        << "\" and \"" << kPlanEndMarker
        << "\" marking the beginning and end of the list, for example:\n"
        << kPlanStartMarker << "\n"
        << "[Harvest Mineral](0, 0)\n"
        << "[Produce Unit](worker, north)\n"
        << kPlanEndMarker << "\n";
    return out.str();
}

// Deterministic assembly of the planner prompt for one side. Few-shot
// examples and tips load from the configured template files; a missing file
// for an enabled block is a configuration error.
inline PromptDocument build_prompt(const std::string& observation_text, const PlannerConfig& cfg,
                                   PlayerId side, const SkillRegistry& registry,
                                   const StatsTable& stats) {
    PromptDocument doc;
    doc.side = side;
    doc.instruction =
        "You are an RTS game expert tasked with planning a winning skill plan based on the "
        "provided scenario.";
    doc.manual = game_manual_text(stats);
    doc.skills_block = skill_plan_format_text() +
                       "Here are the available skills and their descriptions:\n" +
                       describe_skills(registry);
    if (variant_has_examples(cfg.variant)) {
        if (cfg.examples_path.empty())
            throw PlannerError("planner config: variant needs an examples template file");
        try {
            doc.examples = read_text_file(cfg.examples_path);
        } catch (const std::exception& e) {
            throw PlannerError(std::string("planner config: ") + e.what());
        }
    }
    if (variant_has_tips(cfg.variant)) {
        if (cfg.tips_path.empty())
            throw PlannerError("planner config: variant needs a tips template file");
        try {
            doc.tips = read_text_file(cfg.tips_path);
        } catch (const std::exception& e) {
            throw PlannerError(std::string("planner config: ") + e.what());
        }
    }
    std::ostringstream situation;
    situation << "Here is the description of the **current situation**:\n"
              << observation_text << "\nYou are now the **" << side_name(side)
              << "** side. Please make a skill plan to win the game based on the current "
                 "situation.\n";
    doc.situation = situation.str();
    return doc;
}

struct LineVerdict {
    std::string line;
    bool accepted = false;
    std::string reason;  // empty when accepted
};

// Bookkeeping around one planner completion: the raw text, the region the
// parser looked at, and what happened to each candidate line.
struct RawResponse {
    std::string text;
    std::string extracted;
    std::vector<LineVerdict> verdicts;
};

struct ParseOutcome {
    SkillPlan plan;
    RawResponse response;
};

namespace parse_detail {

inline std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

struct Token {
    enum class Type { Integer, Pair, Word } type;
    int i = 0;
    Position pair{};
    std::string word;
};

// Splits an argument list at top-level commas; nested "(x, y)" stays one token.
inline std::optional<std::vector<Token>> tokenize_params(std::string_view params) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char c : params) {
        if (c == '(') ++depth;
        if (c == ')') {
            if (--depth < 0) return std::nullopt;
        }
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (depth != 0) return std::nullopt;
    parts.push_back(cur);

    std::vector<Token> tokens;
    for (const std::string& raw : parts) {
        std::string t = trim(raw);
        if (t.empty()) {
            if (parts.size() == 1) break;  // empty argument list
            return std::nullopt;
        }
        Token tok;
        if (t.front() == '(' && t.back() == ')') {
            std::istringstream in(t.substr(1, t.size() - 2));
            int x, y;
            char comma;
            if (!(in >> x >> comma >> y) || comma != ',') return std::nullopt;
            std::string rest;
            if (in >> rest) return std::nullopt;
            tok.type = Token::Type::Pair;
            tok.pair = {x, y};
        } else {
            std::istringstream in(t);
            int i;
            if (in >> i && in.eof()) {
                tok.type = Token::Type::Integer;
                tok.i = i;
            } else {
                tok.type = Token::Type::Word;
                for (char c : t)
                    tok.word.push_back(
                        static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            }
        }
        tokens.push_back(std::move(tok));
    }
    return tokens;
}

// Matches the token list against a skill's parameter specification; a
// location accepts either one "(x, y)" token or two bare integers.
inline std::optional<ParamList> match_params(const SkillDef& def,
                                             const std::vector<Token>& tokens,
                                             const GameState& s) {
    ParamList out;
    size_t ti = 0;
    for (ParamKind pk : def.params) {
        if (ti >= tokens.size()) return std::nullopt;
        const Token& tok = tokens[ti];
        switch (pk) {
            case ParamKind::Location: {
                Position p;
                if (tok.type == Token::Type::Pair) {
                    p = tok.pair;
                    ++ti;
                } else if (tok.type == Token::Type::Integer && ti + 1 < tokens.size() &&
                           tokens[ti + 1].type == Token::Type::Integer) {
                    p = {tok.i, tokens[ti + 1].i};
                    ti += 2;
                } else {
                    return std::nullopt;
                }
                out.emplace_back(p);
                break;
            }
            case ParamKind::MoveDirection: {
                if (tok.type != Token::Type::Word) return std::nullopt;
                auto d = dir_from_name(tok.word);
                if (!d) return std::nullopt;
                out.emplace_back(*d);
                ++ti;
                break;
            }
            default: {
                if (tok.type != Token::Type::Word) return std::nullopt;
                auto k = kind_from_name(tok.word);
                if (!k) return std::nullopt;
                out.emplace_back(*k);
                ++ti;
                break;
            }
        }
        if (!param_in_domain(pk, out.back(), s)) return std::nullopt;
    }
    if (ti != tokens.size()) return std::nullopt;
    return out;
}

// Candidate "[Name](params)" on one line, with balanced-paren argument
// extraction so trailing prose does not corrupt the parameters.
inline bool extract_invocation(const std::string& line, std::string& name, std::string& params) {
    size_t lb = line.find('[');
    if (lb == std::string::npos) return false;
    size_t rb = line.find(']', lb + 1);
    if (rb == std::string::npos) return false;
    name = trim(std::string_view(line).substr(lb + 1, rb - lb - 1));
    if (name.empty()) return false;
    size_t lp = line.find('(', rb + 1);
    if (lp == std::string::npos) return false;
    if (!trim(std::string_view(line).substr(rb + 1, lp - rb - 1)).empty()) return false;
    int depth = 0;
    for (size_t i = lp; i < line.size(); ++i) {
        if (line[i] == '(') ++depth;
        if (line[i] == ')' && --depth == 0) {
            params = line.substr(lp + 1, i - lp - 1);
            return true;
        }
    }
    return false;
}

}  // namespace parse_detail

// Extracts the plan region (between the first start marker and the next end
// marker; the whole text when markers are absent), matches candidate lines
// against the registry grammar, validates parameters against domains and map
// bounds, and keeps accepted entries in response order. Arbitrary input never
// raises; the worst outcome is an empty plan.
inline ParseOutcome parse_plan(const std::string& text, const SkillRegistry& registry,
                               const GameState& s, PlayerId player) {
    ParseOutcome out;
    out.plan.player = player;
    out.plan.created_tick = s.tick();
    out.response.text = text;

    std::string region = text;
    size_t start = text.find(kPlanStartMarker);
    if (start != std::string::npos) {
        size_t body = start + std::string_view(kPlanStartMarker).size();
        size_t end = text.find(kPlanEndMarker, body);
        region = text.substr(body, end == std::string::npos ? std::string::npos : end - body);
    }
    out.response.extracted = region;

    std::istringstream lines(region);
    std::string line;
    while (std::getline(lines, line)) {
        std::string name, params;
        if (!parse_detail::extract_invocation(line, name, params)) continue;
        LineVerdict verdict{parse_detail::trim(line), false, ""};
        const SkillDef* def = registry.find(name);
        if (!def) {
            verdict.reason = "unknown skill \"" + name + "\"";
            out.response.verdicts.push_back(std::move(verdict));
            continue;
        }
        auto tokens = parse_detail::tokenize_params(params);
        std::optional<ParamList> values;
        if (tokens) values = parse_detail::match_params(*def, *tokens, s);
        if (!values) {
            verdict.reason = "invalid parameters for " + def->name;
            out.response.verdicts.push_back(std::move(verdict));
            continue;
        }
        if (out.plan.entries.size() >= kMaxPlanEntries) {
            verdict.reason = "plan size cap reached";
            out.response.verdicts.push_back(std::move(verdict));
            continue;
        }
        PlanEntry entry;
        entry.skill = def->id;
        entry.name = def->name;
        entry.params = std::move(*values);
        out.plan.entries.push_back(std::move(entry));
        verdict.accepted = true;
        out.response.verdicts.push_back(std::move(verdict));
    }
    return out;
}

// One planner invocation as seen by transport implementations.
struct PromptContext {
    std::string prompt;
    long tick = 0;
    PlayerId side = 0;
};

// Returns the completion text or throws PlannerError; the harness degrades a
// failed query to an empty plan and keeps the match running.
using QueryFn = std::function<std::string(const PromptContext&)>;

// Offline planner: scripted completions keyed by tick. A query at tick t
// returns the entry with the greatest key <= t, or an empty string.
class MockPlanner {
public:
    MockPlanner() = default;
    explicit MockPlanner(std::map<long, std::string> schedule) : schedule_(std::move(schedule)) {}

    // Fixture format: "@<tick>" lines introduce blocks of completion text.
    static MockPlanner from_text(const std::string& text) {
        std::map<long, std::string> schedule;
        std::istringstream in(text);
        std::string line;
        long current = -1;
        std::ostringstream block;
        auto flush = [&] {
            if (current >= 0) schedule[current] = block.str();
            block.str("");
        };
        while (std::getline(in, line)) {
            if (!line.empty() && line[0] == '@') {
                flush();
                current = std::stol(line.substr(1));
            } else if (current >= 0) {
                block << line << "\n";
            }
        }
        flush();
        return MockPlanner(std::move(schedule));
    }

    static MockPlanner from_file(const std::string& path) {
        return from_text(read_text_file(path));
    }

    std::string operator()(const PromptContext& ctx) const {
        std::string result;
        for (const auto& [tick, text] : schedule_) {
            if (tick <= ctx.tick) result = text;
        }
        return result;
    }

private:
    std::map<long, std::string> schedule_;
};

}  // namespace rtsplan
