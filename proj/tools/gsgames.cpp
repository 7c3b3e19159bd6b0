// gsgames: analyze Gibbard-Satterthwaite voting manipulation games under
// k-Approval rules.
//
// Exit codes: 0 success, 1 verification found a discrepancy, 2 usage or
// input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gsg/diagrams.hpp"
#include "gsg/fixtures.hpp"
#include "gsg/game.hpp"

using namespace gsg;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string set_string(const Profile& p, const std::vector<CandidateId>& ids) {
    return "{" + candidate_list(p, ids, " ") + "}";
}

struct GameArgs {
    std::string profile_path;
    int k = 1;
    std::string policy = "all";
    std::string strategies_path;
    std::string flavor = "gs";
    long long budget = kDefaultBudget;
};

void add_game_options(CLI::App* cmd, GameArgs& args, bool with_flavor = true) {
    cmd->add_option("-p,--profile", args.profile_path, "profile file")->required();
    cmd->add_option("-k", args.k, "approval width")->required();
    cmd->add_option("--policy", args.policy, "strategy policy: all|sound|minimal|fixed")
        ->check(CLI::IsMember({"all", "sound", "minimal", "fixed"}));
    cmd->add_option("--strategies", args.strategies_path, "strategy file for --policy fixed");
    if (with_flavor)
        cmd->add_option("--flavor", args.flavor, "gs: manipulators only; mcm: with countermanipulators")
            ->check(CLI::IsMember({"gs", "mcm"}));
    cmd->add_option("--budget", args.budget, "maximum number of action profiles");
}

GSGame load_game(const GameArgs& args) {
    const Profile p = parse_profile(slurp(args.profile_path));
    const Rule r{args.k};
    const Flavor flavor = args.flavor == "mcm" ? Flavor::WithCounter : Flavor::GSOnly;
    if (args.policy == "fixed") {
        if (args.strategies_path.empty())
            throw std::runtime_error("--policy fixed requires --strategies");
        auto fixed = parse_strategies(p, slurp(args.strategies_path));
        return build_game(p, r, Policy::Fixed, flavor, &fixed);
    }
    const Policy policy = args.policy == "sound"     ? Policy::SoundOnly
                          : args.policy == "minimal" ? Policy::MinimalOnly
                                                     : Policy::All;
    return build_game(p, r, policy, flavor);
}

std::string players_line(const GSGame& g) {
    if (g.num_players() == 0) return "players: none (no strategic voters)";
    std::string out = "players:";
    for (const auto& s : g.players) {
        out += " voter " + std::to_string(s.voter + 1) + " (" + std::to_string(s.size()) +
               (s.size() == 1 ? " strategy" : " strategies") + ")";
        if (&s != &g.players.back()) out += ",";
    }
    return out;
}

void print_outcome_table(const GSGame& g, const BestResponseGraph& br) {
    const auto& t = br.outcomes;
    std::vector<std::array<std::string, 3>> rows;
    rows.push_back({"profile", "winner", "profitable deviations"});
    size_t edge_pos = 0;
    for (long long idx = 0; idx < t.size(); ++idx) {
        std::string devs;
        const auto a = t.profile_at(idx);
        for (; edge_pos < br.edges.size() && br.edges[edge_pos].from == idx; ++edge_pos) {
            const auto& e = br.edges[edge_pos];
            if (!devs.empty()) devs += "; ";
            devs += "voter " + std::to_string(g.players[static_cast<size_t>(e.player)].voter + 1) +
                    ": " + strategy_label(a[static_cast<size_t>(e.player)]) + "->" +
                    strategy_label(e.to_strategy) + " (" +
                    g.profile.candidates.name(t.winners[static_cast<size_t>(br.edge_target(e))]) +
                    ")";
        }
        if (devs.empty()) devs = "-";
        rows.push_back({action_label(a),
                        g.profile.candidates.name(t.winners[static_cast<size_t>(idx)]), devs});
    }
    size_t w0 = 0, w1 = 0;
    for (const auto& r : rows) {
        w0 = std::max(w0, r[0].size());
        w1 = std::max(w1, r[1].size());
    }
    for (const auto& r : rows) {
        std::cout << r[0] << std::string(w0 - r[0].size() + 2, ' ') << r[1]
                  << std::string(w1 - r[1].size() + 2, ' ') << r[2] << "\n";
    }
}

void print_manipulations(const Profile& p, Rule r, VoterId v) {
    const auto ms = gs_manipulations(p, r, v);
    if (ms.empty()) return;
    std::cout << "voter " << v + 1 << ": kind " << to_string(ms.front().kind) << ", target "
              << p.candidates.name(ms.front().target) << ", " << ms.size()
              << (ms.size() == 1 ? " manipulation\n" : " manipulations\n");
    for (const auto& m : ms) {
        std::string attrs;
        if (m.sound.has_value()) attrs += *m.sound ? "sound" : "unsound";
        if (m.kind == ManipulationKind::Demoter)
            attrs += "demotes " + std::to_string(m.demoted_count);
        if (m.minimal) attrs += attrs.empty() ? "minimal" : ", minimal";
        std::cout << "  " << set_string(p, m.approval_set)
                  << "  vote: " << vote_string(p, m.display_vote);
        if (!attrs.empty()) std::cout << "  [" << attrs << "]";
        std::cout << "\n";
    }
}

int cmd_winner(const GameArgs& args) {
    const Profile p = parse_profile(slurp(args.profile_path));
    const CandidateId w = winner(p, Rule{args.k});
    std::cout << "winner: " << p.candidates.name(w) << "\n";
    return 0;
}

int cmd_manipulators(const GameArgs& args, bool def3) {
    const Profile p = parse_profile(slurp(args.profile_path));
    const Rule r{args.k};
    const CandidateId w = winner(p, r);
    std::cout << "winner: " << p.candidates.name(w) << "\n";

    const auto manip = gs_manipulators(p, r);
    std::cout << "manipulators:";
    for (VoterId v : manip) std::cout << " " << v + 1;
    if (manip.empty()) std::cout << " none";
    std::cout << "\n";
    for (VoterId v : manip) print_manipulations(p, r, v);

    const auto mode = def3 ? CounterPredicate::DefinitionOnly : CounterPredicate::ExcludeManipulators;
    const auto counters = countermanipulators(p, r, mode);
    std::cout << "countermanipulators:";
    for (VoterId v : counters) std::cout << " " << v + 1;
    if (counters.empty()) std::cout << " none";
    std::cout << "\n";
    for (VoterId j : counters)
        for (VoterId i : manip) {
            if (i == j) continue;
            for (const auto& m : gs_manipulations(p, r, i)) {
                const auto cms = countermanipulations(p, r, m, j);
                if (cms.empty()) continue;
                std::cout << "  voter " << j + 1 << " vs voter " << i + 1 << " "
                          << set_string(p, m.approval_set) << ": result "
                          << p.candidates.name(cms.front().result) << " via "
                          << set_string(p, cms.front().approval_set);
                if (cms.size() > 1) std::cout << " (+" << cms.size() - 1 << " more)";
                std::cout << "\n";
            }
        }
    return 0;
}

int cmd_game(const GameArgs& args) {
    GSGame g = load_game(args);
    std::cout << players_line(g) << "\n";
    const auto br = best_response_graph(g, args.budget);
    print_outcome_table(g, br);
    return 0;
}

int cmd_nash(const GameArgs& args, bool construct) {
    if (construct) {
        const Profile p = parse_profile(slurp(args.profile_path));
        ConstructionResult res = args.k == 1   ? construct_ne_plurality(p, args.budget)
                                 : args.k == 2 ? construct_ne_2approval_sound(p, args.budget)
                                 : args.k == 3 ? construct_ne_3approval_minimal(p, args.budget)
                                               : throw std::runtime_error(
                                                     "--construct supports k = 1, 2 or 3");
        std::cout << "construction: " << res.trace.method << "\n";
        for (const auto& [key, value] : res.trace.items)
            std::cout << "  " << key << ": " << value << "\n";
        std::cout << players_line(res.game) << "\n";
        std::cout << "equilibrium: " << action_label(res.equilibrium) << "\n";
        std::cout << "winner: "
                  << p.candidates.name(winner(resolve(res.game, res.equilibrium), res.game.rule))
                  << "\n";
        std::cout << "verified: " << (res.verified ? "yes" : "no") << "\n";
        return res.verified ? 0 : 1;
    }

    GSGame g = load_game(args);
    std::cout << players_line(g) << "\n";
    const auto ne = pure_nash(g, args.budget);
    if (ne.empty()) {
        std::cout << "pure NE: none\n";
        const auto br = best_response_graph(g, args.budget);
        const auto cyc = attractor_cycle(g, br.outcomes);
        if (!cyc.empty()) {
            std::cout << "attractor cycle:";
            for (size_t i = 0; i < cyc.size(); ++i)
                std::cout << (i ? " -> " : " ") << action_label(br.outcomes.profile_at(cyc[i]));
            std::cout << " -> " << action_label(br.outcomes.profile_at(cyc.front())) << "\n";
        }
    } else {
        std::cout << "pure NE:";
        for (size_t i = 0; i < ne.size(); ++i)
            std::cout << (i ? "; " : " ") << action_label(ne[i]);
        std::cout << "\n";
    }
    return 0;
}

int cmd_brgraph(const GameArgs& args, bool dot) {
    GSGame g = load_game(args);
    const auto br = best_response_graph(g, args.budget);
    if (dot) {
        std::cout << to_dot(g, br);
        return 0;
    }
    std::cout << players_line(g) << "\n";
    std::cout << "edges:\n";
    for (const auto& e : br.edges) {
        std::cout << "  " << action_label(br.outcomes.profile_at(e.from)) << " -> "
                  << action_label(br.outcomes.profile_at(br.edge_target(e))) << "  voter "
                  << g.players[static_cast<size_t>(e.player)].voter + 1 << "  winner "
                  << g.profile.candidates.name(
                         br.outcomes.winners[static_cast<size_t>(br.edge_target(e))])
                  << "\n";
    }
    std::cout << "sinks (pure NE):";
    if (br.sinks.empty()) std::cout << " none";
    for (long long s : br.sinks) std::cout << " " << action_label(br.outcomes.profile_at(s));
    std::cout << "\n";
    return 0;
}

int cmd_diagram(const GameArgs& args) {
    const Profile p = parse_profile(slurp(args.profile_path));
    const Rule r{args.k};
    GSGame g;
    DiagramFlavor flavor;
    if (args.flavor == "mcm") {
        if (args.strategies_path.empty())
            throw std::runtime_error("--flavor mcm requires --strategies with the manipulator line "
                                     "first and the countermanipulator line second");
        auto fixed = parse_strategies(p, slurp(args.strategies_path));
        if (fixed.size() != 2) throw std::runtime_error("mcm diagram needs exactly two strategy lines");
        g = build_mcm_game(p, r, fixed[0].voter, fixed[0].vote, fixed[1].voter, fixed[1].vote);
        flavor = DiagramFlavor::MCM;
    } else {
        GameArgs ga = args;
        ga.flavor = "gs";
        g = load_game(ga);
        flavor = DiagramFlavor::GS;
    }
    const auto t = outcome_table(g);
    if (g.num_players() != 2 || g.players[0].size() != 2 || g.players[1].size() != 2)
        throw std::runtime_error("diagram requires a 2-player, 2-strategy game");
    std::cout << "players: voter " << g.players[0].voter + 1 << ", voter " << g.players[1].voter + 1
              << "\n";
    std::cout << "outcomes: (s,s)=" << p.candidates.name(t.winner_at({0, 0}))
              << " (i,s)=" << p.candidates.name(t.winner_at({1, 0}))
              << " (s,i)=" << p.candidates.name(t.winner_at({0, 1}))
              << " (i,i)=" << p.candidates.name(t.winner_at({1, 1})) << "\n";
    const auto d = extract_diagram(g);
    std::cout << "edges: e1=" << to_string(d.e1) << " e2=" << to_string(d.e2)
              << " e3=" << to_string(d.e3) << " e4=" << to_string(d.e4) << "\n";
    std::cout << "class: " << to_string(classify(d, flavor)) << "\n";
    return 0;
}

int parse_class_label(std::string s) {
    for (const char* prefix : {"gs:", "mcm:"})
        if (s.rfind(prefix, 0) == 0) s = s.substr(std::string(prefix).size());
    if (!s.empty() && s.front() == '(') s = s.substr(1);
    if (!s.empty() && s.back() == ')') s.pop_back();
    for (int label = 1; label <= 6; ++label)
        if (s == roman_label(label)) return label;
    throw std::runtime_error("bad class label '" + s + "' (expected i..vi)");
}

int cmd_search(const std::string& flavor, const std::string& cls, int k, int n_max, int m_max,
               long long budget, bool all_tiebreaks, bool reduce) {
    const DiagramFlavor fl = flavor == "mcm" ? DiagramFlavor::MCM : DiagramFlavor::GS;
    const int label = parse_class_label(cls);
    SearchOptions opts;
    opts.budget = budget;
    opts.all_tiebreaks = all_tiebreaks;
    opts.reduce_first_vote = reduce;
    const auto witness = realizability_search(fl, label, Rule{k}, n_max, m_max, opts);
    const std::string class_name = to_string(DiagramClass{fl, label});
    if (!witness) {
        std::cout << "not realizable within bounds: voters <= " << n_max << ", candidates <= "
                  << m_max << ", " << (all_tiebreaks ? "all tiebreak orders" : "lexicographic tiebreak")
                  << " (class " << class_name << ")\n";
        return 0;
    }
    std::cout << "witness found (class " << class_name << "):\n";
    std::cout << serialize_profile(witness->profile);
    std::cout << "player 1: voter " << witness->voter1 + 1
              << " plays: " << vote_string(witness->profile, witness->vote1) << "\n";
    std::cout << "player 2: voter " << witness->voter2 + 1
              << " plays: " << vote_string(witness->profile, witness->vote2) << "\n";
    return 0;
}

int cmd_verify(const std::string& which) {
    std::vector<FixtureReport> reports;
    if (which == "all") {
        reports = run_all_fixtures();
    } else {
        reports.push_back(run_fixture(which));
    }
    bool all_ok = true;
    for (const auto& r : reports) {
        const bool ok = r.pass();
        all_ok = all_ok && ok;
        std::cout << "fixture " << r.name << ": " << (ok ? "PASS" : "FAIL") << "\n";
        for (const auto& c : r.checks)
            std::cout << (c.ok ? "  ok:   " : "  FAIL: ") << c.what << "\n";
    }
    std::cout << "verification: " << (all_ok ? "PASS" : "FAIL") << "\n";
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gibbard-Satterthwaite voting manipulation games under k-Approval"};
    app.require_subcommand(1);

    GameArgs winner_args, manip_args, game_args, nash_args, br_args, diagram_args;
    bool def3 = false, construct = false, dot = false;

    auto* winner_cmd = app.add_subcommand("winner", "winner of a profile");
    winner_cmd->add_option("-p,--profile", winner_args.profile_path, "profile file")->required();
    winner_cmd->add_option("-k", winner_args.k, "approval width")->required();

    auto* manip_cmd = app.add_subcommand("manipulators", "manipulators and countermanipulators");
    manip_cmd->add_option("-p,--profile", manip_args.profile_path, "profile file")->required();
    manip_cmd->add_option("-k", manip_args.k, "approval width")->required();
    manip_cmd->add_flag("--def3", def3, "countermanipulators may also be manipulators");

    auto* game_cmd = app.add_subcommand("game", "outcome table with profitable deviations");
    add_game_options(game_cmd, game_args);

    auto* nash_cmd = app.add_subcommand("nash", "pure Nash equilibria of the game");
    add_game_options(nash_cmd, nash_args);
    nash_cmd->add_flag("--construct", construct,
                       "run the constructive equilibrium procedure for k = 1, 2 or 3");

    auto* br_cmd = app.add_subcommand("brgraph", "best-response graph");
    add_game_options(br_cmd, br_args);
    br_cmd->add_flag("--dot", dot, "emit DOT");

    auto* diagram_cmd = app.add_subcommand("diagram", "classify a 2x2 game diagram");
    add_game_options(diagram_cmd, diagram_args);

    std::string search_flavor = "gs", search_class;
    int search_k = 1, search_voters = 3, search_candidates = 4;
    long long search_budget = kDefaultBudget;
    bool all_tiebreaks = false, reduce = false;
    auto* search_cmd = app.add_subcommand("search", "exhaustive diagram realizability search");
    search_cmd->add_option("--flavor", search_flavor, "gs|mcm")
        ->check(CLI::IsMember({"gs", "mcm"}));
    search_cmd->add_option("--class", search_class, "diagram class i..vi")->required();
    search_cmd->add_option("-k", search_k, "approval width")->required();
    search_cmd->add_option("--voters", search_voters, "maximum number of voters");
    search_cmd->add_option("--candidates", search_candidates, "maximum number of candidates");
    search_cmd->add_option("--budget", search_budget, "maximum number of profiles");
    search_cmd->add_flag("--all-tiebreaks", all_tiebreaks, "enumerate every tiebreak order");
    search_cmd->add_flag("--reduce", reduce,
                         "pin voter 1's ballot by candidate relabeling (needs --all-tiebreaks)");

    std::string fixture = "all";
    auto* verify_cmd = app.add_subcommand("verify", "re-check the built-in reference fixtures");
    verify_cmd->add_option("--fixture", fixture, "fixture name or 'all'");

    CLI11_PARSE(app, argc, argv);

    try {
        if (winner_cmd->parsed()) return cmd_winner(winner_args);
        if (manip_cmd->parsed()) return cmd_manipulators(manip_args, def3);
        if (game_cmd->parsed()) return cmd_game(game_args);
        if (nash_cmd->parsed()) return cmd_nash(nash_args, construct);
        if (br_cmd->parsed()) return cmd_brgraph(br_args, dot);
        if (diagram_cmd->parsed()) return cmd_diagram(diagram_args);
        if (search_cmd->parsed())
            return cmd_search(search_flavor, search_class, search_k, search_voters,
                              search_candidates, search_budget, all_tiebreaks, reduce);
        if (verify_cmd->parsed()) return cmd_verify(fixture);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
