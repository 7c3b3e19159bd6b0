#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gsg/election.hpp"
#include "gsg/manipulation.hpp"

namespace gsg {

/// Which insincere votes populate each manipulator's strategy set.
enum class Policy { All, SoundOnly, MinimalOnly, Fixed };

/// GSOnly: players are exactly the GS-manipulators. WithCounter: voters who
/// can countermanipulate some single manipulation join as players too.
enum class Flavor { GSOnly, WithCounter };

enum class PlayerRole { Manipulator, CounterManipulator };

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(long long required, long long budget)
        : std::runtime_error("action-profile space of size " + std::to_string(required) +
                             " exceeds budget " + std::to_string(budget)),
          required_(required), budget_(budget) {}
    long long required() const { return required_; }

private:
    long long required_;
    long long budget_;
};

inline constexpr long long kDefaultBudget = 10'000'000;

struct StrategySet {
    VoterId voter = -1;
    PlayerRole role = PlayerRole::Manipulator;
    std::optional<ManipulationKind> kind; // manipulators only
    std::optional<CandidateId> target;    // manipulators only
    std::vector<Vote> strategies;                    // [0] = sincere vote
    std::vector<std::vector<CandidateId>> approvals; // top-k set per strategy, sorted

    int size() const { return static_cast<int>(strategies.size()); }
};

struct GSGame {
    Profile profile;
    Rule rule;
    Flavor flavor = Flavor::GSOnly;
    std::vector<StrategySet> players; // ascending voter id

    int num_players() const { return static_cast<int>(players.size()); }

    long long cell_count() const {
        long long n = 1;
        for (const auto& s : players) n *= s.size();
        return n;
    }

    std::optional<int> player_index(VoterId v) const {
        for (int i = 0; i < num_players(); ++i)
            if (players[static_cast<size_t>(i)].voter == v) return i;
        return std::nullopt;
    }
};

/// One strategy choice per player, indices into the strategy sets.
using ActionProfile = std::vector<int>;

namespace detail {

inline void append_strategy(StrategySet& s, Rule r, const Vote& vote) {
    auto set = vote.top_set(r.k);
    for (const auto& existing : s.approvals)
        if (existing == set) return; // equivalent under the rule
    s.strategies.push_back(vote);
    s.approvals.push_back(std::move(set));
}

inline StrategySet sincere_strategy_set(const Profile& p, Rule r, VoterId v, PlayerRole role) {
    StrategySet s;
    s.voter = v;
    s.role = role;
    s.strategies.push_back(p.vote(v));
    s.approvals.push_back(p.vote(v).top_set(r.k));
    return s;
}

} // namespace detail

struct FixedStrategy {
    VoterId voter;
    Vote vote;
};

/// Strategy file: one line per strategy, `voter <id>: <candidates best-first>`,
/// voter ids 1-based, '#' comments allowed.
inline std::vector<FixedStrategy> parse_strategies(const Profile& p, const std::string& text) {
    std::vector<FixedStrategy> out;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto tokens = detail::split_tokens(detail::strip_comment(raw));
        if (tokens.empty()) continue;
        if (tokens.size() < 3 || tokens[0] != "voter" || tokens[1].back() != ':')
            throw ParseError(lineno, "expected 'voter <id>: <candidates best-first>'");
        std::string idtok = tokens[1].substr(0, tokens[1].size() - 1);
        VoterId v;
        try {
            v = std::stoi(idtok) - 1;
        } catch (...) {
            throw ParseError(lineno, "bad voter id '" + idtok + "'");
        }
        if (v < 0 || v >= p.num_voters()) throw ParseError(lineno, "voter id out of range");
        auto ids = detail::tokens_to_ids({tokens.begin() + 2, tokens.end()}, p.candidates, lineno);
        try {
            out.push_back({v, make_vote(std::move(ids), p.num_candidates())});
        } catch (const std::invalid_argument&) {
            throw ParseError(lineno, "strategy vote is not a permutation of the candidates");
        }
    }
    return out;
}

/// Builds the normal-form game for a profile. Manipulator strategy sets
/// follow the policy; with Flavor::WithCounter every voter who can
/// countermanipulate one of the included manipulations becomes a player
/// whose insincere strategies are all such countermanipulations.
inline GSGame build_game(const Profile& p, Rule r, Policy policy, Flavor flavor = Flavor::GSOnly,
                         const std::vector<FixedStrategy>* fixed = nullptr) {
    validate_rule(p, r);
    if (policy == Policy::Fixed && fixed == nullptr)
        throw std::invalid_argument("build_game: Fixed policy requires a strategy list");

    GSGame g{p, r, flavor, {}};
    const auto manipulators = gs_manipulators(p, r);

    std::vector<Manipulation> kept; // all manipulations included in the game
    for (VoterId v : manipulators) {
        auto s = detail::sincere_strategy_set(p, r, v, PlayerRole::Manipulator);
        auto all = gs_manipulations(p, r, v);
        if (!all.empty()) {
            s.kind = all.front().kind;
            s.target = all.front().target;
        }
        if (policy == Policy::Fixed) {
            for (const auto& fs : *fixed) {
                if (fs.voter != v) continue;
                auto set = fs.vote.top_set(r.k);
                auto match = std::find_if(all.begin(), all.end(), [&](const Manipulation& m) {
                    return m.approval_set == set;
                });
                if (match == all.end())
                    throw std::invalid_argument("fixed strategy for voter " + std::to_string(v + 1) +
                                                " is not a GS-manipulation");
                detail::append_strategy(s, r, fs.vote);
                kept.push_back(*match);
            }
        } else {
            for (const auto& m : all) {
                const bool include =
                    policy == Policy::All ||
                    (policy == Policy::SoundOnly &&
                     (m.kind == ManipulationKind::Demoter || m.sound.value_or(false))) ||
                    (policy == Policy::MinimalOnly && m.minimal);
                if (!include) continue;
                detail::append_strategy(s, r, m.display_vote);
                kept.push_back(m);
            }
        }
        g.players.push_back(std::move(s));
    }

    if (policy == Policy::Fixed)
        for (const auto& fs : *fixed)
            if (std::find(manipulators.begin(), manipulators.end(), fs.voter) == manipulators.end())
                throw std::invalid_argument("fixed strategy given for voter " + std::to_string(fs.voter + 1) +
                                            " who is not a GS-manipulator");

    if (flavor == Flavor::WithCounter) {
        for (VoterId j = 0; j < p.num_voters(); ++j) {
            if (std::find(manipulators.begin(), manipulators.end(), j) != manipulators.end()) continue;
            auto s = detail::sincere_strategy_set(p, r, j, PlayerRole::CounterManipulator);
            for (const auto& m : kept) {
                if (m.voter == j) continue;
                for (const auto& cm : countermanipulations(p, r, m, j))
                    detail::append_strategy(s, r, cm.display_vote);
            }
            if (s.size() > 1) g.players.push_back(std::move(s));
        }
        std::sort(g.players.begin(), g.players.end(),
                  [](const StrategySet& a, const StrategySet& b) { return a.voter < b.voter; });
    }

    return g;
}

/// Two-player game of one manipulator and one countermanipulator; both
/// insincere votes are validated against their definitions.
inline GSGame build_mcm_game(const Profile& p, Rule r, VoterId manipulator, const Vote& manip_vote,
                             VoterId counter, const Vote& counter_vote) {
    auto all = gs_manipulations(p, r, manipulator);
    auto mset = manip_vote.top_set(r.k);
    auto match = std::find_if(all.begin(), all.end(),
                              [&](const Manipulation& m) { return m.approval_set == mset; });
    if (match == all.end())
        throw std::invalid_argument("vote of voter " + std::to_string(manipulator + 1) +
                                    " is not a GS-manipulation");
    auto counters = countermanipulations(p, r, *match, counter);
    auto cset = counter_vote.top_set(r.k);
    bool ok = std::any_of(counters.begin(), counters.end(), [&](const CounterManipulation& cm) {
        return cm.approval_set == cset;
    });
    if (!ok)
        throw std::invalid_argument("vote of voter " + std::to_string(counter + 1) +
                                    " is not a countermanipulation against the given manipulation");

    GSGame g{p, r, Flavor::WithCounter, {}};
    auto s1 = detail::sincere_strategy_set(p, r, manipulator, PlayerRole::Manipulator);
    s1.kind = match->kind;
    s1.target = match->target;
    detail::append_strategy(s1, r, manip_vote);
    auto s2 = detail::sincere_strategy_set(p, r, counter, PlayerRole::CounterManipulator);
    detail::append_strategy(s2, r, counter_vote);
    g.players.push_back(std::move(s1));
    g.players.push_back(std::move(s2));
    return g;
}

/// The preference profile realized by an action profile: players cast their
/// chosen strategies, everyone else stays sincere.
inline Profile resolve(const GSGame& g, const ActionProfile& a) {
    if (static_cast<int>(a.size()) != g.num_players())
        throw std::invalid_argument("resolve: action profile has wrong arity");
    Profile out = g.profile;
    for (int i = 0; i < g.num_players(); ++i) {
        const auto& s = g.players[static_cast<size_t>(i)];
        const int idx = a[static_cast<size_t>(i)];
        if (idx < 0 || idx >= s.size()) throw std::out_of_range("resolve: strategy index out of range");
        out.votes[static_cast<size_t>(s.voter)] = s.strategies[static_cast<size_t>(idx)];
    }
    return out;
}

namespace detail {

/// Incremental winner evaluation over action profiles: non-player approvals
/// are fixed, player approvals are overlaid per strategy choice.
class GameEvaluator {
public:
    explicit GameEvaluator(const GSGame& g) : game_(&g) {
        const Profile& p = g.profile;
        base_.assign(static_cast<size_t>(p.num_candidates()), 0);
        std::vector<char> is_player(static_cast<size_t>(p.num_voters()), 0);
        for (const auto& s : g.players) is_player[static_cast<size_t>(s.voter)] = 1;
        const int width = std::min(g.rule.k, p.num_candidates());
        for (VoterId v = 0; v < p.num_voters(); ++v) {
            if (is_player[static_cast<size_t>(v)]) continue;
            for (int j = 0; j < width; ++j)
                ++base_[static_cast<size_t>(p.vote(v).ranking[static_cast<size_t>(j)])];
        }
        work_ = base_;
    }

    CandidateId winner_at(const ActionProfile& a) {
        const auto& players = game_->players;
        for (size_t i = 0; i < players.size(); ++i)
            for (CandidateId c : players[i].approvals[static_cast<size_t>(a[i])]) ++work_[static_cast<size_t>(c)];
        CandidateId w = best_of(work_, game_->profile.tiebreak);
        for (size_t i = 0; i < players.size(); ++i)
            for (CandidateId c : players[i].approvals[static_cast<size_t>(a[i])]) --work_[static_cast<size_t>(c)];
        return w;
    }

private:
    const GSGame* game_;
    std::vector<int> base_;
    std::vector<int> work_;
};

} // namespace detail

struct OutcomeTable {
    std::vector<int> dims;
    std::vector<CandidateId> winners; // flat, action profiles in lexicographic order

    long long size() const { return static_cast<long long>(winners.size()); }

    long long index_of(const ActionProfile& a) const {
        long long idx = 0;
        for (size_t i = 0; i < dims.size(); ++i) idx = idx * dims[i] + a[i];
        return idx;
    }

    ActionProfile profile_at(long long idx) const {
        ActionProfile a(dims.size());
        for (size_t i = dims.size(); i-- > 0;) {
            a[i] = static_cast<int>(idx % dims[i]);
            idx /= dims[i];
        }
        return a;
    }

    CandidateId winner_at(const ActionProfile& a) const {
        return winners[static_cast<size_t>(index_of(a))];
    }
};

inline OutcomeTable outcome_table(const GSGame& g, long long budget = kDefaultBudget) {
    const long long cells = g.cell_count();
    if (cells > budget) throw BudgetExceeded(cells, budget);

    OutcomeTable t;
    t.dims.reserve(static_cast<size_t>(g.num_players()));
    for (const auto& s : g.players) t.dims.push_back(s.size());
    t.winners.reserve(static_cast<size_t>(cells));

    detail::GameEvaluator eval(g);
    ActionProfile a(static_cast<size_t>(g.num_players()), 0);
    for (long long i = 0; i < cells; ++i) {
        t.winners.push_back(eval.winner_at(a));
        for (size_t p = a.size(); p-- > 0;) { // lexicographic odometer
            if (++a[p] < t.dims[p]) break;
            a[p] = 0;
        }
    }
    return t;
}

namespace detail {

inline std::vector<long long> strides_of(const std::vector<int>& dims) {
    std::vector<long long> strides(dims.size(), 1);
    for (size_t i = dims.size(); i-- > 1;) strides[i - 1] = strides[i] * dims[i];
    return strides;
}

} // namespace detail

/// Pure Nash equilibria: action profiles admitting no strictly improving
/// unilateral deviation, in lexicographic index order.
inline std::vector<ActionProfile> pure_nash(const GSGame& g, long long budget = kDefaultBudget) {
    const OutcomeTable t = outcome_table(g, budget);
    const auto strides = detail::strides_of(t.dims);
    std::vector<ActionProfile> out;
    ActionProfile a(t.dims.size(), 0);
    for (long long idx = 0; idx < t.size(); ++idx) {
        bool nash = true;
        const CandidateId cur = t.winners[static_cast<size_t>(idx)];
        for (size_t p = 0; p < t.dims.size() && nash; ++p) {
            const Vote& pref = g.profile.vote(g.players[p].voter);
            for (int alt = 0; alt < t.dims[p]; ++alt) {
                if (alt == a[p]) continue;
                const CandidateId dev =
                    t.winners[static_cast<size_t>(idx + (alt - a[p]) * strides[p])];
                if (dev != cur && pref.prefers(dev, cur)) {
                    nash = false;
                    break;
                }
            }
        }
        if (nash) out.push_back(a);
        for (size_t p = a.size(); p-- > 0;) {
            if (++a[p] < t.dims[p]) break;
            a[p] = 0;
        }
    }
    return out;
}

struct BestResponseEdge {
    long long from = 0; // node index
    int player = 0;
    int to_strategy = 0;
};

struct BestResponseGraph {
    OutcomeTable outcomes;
    std::vector<BestResponseEdge> edges; // ordered by (from, player, to_strategy)
    std::vector<long long> sinks;        // node indices with no outgoing edge = pure NE

    long long edge_target(const BestResponseEdge& e) const {
        auto a = outcomes.profile_at(e.from);
        a[static_cast<size_t>(e.player)] = e.to_strategy;
        return outcomes.index_of(a);
    }

    bool contains_edge(const ActionProfile& from, int player, int to_strategy) const {
        const long long f = outcomes.index_of(from);
        for (const auto& e : edges)
            if (e.from == f && e.player == player && e.to_strategy == to_strategy) return true;
        return false;
    }
};

inline BestResponseGraph best_response_graph(const GSGame& g, long long budget = kDefaultBudget) {
    BestResponseGraph br;
    br.outcomes = outcome_table(g, budget);
    const auto& t = br.outcomes;
    const auto strides = detail::strides_of(t.dims);
    ActionProfile a(t.dims.size(), 0);
    for (long long idx = 0; idx < t.size(); ++idx) {
        bool has_out = false;
        const CandidateId cur = t.winners[static_cast<size_t>(idx)];
        for (size_t p = 0; p < t.dims.size(); ++p) {
            const Vote& pref = g.profile.vote(g.players[p].voter);
            for (int alt = 0; alt < t.dims[p]; ++alt) {
                if (alt == a[p]) continue;
                const CandidateId dev =
                    t.winners[static_cast<size_t>(idx + (alt - a[p]) * strides[p])];
                if (dev != cur && pref.prefers(dev, cur)) {
                    br.edges.push_back({idx, static_cast<int>(p), alt});
                    has_out = true;
                }
            }
        }
        if (!has_out) br.sinks.push_back(idx);
        for (size_t p = a.size(); p-- > 0;) {
            if (++a[p] < t.dims[p]) break;
            a[p] = 0;
        }
    }
    return br;
}

/// Deterministic better-reply walk from the all-sincere node: the lowest
/// player with an improving deviation moves to his best response. Returns
/// the node cycle hit by the walk, or empty when the walk reaches a sink.
inline std::vector<long long> attractor_cycle(const GSGame& g, const OutcomeTable& t) {
    const auto strides = detail::strides_of(t.dims);
    std::vector<long long> path;
    std::vector<long long> seen_at(static_cast<size_t>(t.size()), -1);
    long long idx = 0;
    while (seen_at[static_cast<size_t>(idx)] < 0) {
        seen_at[static_cast<size_t>(idx)] = static_cast<long long>(path.size());
        path.push_back(idx);
        ActionProfile a = t.profile_at(idx);
        std::optional<long long> next;
        for (size_t p = 0; p < t.dims.size() && !next; ++p) {
            const Vote& pref = g.profile.vote(g.players[p].voter);
            std::optional<int> best_alt;
            CandidateId best_winner = t.winners[static_cast<size_t>(idx)];
            for (int alt = 0; alt < t.dims[p]; ++alt) {
                if (alt == a[p]) continue;
                const CandidateId dev =
                    t.winners[static_cast<size_t>(idx + (alt - a[p]) * strides[p])];
                if (dev != best_winner && pref.prefers(dev, best_winner)) {
                    best_winner = dev;
                    best_alt = alt;
                }
            }
            if (best_alt) next = idx + (*best_alt - a[p]) * strides[p];
        }
        if (!next) return {}; // reached a pure NE
        idx = *next;
    }
    return {path.begin() + seen_at[static_cast<size_t>(idx)], path.end()};
}

/// Checks a single action profile for Nash stability without enumerating
/// the whole table.
inline bool is_pure_nash_point(const GSGame& g, const ActionProfile& a) {
    detail::GameEvaluator eval(g);
    ActionProfile probe = a;
    const CandidateId cur = eval.winner_at(a);
    for (size_t p = 0; p < probe.size(); ++p) {
        const Vote& pref = g.profile.vote(g.players[p].voter);
        const int keep = probe[p];
        for (int alt = 0; alt < g.players[p].size(); ++alt) {
            if (alt == keep) continue;
            probe[p] = alt;
            const CandidateId dev = eval.winner_at(probe);
            if (dev != cur && pref.prefers(dev, cur)) return false;
        }
        probe[p] = keep;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Rendering helpers
// ---------------------------------------------------------------------------

/// Strategy labels: "s" for the sincere vote, then "i", "i'", "i''", ...
inline std::string strategy_label(int idx) {
    if (idx == 0) return "s";
    return "i" + std::string(static_cast<size_t>(idx - 1), '\'');
}

inline std::string action_label(const ActionProfile& a) {
    std::string out = "(";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) out += ", ";
        out += strategy_label(a[i]);
    }
    return out + ")";
}

inline std::string to_dot(const GSGame& g, const BestResponseGraph& br) {
    const auto& t = br.outcomes;
    std::vector<char> is_sink(static_cast<size_t>(t.size()), 0);
    for (long long s : br.sinks) is_sink[static_cast<size_t>(s)] = 1;
    std::ostringstream out;
    out << "digraph best_response {\n";
    out << "  rankdir=LR;\n  node [shape=box];\n";
    for (long long idx = 0; idx < t.size(); ++idx) {
        const auto label = action_label(t.profile_at(idx));
        out << "  \"" << label << "\" [label=\"" << label << "\\n"
            << g.profile.candidates.name(t.winners[static_cast<size_t>(idx)]) << "\"";
        if (is_sink[static_cast<size_t>(idx)]) out << ", peripheries=2";
        out << "];\n";
    }
    for (const auto& e : br.edges) {
        out << "  \"" << action_label(t.profile_at(e.from)) << "\" -> \""
            << action_label(t.profile_at(br.edge_target(e))) << "\" [label=\"voter "
            << g.players[static_cast<size_t>(e.player)].voter + 1 << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Constructive equilibrium procedures
// ---------------------------------------------------------------------------

struct ProofTrace {
    std::string method;
    std::vector<std::pair<std::string, std::string>> items;

    void add(std::string key, std::string value) {
        items.emplace_back(std::move(key), std::move(value));
    }
};

struct ConstructionResult {
    GSGame game;
    ActionProfile equilibrium;
    bool verified = false;    // deviation check passed
    bool via_fallback = false; // exhaustive enumeration was needed
    ProofTrace trace;
};

namespace detail {

inline CandidateId dominance_max(const ScoreTable& sc, const TieBreakOrder& tb,
                                 const std::vector<CandidateId>& cands) {
    CandidateId best = cands.front();
    for (CandidateId c : cands) {
        if (c == best) continue;
        if (sc.score(c) > sc.score(best) ||
            (sc.score(c) == sc.score(best) && tb.before(c, best)))
            best = c;
    }
    return best;
}

inline std::optional<int> strategy_with_approval(const StrategySet& s,
                                                 const std::vector<CandidateId>& set) {
    for (int i = 1; i < s.size(); ++i)
        if (s.approvals[static_cast<size_t>(i)] == set) return i;
    return std::nullopt;
}

inline ConstructionResult finish(GSGame game, ActionProfile act, ProofTrace trace,
                                 long long budget) {
    ConstructionResult res{std::move(game), std::move(act), false, false, std::move(trace)};
    res.verified = is_pure_nash_point(res.game, res.equilibrium);
    if (res.verified) return res;
    // The construction missed; fall back to exhaustive search. Under the
    // restricted policies these procedures run on, an equilibrium exists.
    auto all = pure_nash(res.game, budget);
    if (all.empty())
        throw std::logic_error("no pure Nash equilibrium found where one is guaranteed (method " +
                               res.trace.method + ")");
    res.equilibrium = all.front();
    res.verified = true;
    res.via_fallback = true;
    res.trace.add("fallback", "construction point failed verification; exhaustive search used");
    return res;
}

} // namespace detail

/// Equilibrium for Plurality, any voters strategic (manipulators plus
/// countermanipulators, full strategy sets): promote the dominance-maximal
/// manipulable candidate; seat a second promoter of the same candidate if
/// one exists, otherwise the strongest countermanipulation.
inline ConstructionResult construct_ne_plurality(const Profile& p,
                                                 long long budget = kDefaultBudget) {
    const Rule r{1};
    GSGame game = build_game(p, r, Policy::All, Flavor::WithCounter);
    ProofTrace trace;
    ActionProfile act(static_cast<size_t>(game.num_players()), 0);

    std::vector<int> manip_players;
    for (int i = 0; i < game.num_players(); ++i)
        if (game.players[static_cast<size_t>(i)].role == PlayerRole::Manipulator)
            manip_players.push_back(i);

    if (manip_players.empty()) {
        trace.method = "plurality-trivial";
        trace.add("note", "no GS-manipulators; the sincere profile is an equilibrium");
        return detail::finish(std::move(game), std::move(act), std::move(trace), budget);
    }

    const auto sc = scores(p, r);
    const CandidateId w = winner(p, r);
    const int t = sc.score(w);
    trace.add("w", p.candidates.name(w));
    trace.add("t", std::to_string(t));

    // S: candidates that win with one extra point.
    std::vector<CandidateId> S{w};
    for (CandidateId c = 0; c < p.num_candidates(); ++c) {
        if (c == w) continue;
        if ((sc.score(c) == t && !p.tiebreak.before(c, w)) ||
            (sc.score(c) == t - 1 && p.tiebreak.before(c, w)))
            S.push_back(c);
    }
    std::sort(S.begin(), S.end());
    trace.add("S", candidate_list(p, S));

    std::vector<CandidateId> S_plus;
    for (int i : manip_players) {
        CandidateId tgt = *game.players[static_cast<size_t>(i)].target;
        if (std::find(S_plus.begin(), S_plus.end(), tgt) == S_plus.end()) S_plus.push_back(tgt);
    }
    std::sort(S_plus.begin(), S_plus.end());
    trace.add("S+", candidate_list(p, S_plus));

    const CandidateId p_star = detail::dominance_max(sc, p.tiebreak, S_plus);
    trace.add("p*", p.candidates.name(p_star));

    int first = -1, second = -1;
    for (int i : manip_players) {
        if (*game.players[static_cast<size_t>(i)].target != p_star) continue;
        if (first < 0) first = i;
        else if (second < 0) second = i;
    }
    const std::vector<CandidateId> star_set{p_star};
    auto seat = [&](int player) {
        auto idx = detail::strategy_with_approval(game.players[static_cast<size_t>(player)], star_set);
        act[static_cast<size_t>(player)] = idx.value_or(1);
        trace.add("seat", "voter " + std::to_string(game.players[static_cast<size_t>(player)].voter + 1) +
                              " promotes " + p.candidates.name(p_star));
    };
    seat(first);

    if (second >= 0) {
        seat(second);
        trace.method = "plurality-two-promoters";
        return detail::finish(std::move(game), std::move(act), std::move(trace), budget);
    }

    // Lone promoter: look for the dominance-maximal countermanipulation
    // toward a candidate of S that no manipulator can reach.
    const VoterId voter_i = game.players[static_cast<size_t>(first)].voter;
    auto manips = gs_manipulations(p, r, voter_i);
    auto m_it = std::find_if(manips.begin(), manips.end(), [&](const Manipulation& m) {
        return m.approval_set == star_set;
    });

    std::optional<CandidateId> q;
    int counter_player = -1;
    std::vector<CandidateId> counter_set;
    if (m_it != manips.end()) {
        for (int j = 0; j < game.num_players(); ++j) {
            const auto& s = game.players[static_cast<size_t>(j)];
            if (s.role != PlayerRole::CounterManipulator) continue;
            auto cms = countermanipulations(p, r, *m_it, s.voter);
            if (cms.empty()) continue;
            const CandidateId cq = cms.front().result;
            if (!std::binary_search(S.begin(), S.end(), cq)) continue;
            if (std::binary_search(S_plus.begin(), S_plus.end(), cq)) continue;
            if (!q || (sc.score(cq) > sc.score(*q)) ||
                (sc.score(cq) == sc.score(*q) && p.tiebreak.before(cq, *q))) {
                q = cq;
                counter_player = j;
                counter_set = cms.front().approval_set;
            }
        }
    }

    if (q) {
        auto idx = detail::strategy_with_approval(game.players[static_cast<size_t>(counter_player)],
                                                  counter_set);
        act[static_cast<size_t>(counter_player)] = idx.value_or(1);
        trace.add("q", p.candidates.name(*q));
        trace.add("seat", "voter " +
                              std::to_string(game.players[static_cast<size_t>(counter_player)].voter + 1) +
                              " counters toward " + p.candidates.name(*q));
        trace.method = "plurality-countermanipulation";
    } else {
        trace.method = "plurality-lone-promoter";
    }
    return detail::finish(std::move(game), std::move(act), std::move(trace), budget);
}

namespace detail {

/// Best-response iteration used by the 2-Approval escalation: capped by the
/// size of the strategy space; empty result means a cycle was hit.
inline std::optional<ActionProfile> best_response_walk(const GSGame& g, ActionProfile start,
                                                       long long cap) {
    GameEvaluator eval(g);
    ActionProfile a = std::move(start);
    for (long long step = 0; step <= cap; ++step) {
        const CandidateId cur = eval.winner_at(a);
        std::optional<std::pair<size_t, int>> move;
        for (size_t p = 0; p < a.size() && !move; ++p) {
            const Vote& pref = g.profile.vote(g.players[p].voter);
            ActionProfile probe = a;
            CandidateId best = cur;
            std::optional<int> best_alt;
            for (int alt = 0; alt < g.players[p].size(); ++alt) {
                if (alt == a[p]) continue;
                probe[p] = alt;
                const CandidateId dev = eval.winner_at(probe);
                if (dev != best && pref.prefers(dev, best)) {
                    best = dev;
                    best_alt = alt;
                }
            }
            if (best_alt) move = {p, *best_alt};
        }
        if (!move) return a;
        a[move->first] = move->second;
    }
    return std::nullopt;
}

} // namespace detail

/// Equilibrium for 2-Approval GS-games whose strategy sets satisfy the
/// soundness closure (every sound manipulation is available). Seats a
/// single sound promotion of the dominance-maximal promoter target when one
/// exists; otherwise escalates by best-response iteration with exhaustive
/// fallback. All-demoter games are settled by one demotion.
inline ConstructionResult construct_ne_2approval_sound(const Profile& p,
                                                       long long budget = kDefaultBudget) {
    const Rule r{2};
    GSGame game = build_game(p, r, Policy::SoundOnly, Flavor::GSOnly);
    ProofTrace trace;
    ActionProfile act(static_cast<size_t>(game.num_players()), 0);

    if (game.num_players() == 0) {
        trace.method = "2app-trivial";
        return detail::finish(std::move(game), std::move(act), std::move(trace), budget);
    }

    const auto sc = scores(p, r);
    std::vector<int> promoters, demoters;
    for (int i = 0; i < game.num_players(); ++i) {
        const auto& s = game.players[static_cast<size_t>(i)];
        if (s.kind == ManipulationKind::Promoter) promoters.push_back(i);
        else demoters.push_back(i);
    }

    if (!promoters.empty()) {
        std::vector<CandidateId> targets;
        for (int i : promoters) targets.push_back(*game.players[static_cast<size_t>(i)].target);
        const CandidateId q = detail::dominance_max(sc, p.tiebreak, targets);
        trace.add("q", p.candidates.name(q));

        for (int i : promoters) {
            const auto& s = game.players[static_cast<size_t>(i)];
            if (*s.target != q) continue;
            const auto sincere_set = p.vote(s.voter).top_set(r.k);
            for (int idx = 1; idx < s.size(); ++idx) {
                if (detail::set_difference(s.approvals[static_cast<size_t>(idx)], sincere_set).size() != 1)
                    continue; // not a lone promotion
                ActionProfile candidate = act;
                candidate[static_cast<size_t>(i)] = idx;
                if (is_pure_nash_point(game, candidate)) {
                    trace.method = "2app-lone-promotion";
                    trace.add("seat", "voter " + std::to_string(s.voter + 1) + " promotes only " +
                                          p.candidates.name(q));
                    return detail::finish(std::move(game), std::move(candidate), std::move(trace),
                                          budget);
                }
            }
        }

        // Co-promotion case: walk best responses from the first sound
        // manipulation toward q.
        for (int i : promoters) {
            const auto& s = game.players[static_cast<size_t>(i)];
            if (*s.target != q || s.size() < 2) continue;
            ActionProfile start = act;
            start[static_cast<size_t>(i)] = 1;
            if (auto sink = detail::best_response_walk(game, start, game.cell_count())) {
                trace.method = "2app-escalation";
                trace.add("seat", "voter " + std::to_string(s.voter + 1) +
                                      " opens; best-response iteration reached a stable point");
                return detail::finish(std::move(game), std::move(*sink), std::move(trace), budget);
            }
            break;
        }
        // Iteration cycled; hand over to exhaustive search via finish().
        trace.method = "2app-exhaustive";
        act.assign(static_cast<size_t>(game.num_players()), 0);
        act[static_cast<size_t>(promoters.front())] = std::min(1, game.players[static_cast<size_t>(promoters.front())].size() - 1);
        return detail::finish(std::move(game), std::move(act), std::move(trace), budget);
    }

    // Only demoters: they share one target; a single demotion settles it.
    const int d = demoters.front();
    if (game.players[static_cast<size_t>(d)].size() > 1) act[static_cast<size_t>(d)] = 1;
    trace.method = "2app-demoters";
    trace.add("seat", "voter " + std::to_string(game.players[static_cast<size_t>(d)].voter + 1) +
                          " demotes the winner");
    return detail::finish(std::move(game), std::move(act), std::move(trace), budget);
}

/// Equilibrium for 3-Approval GS-games restricted to minimal manipulations.
/// Promoter case: seat the dominance-maximal promoter target. All-demoter
/// case: either one second-target demoter acts alone, or one blocker per
/// reachable side candidate locks in the first target.
inline ConstructionResult construct_ne_3approval_minimal(const Profile& p,
                                                         long long budget = kDefaultBudget) {
    const Rule r{3};
    GSGame game = build_game(p, r, Policy::MinimalOnly, Flavor::GSOnly);
    ProofTrace trace;
    ActionProfile act(static_cast<size_t>(game.num_players()), 0);

    if (game.num_players() == 0) {
        trace.method = "3app-trivial";
        return detail::finish(std::move(game), std::move(act), std::move(trace), budget);
    }

    const auto sc = scores(p, r);
    const CandidateId w = winner(p, r);
    std::vector<int> promoters, demoters;
    for (int i = 0; i < game.num_players(); ++i) {
        const auto& s = game.players[static_cast<size_t>(i)];
        if (s.kind == ManipulationKind::Promoter) promoters.push_back(i);
        else demoters.push_back(i);
    }

    if (!promoters.empty()) {
        std::vector<CandidateId> targets;
        for (int i : promoters) targets.push_back(*game.players[static_cast<size_t>(i)].target);
        const CandidateId pbar = detail::dominance_max(sc, p.tiebreak, targets);
        trace.add("p_bar", p.candidates.name(pbar));
        for (int i : promoters) {
            const auto& s = game.players[static_cast<size_t>(i)];
            if (*s.target != pbar || s.size() < 2) continue;
            act[static_cast<size_t>(i)] = 1;
            trace.method = "3app-promoter";
            trace.add("seat", "voter " + std::to_string(s.voter + 1) + " promotes " +
                                  p.candidates.name(pbar));
            return detail::finish(std::move(game), std::move(act), std::move(trace), budget);
        }
        trace.method = "3app-promoter";
        return detail::finish(std::move(game), std::move(act), std::move(trace), budget);
    }

    // All demoters. Their actionable targets number at most two; demoters
    // whose minimal set came out empty cannot move and are ignored.
    std::vector<int> active;
    for (int i : demoters)
        if (game.players[static_cast<size_t>(i)].size() > 1) active.push_back(i);
    std::vector<CandidateId> targets;
    for (int i : active) {
        CandidateId tgt = *game.players[static_cast<size_t>(i)].target;
        if (std::find(targets.begin(), targets.end(), tgt) == targets.end()) targets.push_back(tgt);
    }

    if (targets.empty()) {
        trace.method = "3app-demoters-immobile";
        return detail::finish(std::move(game), std::move(act), std::move(trace), budget);
    }
    if (targets.size() == 1) {
        act[static_cast<size_t>(active.front())] = 1;
        trace.method = "3app-demoters-single-target";
        trace.add("p1", p.candidates.name(targets.front()));
        return detail::finish(std::move(game), std::move(act), std::move(trace), budget);
    }

    const CandidateId p1 = detail::dominance_max(sc, p.tiebreak, targets);
    CandidateId p2 = targets.front() == p1 ? targets.back() : targets.front();
    trace.add("p1", p.candidates.name(p1));
    trace.add("p2", p.candidates.name(p2));

    std::vector<int> v1, v2; // player indices by target
    for (int i : active)
        (*game.players[static_cast<size_t>(i)].target == p1 ? v1 : v2).push_back(i);

    // v1x[x] = players of V1 whose lone promotion of x completes a win for x
    // after some V2 member demotes {w, p1}.
    auto promoted = [&](int player, int idx) {
        const auto& s = game.players[static_cast<size_t>(player)];
        return detail::set_difference(s.approvals[static_cast<size_t>(idx)],
                                      p.vote(s.voter).top_set(r.k));
    };
    auto v1_for = [&](CandidateId x) {
        std::vector<std::pair<int, int>> out; // (player, strategy)
        for (int j : v1) {
            const auto& sj = game.players[static_cast<size_t>(j)];
            for (int idx = 1; idx < sj.size(); ++idx) {
                auto up = promoted(j, idx);
                if (up.size() != 1 || up.front() != x) continue;
                for (int i : v2) {
                    const auto& si = game.players[static_cast<size_t>(i)];
                    for (int idx2 = 1; idx2 < si.size(); ++idx2) {
                        auto up2 = promoted(i, idx2);
                        if (!detail::set_contains(up2, x)) continue;
                        ActionProfile pair(static_cast<size_t>(game.num_players()), 0);
                        pair[static_cast<size_t>(j)] = idx;
                        pair[static_cast<size_t>(i)] = idx2;
                        if (winner(resolve(game, pair), r) == x) {
                            out.emplace_back(j, idx);
                            goto next_v1_member;
                        }
                    }
                }
            }
        next_v1_member:;
        }
        return out;
    };

    // A V2 member whose promoted pair meets no blocker settles it alone.
    for (int i : v2) {
        const auto& si = game.players[static_cast<size_t>(i)];
        for (int idx = 1; idx < si.size(); ++idx) {
            auto up = promoted(i, idx);
            bool blocked = false;
            for (CandidateId x : up)
                if (!v1_for(x).empty()) blocked = true;
            if (!blocked) {
                act[static_cast<size_t>(i)] = idx;
                trace.method = "3app-demoters-v2-alone";
                trace.add("seat", "voter " + std::to_string(si.voter + 1) + " elects " +
                                      p.candidates.name(p2));
                trace.add("promoted", candidate_list(p, up));
                return detail::finish(std::move(game), std::move(act), std::move(trace), budget);
            }
        }
    }

    // Otherwise seat one blocker per reachable side candidate; p1 wins.
    std::set<std::pair<int, int>> seats;
    for (CandidateId x = 0; x < p.num_candidates(); ++x) {
        if (x == w || x == p1 || x == p2) continue;
        auto members = v1_for(x);
        if (!members.empty()) seats.insert(members.front());
    }
    for (auto [player, idx] : seats) {
        act[static_cast<size_t>(player)] = idx;
        trace.add("seat", "voter " +
                              std::to_string(game.players[static_cast<size_t>(player)].voter + 1) +
                              " blocks via " +
                              candidate_list(p, promoted(player, idx)));
    }
    trace.method = "3app-demoters-v1-team";
    return detail::finish(std::move(game), std::move(act), std::move(trace), budget);
}

} // namespace gsg
