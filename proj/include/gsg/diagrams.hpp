#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gsg/game.hpp"

namespace gsg {

/// Orientation of one diagram edge, named from the moving player's side:
/// TowardInsincere means he prefers the endpoint where he plays insincerely.
/// Indifferent means both endpoints elect the same candidate.
enum class EdgeDir { TowardInsincere, TowardSincere, Indifferent };

inline const char* to_string(EdgeDir d) {
    switch (d) {
        case EdgeDir::TowardInsincere: return ">i";
        case EdgeDir::TowardSincere: return ">s";
        default: return "<>";
    }
}

enum class DiagramFlavor { GS, MCM };

/// The four oriented edges of a two-player, two-strategy game over the
/// vertices (s,s), (i,s), (s,i), (i,i):
///   e1: (s,s)-(i,s), moved by player 1
///   e2: (s,s)-(s,i), moved by player 2
///   e3: (s,i)-(i,i), moved by player 1
///   e4: (i,s)-(i,i), moved by player 2
struct Diagram2x2 {
    EdgeDir e1, e2, e3, e4;
};

struct DiagramClass {
    DiagramFlavor flavor;
    int label; // 1..6, rendered as roman numerals
};

inline const char* roman_label(int label) {
    static const char* names[] = {"", "i", "ii", "iii", "iv", "v", "vi"};
    return names[label];
}

inline std::string to_string(DiagramClass c) {
    return std::string(c.flavor == DiagramFlavor::GS ? "gs:(" : "mcm:(") + roman_label(c.label) + ")";
}

/// Reads the diagram orientations off a 2x2 game's outcome table.
inline Diagram2x2 extract_diagram(const GSGame& g) {
    if (g.num_players() != 2 || g.players[0].size() != 2 || g.players[1].size() != 2)
        throw std::invalid_argument("extract_diagram: game is not 2 players x 2 strategies");
    const auto t = outcome_table(g);
    const CandidateId ss = t.winner_at({0, 0}), is = t.winner_at({1, 0});
    const CandidateId si = t.winner_at({0, 1}), ii = t.winner_at({1, 1});
    const Vote& p1 = g.profile.vote(g.players[0].voter);
    const Vote& p2 = g.profile.vote(g.players[1].voter);
    auto dir = [](const Vote& mover, CandidateId at_sincere, CandidateId at_insincere) {
        if (at_sincere == at_insincere) return EdgeDir::Indifferent;
        return mover.prefers(at_insincere, at_sincere) ? EdgeDir::TowardInsincere
                                                       : EdgeDir::TowardSincere;
    };
    return Diagram2x2{dir(p1, ss, is), dir(p2, ss, si), dir(p1, si, ii), dir(p2, is, ii)};
}

/// Canonical class of a diagram. GS diagrams are labeled by the unordered
/// pair {e3, e4} (player renaming is a symmetry); MCM diagrams by the pair
/// (e2, e3) after placing the manipulator first.
inline DiagramClass classify(const Diagram2x2& d, DiagramFlavor flavor) {
    using E = EdgeDir;
    if (flavor == DiagramFlavor::GS) {
        if (d.e1 != E::TowardInsincere || d.e2 != E::TowardInsincere)
            throw std::invalid_argument("not a GS diagram: both sincere-profile edges must point away");
        auto pair_is = [&](E a, E b) {
            return (d.e3 == a && d.e4 == b) || (d.e3 == b && d.e4 == a);
        };
        int label = 0;
        if (pair_is(E::TowardInsincere, E::TowardInsincere)) label = 1;
        else if (pair_is(E::TowardSincere, E::TowardSincere)) label = 2;
        else if (pair_is(E::Indifferent, E::Indifferent)) label = 3;
        else if (pair_is(E::Indifferent, E::TowardInsincere)) label = 4;
        else if (pair_is(E::Indifferent, E::TowardSincere)) label = 5;
        else label = 6; // {TowardInsincere, TowardSincere}
        return {DiagramFlavor::GS, label};
    }

    Diagram2x2 c = d;
    if (c.e1 != E::TowardInsincere && c.e2 == E::TowardInsincere)
        c = Diagram2x2{d.e2, d.e1, d.e4, d.e3}; // put the manipulator first
    if (c.e1 != E::TowardInsincere || c.e4 != E::TowardInsincere || c.e2 == E::TowardInsincere)
        throw std::invalid_argument("not an MCM diagram: manipulation/countermanipulation edges malformed");
    int label = 0;
    if (c.e2 == E::TowardSincere) {
        if (c.e3 == E::TowardSincere) label = 1;
        else if (c.e3 == E::TowardInsincere) label = 2;
        else label = 3;
    } else { // e2 indifferent
        if (c.e3 == E::TowardSincere) label = 4;
        else if (c.e3 == E::TowardInsincere) label = 5;
        else label = 6;
    }
    return {DiagramFlavor::MCM, label};
}

// ---------------------------------------------------------------------------
// Realizability search
// ---------------------------------------------------------------------------

struct DiagramWitness {
    Profile profile;
    VoterId voter1; // manipulator (first manipulator for GS)
    Vote vote1;
    VoterId voter2; // second manipulator (GS) or countermanipulator (MCM)
    Vote vote2;
    DiagramClass cls;
};

struct SearchOptions {
    long long budget = kDefaultBudget; // bound on profiles examined
    bool all_tiebreaks = false;        // default: lexicographic only
    // Candidate-relabeling reduction: pin voter 1's ballot to the identity
    // permutation. Sound only when every tiebreak order is enumerated too,
    // since relabeling moves the tiebreak along with the votes.
    bool reduce_first_vote = false;
};

struct ScanResult {
    std::array<std::optional<DiagramWitness>, 6> witnesses; // index = label-1
    long long profiles_examined = 0;

    std::vector<int> realized_labels() const {
        std::vector<int> out;
        for (int i = 0; i < 6; ++i)
            if (witnesses[static_cast<size_t>(i)]) out.push_back(i + 1);
        return out;
    }
};

namespace detail {

inline long long count_profiles(int n_max, int m_max, const SearchOptions& opts, long long cap) {
    long long total = 0;
    for (int m = 2; m <= m_max; ++m) {
        long long fact = 1;
        for (int i = 2; i <= m; ++i) fact *= i;
        long long per_tuple = opts.all_tiebreaks ? fact : 1;
        for (int n = 2; n <= n_max; ++n) {
            long long tuples = per_tuple;
            const int free_votes = opts.reduce_first_vote ? n - 1 : n;
            for (int v = 0; v < free_votes; ++v) {
                if (tuples > cap / fact + 1) return cap + 1;
                tuples *= fact;
            }
            total += tuples;
            if (total > cap) return cap + 1;
        }
    }
    return total;
}

inline CandidateSet letters(int m) {
    std::vector<std::string> names;
    for (int i = 0; i < m; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
    return make_candidate_set(std::move(names));
}

inline GSGame two_by_two(const Profile& p, Rule r, VoterId a, const Vote& va, PlayerRole role_a,
                         VoterId b, const Vote& vb, PlayerRole role_b) {
    GSGame g{p, r, role_b == PlayerRole::CounterManipulator ? Flavor::WithCounter : Flavor::GSOnly, {}};
    auto sa = sincere_strategy_set(p, r, a, role_a);
    append_strategy(sa, r, va);
    auto sb = sincere_strategy_set(p, r, b, role_b);
    append_strategy(sb, r, vb);
    g.players.push_back(std::move(sa));
    g.players.push_back(std::move(sb));
    return g;
}

} // namespace detail

/// Exhaustive scan over all vote tuples for n = 2..n_max voters and
/// m = 2..m_max candidates (lexicographic tiebreak unless all_tiebreaks),
/// recording the first witness found for each diagram class. GS flavor
/// pairs the manipulations of profiles with exactly two GS-manipulators;
/// MCM flavor pairs each manipulation with each countermanipulation
/// against it. Stops early once `stop_at_label` is witnessed.
inline ScanResult realizability_scan(DiagramFlavor flavor, Rule r, int n_max, int m_max,
                                     SearchOptions opts = {},
                                     std::optional<int> stop_at_label = std::nullopt) {
    if (opts.reduce_first_vote && !opts.all_tiebreaks)
        throw std::invalid_argument(
            "first-vote reduction is only sound when all tiebreak orders are enumerated");
    const long long total = detail::count_profiles(n_max, m_max, opts, opts.budget);
    if (total > opts.budget) throw BudgetExceeded(total, opts.budget);

    ScanResult result;
    auto record = [&](int label, const DiagramWitness& w) {
        auto& slot = result.witnesses[static_cast<size_t>(label - 1)];
        if (!slot) slot = w;
        return stop_at_label && *stop_at_label == label;
    };

    for (int m = 2; m <= m_max; ++m) {
        if (r.k > m - 1) continue;
        const auto cs = detail::letters(m);

        std::vector<std::vector<CandidateId>> perms;
        {
            std::vector<CandidateId> ident(static_cast<size_t>(m));
            for (int i = 0; i < m; ++i) ident[static_cast<size_t>(i)] = i;
            std::vector<CandidateId> cur = ident;
            do perms.push_back(cur);
            while (std::next_permutation(cur.begin(), cur.end()));
        }
        const size_t np = perms.size();

        std::vector<std::vector<CandidateId>> tiebreaks;
        if (opts.all_tiebreaks) tiebreaks = perms;
        else tiebreaks.push_back(perms.front()); // identity = lexicographic

        for (int n = 2; n <= n_max; ++n) {
            std::vector<size_t> odo(static_cast<size_t>(n), 0);
            while (true) {
                // voter 1 is the most significant odometer digit, so under
                // the reduction the remaining combinations are all skippable
                if (opts.reduce_first_vote && odo[0] != 0) break;
                for (const auto& tb : tiebreaks) {
                    std::vector<Vote> votes;
                    votes.reserve(static_cast<size_t>(n));
                    for (size_t v = 0; v < odo.size(); ++v) votes.push_back(make_vote(perms[odo[v]], m));
                    Profile p = make_profile(cs, std::move(votes), make_tiebreak(tb, m));
                    ++result.profiles_examined;

                    if (flavor == DiagramFlavor::GS) {
                        std::vector<VoterId> manip;
                        for (VoterId i = 0; i < n && static_cast<int>(manip.size()) <= 2; ++i)
                            if (best_target(p, r, i)) manip.push_back(i);
                        if (manip.size() != 2) continue;
                        for (const auto& m1 : gs_manipulations(p, r, manip[0]))
                            for (const auto& m2 : gs_manipulations(p, r, manip[1])) {
                                auto g = detail::two_by_two(p, r, manip[0], m1.display_vote,
                                                            PlayerRole::Manipulator, manip[1],
                                                            m2.display_vote, PlayerRole::Manipulator);
                                auto cls = classify(extract_diagram(g), DiagramFlavor::GS);
                                if (record(cls.label, {p, manip[0], m1.display_vote, manip[1],
                                                       m2.display_vote, cls}))
                                    return result;
                            }
                    } else {
                        const auto manipulators = gs_manipulators(p, r);
                        for (VoterId i : manipulators)
                            for (const auto& mi : gs_manipulations(p, r, i))
                                for (VoterId j = 0; j < n; ++j) {
                                    if (j == i) continue;
                                    if (std::binary_search(manipulators.begin(), manipulators.end(), j))
                                        continue;
                                    for (const auto& cm : countermanipulations(p, r, mi, j)) {
                                        auto g = detail::two_by_two(
                                            p, r, i, mi.display_vote, PlayerRole::Manipulator, j,
                                            cm.display_vote, PlayerRole::CounterManipulator);
                                        auto cls = classify(extract_diagram(g), DiagramFlavor::MCM);
                                        if (record(cls.label, {p, i, mi.display_vote, j,
                                                               cm.display_vote, cls}))
                                            return result;
                                    }
                                }
                    }
                }
                size_t v = odo.size();
                bool wrapped = true;
                while (v-- > 0) {
                    if (++odo[v] < np) {
                        wrapped = false;
                        break;
                    }
                    odo[v] = 0;
                }
                if (wrapped) break;
            }
        }
    }
    return result;
}

/// First witness realizing one diagram class within the bounds, or absent.
inline std::optional<DiagramWitness> realizability_search(DiagramFlavor flavor, int label, Rule r,
                                                          int n_max, int m_max,
                                                          SearchOptions opts = {}) {
    auto scan = realizability_scan(flavor, r, n_max, m_max, opts, label);
    return scan.witnesses[static_cast<size_t>(label - 1)];
}

// ---------------------------------------------------------------------------
// Manipulator/countermanipulator reference games
// ---------------------------------------------------------------------------

struct McmFixtureEntry {
    std::string name;
    int expected_label;
    Diagram2x2 diagram;
    DiagramClass actual;
    bool pass;
};

struct McmFixtureReport {
    std::vector<McmFixtureEntry> entries;
    bool all_classes_distinct = false;
    bool pass = false;
};

/// Builds the reference two-player manipulator/countermanipulator games
/// (five 2-Approval tables plus the two Plurality constructions) and checks
/// that together they realize all six MCM classes, pairwise distinct.
inline McmFixtureReport verify_mcm_fixtures() {
    struct Entry {
        const char* name;
        int expected;
        Rule rule;
        const char* profile;
        const char* manip_vote;   // full ranking of voter 1 (the manipulator)
        const char* counter_vote; // full ranking of voter 2
    };
    // Two-voter 2-Approval games share the tie-break x>e>a>b>c>d>u; a wins
    // sincerely, voter 1 manipulates, voter 2 counters.
    static const Entry table[] = {
        {"2app-(i)", 1, {2},
         "candidates: a b c d e x\ntiebreak: x e a b c d\nvote: c d e x b a\nvote: a b d x c e\n",
         "c e d x b a", "d x a b c e"},
        {"2app-(ii)", 2, {2},
         "candidates: a b c d e u x\ntiebreak: x e a b c d u\nvote: c d e u x b a\nvote: a b u x d c e\n",
         "e u c d x b a", "u x a b d c e"},
        {"plurality-(iii)", 3, {1},
         "candidates: a w x y\ntiebreak: y x w a\nvote: a x w y\nvote: w y x a\n",
         "x a w y", "y w x a"},
        {"2app-(iv)", 4, {2},
         "candidates: a b c d u\ntiebreak: a b c d u\nvote: b a u c d\nvote: c d u a b\n",
         "b u a c d", "c u d a b"},
        {"2app-(v)", 5, {2},
         "candidates: a b c d e u x\ntiebreak: x e a b c d u\nvote: c d u e x b a\nvote: a b u x d c e\n",
         "e u d c x b a", "a u b x d c e"},
        {"2app-(vi)", 6, {2},
         "candidates: a b c d u\ntiebreak: a b c d u\nvote: b a u c d\nvote: c d a u b\n",
         "b u a c d", "c a d u b"},
        {"plurality-(vi)", 6, {1},
         "candidates: a b c x\ntiebreak: x a b c\nvote: b x a c\nvote: c a x b\nvote: a x b c\n",
         "x b a c", "a c x b"},
    };

    McmFixtureReport report;
    report.pass = true;
    for (const auto& s : table) {
        Profile p = parse_profile(s.profile);
        Vote mv = parse_vote(p.candidates, s.manip_vote);
        Vote cv = parse_vote(p.candidates, s.counter_vote);
        GSGame g = build_mcm_game(p, s.rule, 0, mv, 1, cv);
        McmFixtureEntry e;
        e.name = s.name;
        e.expected_label = s.expected;
        e.diagram = extract_diagram(g);
        e.actual = classify(e.diagram, DiagramFlavor::MCM);
        e.pass = (e.actual.label == s.expected);
        report.pass = report.pass && e.pass;
        report.entries.push_back(std::move(e));
    }

    std::vector<int> labels;
    for (const auto& e : report.entries) labels.push_back(e.actual.label);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    report.all_classes_distinct = (labels.size() == 6);
    report.pass = report.pass && report.all_classes_distinct;
    return report;
}

} // namespace gsg
