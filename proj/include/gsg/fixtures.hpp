#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gsg/diagrams.hpp"
#include "gsg/game.hpp"

namespace gsg {

/// Result of one named verification fixture: a list of individual checks.
struct FixtureReport {
    struct Check {
        std::string what;
        bool ok;
    };
    std::string name;
    std::vector<Check> checks;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.ok) return false;
        return true;
    }
};

namespace fixtures {

// Reference profiles. Two-letter candidate tokens (d1, d2, ...) are plain
// tokens; tie-break lines are explicit wherever the default lexicographic
// order would differ.

inline constexpr const char* kIntroPlurality =
    "candidates: a b c d w\n"
    "tiebreak: w a b c d\n"
    "vote: a b c d w\n"
    "vote: b a c d w\n"
    "vote: w c a d b\n"
    "vote: d w a b c\n";

inline constexpr const char* kTwoPromoters =
    "candidates: a b c\n"
    "vote: a b c\n"
    "vote: b a c\n"
    "vote: c a b\n"
    "vote: c b a\n";

inline constexpr const char* kPluralityDiagramIii =
    "candidates: a b c w\n"
    "tiebreak: a w b c\n"
    "vote: c a w b\n"
    "vote: b a w c\n"
    "vote: w a b c\n";

inline constexpr const char* kPluralityDiagramIv =
    "candidates: a b c d w\n"
    "tiebreak: a b w c d\n"
    "vote: d a b w c\n"
    "vote: c b a w d\n"
    "vote: w b a c d\n";

inline constexpr const char* kPluralityDiagramV =
    "candidates: a b c w\n"
    "tiebreak: a w b c\n"
    "vote: b a c w\n"
    "vote: c b a w\n"
    "vote: w b a c\n";

inline constexpr const char* kTwoApprovalDiagramI =
    "candidates: a b c d t w x y z\n"
    "vote: x y w a b c d t z\n"
    "vote: z t w b a c d x y\n"
    "vote: c d a b t w x y z\n";

inline constexpr const char* kTwoApprovalDiagramVi =
    "candidates: a b c d t w x y z\n"
    "vote: x y w a b c d t z\n"
    "vote: z t b a w c d x y\n"
    "vote: c d a b t w x y z\n";

inline constexpr const char* kNoNash2Approval =
    "candidates: a b c d e f m n x\n"
    "tiebreak: n a m x b c d e f\n"
    "vote: a b c d e f n m x\n"
    "vote: c d n m x b a e f\n"
    "vote: e f b m x n a c d\n";

inline constexpr const char* kNoNash4Approval =
    "candidates: w d1 d2 d3 c d e x\n"
    "tiebreak: w d1 d2 d3 c d e x\n"
    "vote: w d1 e c d x d2 d3\n"
    "vote: c d2 d d3 w e x d1\n"
    "vote: d d3 c d2 w d1 e x\n"
    "vote: d1 w d d3 c d2 e x\n"
    "vote: d2 w d1 x c d d3 e\n"
    "vote: d3 w d2 d1 d x e c\n";

} // namespace fixtures

namespace detail {

class FixtureChecker {
public:
    explicit FixtureChecker(FixtureReport& r) : report_(&r) {}

    void expect(bool ok, std::string what) { report_->checks.push_back({std::move(what), ok}); }

    template <typename T>
    void expect_eq(const T& got, const T& want, const std::string& what) {
        expect(got == want, what);
    }

private:
    FixtureReport* report_;
};

inline std::vector<CandidateId> ids_of(const Profile& p, std::initializer_list<const char*> tokens) {
    std::vector<CandidateId> out;
    for (const char* t : tokens) out.push_back(*p.candidates.find(t));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<CandidateId> winners_of(const Profile& p,
                                           std::initializer_list<const char*> tokens) {
    std::vector<CandidateId> expected;
    for (const char* tok : tokens) expected.push_back(*p.candidates.find(tok));
    return expected;
}

} // namespace detail

inline FixtureReport fixture_intro_plurality() {
    FixtureReport report{"intro-plurality", {}};
    detail::FixtureChecker ck(report);
    const Profile p = parse_profile(fixtures::kIntroPlurality);
    const Rule r{1};

    ck.expect(p.candidates.name(winner(p, r)) == "w", "plurality winner is w");
    ck.expect_eq(gs_manipulators(p, r), std::vector<VoterId>{0, 1}, "GS-manipulators are voters 1 and 2");
    ck.expect(best_target(p, r, 0) == p.candidates.find("b"), "voter 1 manipulates toward b");
    ck.expect(best_target(p, r, 1) == p.candidates.find("a"), "voter 2 manipulates toward a");
    ck.expect_eq(countermanipulators(p, r), std::vector<VoterId>{3}, "voter 4 is the only countermanipulator");

    GSGame g = build_game(p, r, Policy::All);
    ck.expect(g.num_players() == 2 && g.players[0].size() == 2 && g.players[1].size() == 2,
              "manipulator sub-game is 2x2");
    const auto t = outcome_table(g);
    ck.expect_eq(t.winners, detail::winners_of(p, {"w", "a", "b", "w"}),
                 "sub-game outcomes are w, a, b, w");
    ck.expect_eq(pure_nash(g), std::vector<ActionProfile>{{0, 1}, {1, 0}},
                 "anti-coordination equilibria at (s,i) and (i,s)");

    const auto res = construct_ne_plurality(p);
    ck.expect(res.verified && !res.via_fallback, "plurality construction verifies directly");
    ck.expect(winner(resolve(res.game, res.equilibrium), r) == *p.candidates.find("w"),
              "constructed equilibrium elects w");

    // In the full game with the countermanipulator seated, every equilibrium
    // pins voter 4 on w; deviations that merely re-elect w do not disturb it.
    GSGame wc = build_game(p, r, Policy::All, Flavor::WithCounter);
    ck.expect_eq(pure_nash(wc),
                 std::vector<ActionProfile>{{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}},
                 "counter game equilibria are exactly the four w-guarded profiles");
    ck.expect_eq(best_response_graph(wc).sinks, std::vector<long long>{1, 3, 5, 7},
                 "counter game graph sinks coincide with the equilibria");
    return report;
}

inline FixtureReport fixture_two_promoters() {
    FixtureReport report{"two-promoters", {}};
    detail::FixtureChecker ck(report);
    const Profile p = parse_profile(fixtures::kTwoPromoters);
    const Rule r{1};

    ck.expect(p.candidates.name(winner(p, r)) == "c", "plurality winner is c");
    ck.expect_eq(gs_manipulators(p, r), std::vector<VoterId>{0, 1}, "GS-manipulators are voters 1 and 2");

    const auto m1 = gs_manipulations(p, r, 0);
    const auto m2 = gs_manipulations(p, r, 1);
    ck.expect(m1.size() == 1 && m1[0].approval_set == detail::ids_of(p, {"b"}),
              "voter 1's manipulation promotes b");
    ck.expect(m2.size() == 1 && m2[0].approval_set == detail::ids_of(p, {"a"}),
              "voter 2's manipulation promotes a");

    GSGame g = build_game(p, r, Policy::All);
    const auto t = outcome_table(g);
    ck.expect(t.winner_at({1, 1}) == *p.candidates.find("c"),
              "joint manipulation leaves c the winner");
    ck.expect_eq(pure_nash(g), std::vector<ActionProfile>{{0, 1}, {1, 0}}, "equilibria at (s,i) and (i,s)");
    ck.expect(to_string(classify(extract_diagram(g), DiagramFlavor::GS)) == "gs:(ii)",
              "diagram class is gs:(ii)");
    return report;
}

inline FixtureReport fixture_plurality_diagrams() {
    FixtureReport report{"plurality-diagrams", {}};
    detail::FixtureChecker ck(report);
    const Rule r{1};
    const struct {
        const char* text;
        const char* want;
    } cases[] = {
        {fixtures::kTwoPromoters, "gs:(ii)"},
        {fixtures::kPluralityDiagramIii, "gs:(iii)"},
        {fixtures::kPluralityDiagramIv, "gs:(iv)"},
        {fixtures::kPluralityDiagramV, "gs:(v)"},
    };
    for (const auto& c : cases) {
        const Profile p = parse_profile(c.text);
        GSGame g = build_game(p, r, Policy::All);
        bool shape = g.num_players() == 2 && g.players[0].size() == 2 && g.players[1].size() == 2;
        ck.expect(shape, std::string("witness for ") + c.want + " builds a 2x2 game");
        if (!shape) continue;
        ck.expect(to_string(classify(extract_diagram(g), DiagramFlavor::GS)) == c.want,
                  std::string("witness classifies as ") + c.want);
    }
    return report;
}

inline FixtureReport fixture_2approval_diagrams() {
    FixtureReport report{"2approval-diagrams", {}};
    detail::FixtureChecker ck(report);
    const Rule r{2};

    {
        const Profile p = parse_profile(fixtures::kTwoApprovalDiagramI);
        ck.expect(p.candidates.name(winner(p, r)) == "c", "(i) witness: sincere winner is c");
        std::vector<FixedStrategy> fs{
            {0, parse_vote(p.candidates, "a w y x b c d t z")},
            {1, parse_vote(p.candidates, "b w t z a c d x y")},
        };
        GSGame g = build_game(p, r, Policy::Fixed, Flavor::GSOnly, &fs);
        const auto t = outcome_table(g);
        ck.expect_eq(t.winners, detail::winners_of(p, {"c", "b", "a", "w"}),
                     "(i) outcomes are c, b, a, w");
        ck.expect(to_string(classify(extract_diagram(g), DiagramFlavor::GS)) == "gs:(i)",
                  "(i) witness classifies as gs:(i)");
        for (VoterId v : {0, 1}) {
            for (const auto& m : gs_manipulations(p, r, v))
                if (m.approval_set == g.players[static_cast<size_t>(v)].approvals[1])
                    ck.expect(m.sound.value_or(false),
                              "(i) voter " + std::to_string(v + 1) + " manipulation is sound");
        }
    }
    {
        const Profile p = parse_profile(fixtures::kTwoApprovalDiagramVi);
        ck.expect(p.candidates.name(winner(p, r)) == "c", "(vi) witness: sincere winner is c");
        std::vector<FixedStrategy> fs{
            {0, parse_vote(p.candidates, "a w y x b c d t z")},
            {1, parse_vote(p.candidates, "b w z a t c d x y")},
        };
        GSGame g = build_game(p, r, Policy::Fixed, Flavor::GSOnly, &fs);
        const auto t = outcome_table(g);
        ck.expect_eq(t.winners, detail::winners_of(p, {"c", "b", "a", "w"}),
                     "(vi) outcomes are c, b, a, w");
        ck.expect(to_string(classify(extract_diagram(g), DiagramFlavor::GS)) == "gs:(vi)",
                  "(vi) witness classifies as gs:(vi)");
        bool found = false, unsound = false;
        for (const auto& m : gs_manipulations(p, r, 1))
            if (m.approval_set == g.players[1].approvals[1]) {
                found = true;
                unsound = !m.sound.value_or(true);
            }
        ck.expect(found && unsound, "(vi) voter 2's manipulation is flagged unsound");
    }
    return report;
}

inline FixtureReport fixture_mcm_games() {
    FixtureReport report{"mcm-games", {}};
    detail::FixtureChecker ck(report);

    const auto mcm = verify_mcm_fixtures();
    for (const auto& e : mcm.entries)
        ck.expect(e.pass, e.name + " classifies as mcm:(" + roman_label(e.expected_label) + ")");
    ck.expect(mcm.all_classes_distinct, "the six MCM classes are pairwise distinct");

    auto scan = realizability_scan(DiagramFlavor::MCM, Rule{1}, 2, 4);
    ck.expect_eq(scan.realized_labels(), std::vector<int>{3},
                 "two-voter plurality search realizes exactly mcm:(iii)");
    return report;
}

inline FixtureReport fixture_no_nash_2approval() {
    FixtureReport report{"no-ne-2approval", {}};
    detail::FixtureChecker ck(report);
    const Profile p = parse_profile(fixtures::kNoNash2Approval);
    const Rule r{2};

    const auto sc = scores(p, r);
    bool score_ok = true;
    for (const char* tok : {"a", "b", "c", "d", "e", "f"})
        score_ok = score_ok && sc.score(*p.candidates.find(tok)) == 1;
    for (const char* tok : {"n", "m", "x"})
        score_ok = score_ok && sc.score(*p.candidates.find(tok)) == 0;
    ck.expect(score_ok, "2-approval scores: a..f = 1, n/m/x = 0");
    ck.expect(p.candidates.name(winner(p, r)) == "a", "sincere winner is a");
    ck.expect_eq(gs_manipulators(p, r), std::vector<VoterId>{1, 2}, "manipulators are voters 2 and 3");

    std::vector<FixedStrategy> fs{
        {1, parse_vote(p.candidates, "n m c d x b a e f")},
        {1, parse_vote(p.candidates, "n x c m d b a e f")},
        {2, parse_vote(p.candidates, "b m e f x n a c d")},
        {2, parse_vote(p.candidates, "b x e m f n a c d")},
    };
    GSGame g = build_game(p, r, Policy::Fixed, Flavor::GSOnly, &fs);
    ck.expect(g.cell_count() == 9, "fixed game has 9 action profiles");

    const auto br = best_response_graph(g);
    ck.expect_eq(br.outcomes.winners,
                 detail::winners_of(p, {"a", "b", "b", "n", "m", "b", "n", "b", "x"}),
                 "outcome table matches: a b b n m b n b x");
    ck.expect(pure_nash(g).empty(), "no pure Nash equilibrium");
    const bool cycle = br.contains_edge({1, 1}, 1, 2) && br.contains_edge({1, 2}, 0, 2) &&
                       br.contains_edge({2, 2}, 1, 1) && br.contains_edge({2, 1}, 0, 1);
    ck.expect(cycle, "the 4-cycle (i,i)->(i,i')->(i',i')->(i',i)->(i,i) is present");
    return report;
}

inline FixtureReport fixture_no_nash_4approval() {
    FixtureReport report{"no-ne-4approval", {}};
    detail::FixtureChecker ck(report);
    const Profile p = parse_profile(fixtures::kNoNash4Approval);
    const Rule r{4};

    const auto sc = scores(p, r);
    bool score_ok = true;
    for (const char* tok : {"w", "d1", "d2", "d3"})
        score_ok = score_ok && sc.score(*p.candidates.find(tok)) == 4;
    for (const char* tok : {"c", "d"}) score_ok = score_ok && sc.score(*p.candidates.find(tok)) == 3;
    for (const char* tok : {"e", "x"}) score_ok = score_ok && sc.score(*p.candidates.find(tok)) == 1;
    ck.expect(score_ok, "scores: w/d1/d2/d3 = 4, c/d = 3, e/x = 1");
    ck.expect(p.candidates.name(winner(p, r)) == "w", "sincere winner is w");
    ck.expect_eq(gs_manipulators(p, r), std::vector<VoterId>{3, 4, 5}, "manipulators are voters 4, 5, 6");

    GSGame g = build_game(p, r, Policy::MinimalOnly);
    ck.expect(g.cell_count() == 8, "minimal game has 8 action profiles");
    ck.expect(g.players[0].approvals.size() == 2 &&
                  g.players[0].approvals[1] == detail::ids_of(p, {"d1", "d", "d3", "c"}),
              "voter 4's minimal manipulation approves {d1, d, d3, c}");
    ck.expect(g.players[1].approvals.size() == 2 &&
                  g.players[1].approvals[1] == detail::ids_of(p, {"d2", "x", "c", "d"}),
              "voter 5's minimal manipulation approves {d2, x, c, d}");
    ck.expect(g.players[2].approvals.size() == 2 &&
                  g.players[2].approvals[1] == detail::ids_of(p, {"d3", "d", "x", "e"}),
              "voter 6's minimal manipulation approves {d3, d, x, e}");

    const auto br = best_response_graph(g);
    ck.expect_eq(br.outcomes.winners,
                 detail::winners_of(p, {"w", "d3", "d2", "d", "d1", "d3", "c", "c"}),
                 "outcome table matches: w d3 d2 d d1 d3 c c");
    ck.expect(pure_nash(g).empty(), "no pure Nash equilibrium");

    const bool witnesses = br.contains_edge({0, 0, 0}, 0, 1) && br.contains_edge({1, 0, 0}, 2, 1) &&
                           br.contains_edge({0, 1, 0}, 0, 1) && br.contains_edge({0, 0, 1}, 1, 1) &&
                           br.contains_edge({1, 0, 1}, 1, 1) && br.contains_edge({0, 1, 1}, 2, 0) &&
                           br.contains_edge({1, 1, 0}, 1, 0) && br.contains_edge({1, 1, 1}, 0, 0);
    ck.expect(witnesses, "all eight tabulated deviations are edges");
    const bool cycle = br.contains_edge({0, 1, 0}, 0, 1) && br.contains_edge({1, 1, 0}, 1, 0) &&
                       br.contains_edge({1, 0, 0}, 2, 1) && br.contains_edge({1, 0, 1}, 1, 1) &&
                       br.contains_edge({1, 1, 1}, 0, 0) && br.contains_edge({0, 1, 1}, 2, 0);
    ck.expect(cycle, "the 6-cycle over the cube is present");
    return report;
}

inline const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {
        "intro-plurality",    "two-promoters",    "plurality-diagrams", "2approval-diagrams",
        "mcm-games",          "no-ne-2approval",  "no-ne-4approval",
    };
    return names;
}

inline FixtureReport run_fixture(const std::string& name) {
    static const std::map<std::string, FixtureReport (*)()> registry = {
        {"intro-plurality", &fixture_intro_plurality},
        {"two-promoters", &fixture_two_promoters},
        {"plurality-diagrams", &fixture_plurality_diagrams},
        {"2approval-diagrams", &fixture_2approval_diagrams},
        {"mcm-games", &fixture_mcm_games},
        {"no-ne-2approval", &fixture_no_nash_2approval},
        {"no-ne-4approval", &fixture_no_nash_4approval},
    };
    auto it = registry.find(name);
    if (it == registry.end()) throw std::invalid_argument("unknown fixture '" + name + "'");
    try {
        return it->second();
    } catch (const std::exception& e) {
        FixtureReport report{name, {}};
        report.checks.push_back({std::string("exception: ") + e.what(), false});
        return report;
    }
}

inline std::vector<FixtureReport> run_all_fixtures() {
    std::vector<FixtureReport> out;
    for (const auto& n : fixture_names()) out.push_back(run_fixture(n));
    return out;
}

} // namespace gsg
