#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "gsg/fixtures.hpp"
#include "gsg/manipulation.hpp"
#include "support.hpp"

using namespace gsg;

namespace {

CandidateId id(const Profile& p, const char* tok) { return *p.candidates.find(tok); }

std::vector<CandidateId> ids(const Profile& p, std::initializer_list<const char*> toks) {
    std::vector<CandidateId> out;
    for (const char* t : toks) out.push_back(id(p, t));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("achievable_outcomes enumerates deviation winners") {
    SECTION("two-promoter profile, voter 1") {
        const Profile p = parse_profile(fixtures::kTwoPromoters);
        auto ach = achievable_outcomes(p, Rule{1}, 0);
        std::set<CandidateId> keys;
        for (auto& [c, witness] : ach) keys.insert(c);
        REQUIRE(keys == std::set<CandidateId>{id(p, "b"), id(p, "c")});
        REQUIRE(ach.at(id(p, "b")) == ids(p, {"b"}));
    }
    SECTION("intro profile: voter 3 can move the outcome only to worse candidates") {
        const Profile p = parse_profile(fixtures::kIntroPlurality);
        auto ach = achievable_outcomes(p, Rule{1}, 2);
        REQUIRE(ach.count(id(p, "w")) == 1); // sincere outcome present
        REQUIRE_FALSE(best_target(p, Rule{1}, 2).has_value());
    }
    SECTION("one voter reaches every candidate") {
        const Profile p = parse_profile("candidates: a b c\nvote: c a b\n");
        REQUIRE(achievable_outcomes(p, Rule{1}, 0).size() == 3);
    }
}

TEST_CASE("best_target picks the most preferred strict improvement") {
    const Profile p = parse_profile(fixtures::kIntroPlurality);
    REQUIRE(best_target(p, Rule{1}, 0) == id(p, "b"));
    REQUIRE(best_target(p, Rule{1}, 1) == id(p, "a"));
    REQUIRE_FALSE(best_target(p, Rule{1}, 3).has_value()); // promoting w is no manipulation

    SECTION("unanimous profile has no manipulator") {
        const Profile u = parse_profile(
            "candidates: a b c\nvote: a b c\nvote: a b c\nvote: a c b\n");
        for (VoterId i = 0; i < 3; ++i) REQUIRE_FALSE(best_target(u, Rule{1}, i).has_value());
    }
}

TEST_CASE("gs_manipulations on the reference profiles") {
    SECTION("2-approval no-equilibrium profile, voter 2") {
        const Profile p = parse_profile(fixtures::kNoNash2Approval);
        auto ms = gs_manipulations(p, Rule{2}, 1);
        REQUIRE_FALSE(ms.empty());
        std::set<std::vector<CandidateId>> sets;
        for (auto& m : ms) {
            REQUIRE(m.target == id(p, "n"));
            sets.insert(m.approval_set);
        }
        REQUIRE(sets == std::set<std::vector<CandidateId>>{
                            ids(p, {"n", "m"}), ids(p, {"n", "x"}),
                            ids(p, {"n", "c"}), ids(p, {"n", "d"})});
    }
    SECTION("4-approval profile, voter 4: every set keeps d1, drops w, avoids d2") {
        const Profile p = parse_profile(fixtures::kNoNash4Approval);
        auto ms = gs_manipulations(p, Rule{4}, 3);
        REQUIRE(ms.size() == 10); // choose 3 of {d3, c, d, e, x} next to d1
        for (auto& m : ms) {
            REQUIRE(m.target == id(p, "d1"));
            REQUIRE(detail::set_contains(m.approval_set, id(p, "d1")));
            REQUIRE_FALSE(detail::set_contains(m.approval_set, id(p, "w")));
            REQUIRE_FALSE(detail::set_contains(m.approval_set, id(p, "d2")));
        }
    }
    SECTION("non-manipulator yields the empty list") {
        const Profile p = parse_profile(fixtures::kIntroPlurality);
        REQUIRE(gs_manipulations(p, Rule{1}, 2).empty());
        REQUIRE(gs_manipulations(p, Rule{1}, 3).empty());
    }
}

TEST_CASE("gs_manipulators on the reference profiles") {
    const Profile intro = parse_profile(fixtures::kIntroPlurality);
    REQUIRE(gs_manipulators(intro, Rule{1}) == std::vector<VoterId>{0, 1});

    const Profile four = parse_profile(fixtures::kNoNash4Approval);
    REQUIRE(gs_manipulators(four, Rule{4}) == std::vector<VoterId>{3, 4, 5});

    const Profile two = parse_profile(fixtures::kTwoPromoters);
    REQUIRE(gs_manipulators(two, Rule{1}) == std::vector<VoterId>{0, 1});
}

TEST_CASE("classify_kind follows the promoter/demoter dichotomy") {
    SECTION("2-approval co-promotion is a promoter move") {
        const Profile p = parse_profile(fixtures::kNoNash2Approval);
        for (auto& m : gs_manipulations(p, Rule{2}, 1)) {
            REQUIRE(m.kind == ManipulationKind::Promoter);
            REQUIRE(classify_kind(p, Rule{2}, m) == ManipulationKind::Promoter);
        }
    }
    SECTION("4-approval reference manipulations are demoters") {
        const Profile p = parse_profile(fixtures::kNoNash4Approval);
        for (VoterId v : {3, 4, 5})
            for (auto& m : gs_manipulations(p, Rule{4}, v))
                REQUIRE(m.kind == ManipulationKind::Demoter);
    }
    SECTION("plurality manipulations are always promoters") {
        std::mt19937 rng(23);
        int found = 0;
        for (int trial = 0; trial < 300; ++trial) {
            const int m = 2 + static_cast<int>(rng() % 4);
            const int n = 1 + static_cast<int>(rng() % 5);
            Profile p = testsupport::random_profile(rng, n, m);
            for (VoterId i = 0; i < n; ++i)
                for (auto& mp : gs_manipulations(p, Rule{1}, i)) {
                    REQUIRE(mp.kind == ManipulationKind::Promoter);
                    ++found;
                }
        }
        REQUIRE(found > 0);
    }
}

TEST_CASE("is_sound checks co-promoted candidates") {
    SECTION("promoting w together with a is sound when w is preferred") {
        const Profile p = parse_profile(fixtures::kTwoApprovalDiagramI);
        auto ms = gs_manipulations(p, Rule{2}, 0);
        bool checked = false;
        for (auto& m : ms)
            if (m.approval_set == ids(p, {"a", "w"})) {
                REQUIRE(m.sound == true);
                REQUIRE(is_sound(p, Rule{2}, m));
                checked = true;
            }
        REQUIRE(checked);
    }
    SECTION("co-promoting a worse candidate is unsound") {
        const Profile p = parse_profile(fixtures::kNoNash2Approval);
        for (auto& m : gs_manipulations(p, Rule{2}, 1)) {
            const bool single = detail::set_difference(m.approval_set, p.vote(1).top_set(2)).size() == 1;
            if (m.approval_set == ids(p, {"n", "m"}) || m.approval_set == ids(p, {"n", "x"}))
                REQUIRE(m.sound == false);
            if (single) REQUIRE(m.sound == true); // lone promotion is vacuously sound
        }
    }
    SECTION("demoters raise an error") {
        const Profile p = parse_profile(fixtures::kNoNash4Approval);
        auto ms = gs_manipulations(p, Rule{4}, 3);
        REQUIRE_FALSE(ms.empty());
        REQUIRE_FALSE(ms.front().sound.has_value());
        REQUIRE_THROWS_AS(is_sound(p, Rule{4}, ms.front()), std::invalid_argument);
    }
}

TEST_CASE("is_minimal identifies the reference minimal manipulations") {
    const Profile p = parse_profile(fixtures::kNoNash4Approval);
    const struct {
        VoterId voter;
        std::initializer_list<const char*> set;
        int ell;
    } expected[] = {
        {3, {"d1", "d", "d3", "c"}, 1},
        {4, {"d2", "x", "c", "d"}, 2},
        {5, {"d3", "d", "x", "e"}, 3},
    };
    for (const auto& e : expected) {
        auto ms = gs_manipulations(p, Rule{4}, e.voter);
        int minimal_count = 0;
        for (auto& m : ms) {
            if (m.minimal) {
                ++minimal_count;
                REQUIRE(m.approval_set == ids(p, e.set));
                REQUIRE(m.demoted_count == e.ell);
                REQUIRE(is_minimal(p, Rule{4}, m));
            }
        }
        REQUIRE(minimal_count == 1);
    }

    SECTION("promoter minimality keeps the top k-1 and adds the target") {
        const Profile q = parse_profile(fixtures::kNoNash2Approval);
        for (auto& m : gs_manipulations(q, Rule{2}, 1)) {
            const bool expect_minimal = m.approval_set == ids(q, {"n", "c"});
            REQUIRE(m.minimal == expect_minimal);
        }
    }
}

TEST_CASE("minimal promotions are always sound") {
    std::mt19937 rng(67);
    int minimal_promoters = 0;
    for (int trial = 0; trial < 900; ++trial) {
        const int m = 3 + static_cast<int>(rng() % 4);
        const int n = 1 + static_cast<int>(rng() % 5);
        const int k = 1 + static_cast<int>(rng() % std::min(3, m - 1));
        Profile p = testsupport::random_profile(rng, n, m);
        for (VoterId i = 0; i < n; ++i)
            for (const auto& mp : gs_manipulations(p, Rule{k}, i))
                if (mp.kind == ManipulationKind::Promoter && mp.minimal) {
                    REQUIRE(mp.sound == true);
                    ++minimal_promoters;
                }
    }
    REQUIRE(minimal_promoters > 100);
}

TEST_CASE("is_minimal rejects non-manipulations") {
    const Profile p = parse_profile(fixtures::kIntroPlurality);
    Manipulation fake;
    fake.voter = 0;
    fake.approval_set = {*p.candidates.find("c")};
    REQUIRE_THROWS_AS(is_minimal(p, Rule{1}, fake), std::invalid_argument);
}

TEST_CASE("countermanipulations on the intro profile") {
    const Profile p = parse_profile(fixtures::kIntroPlurality);
    auto ms = gs_manipulations(p, Rule{1}, 0); // voter 1 promotes b
    REQUIRE(ms.size() == 1);

    SECTION("voter 4 counters toward w") {
        auto cms = countermanipulations(p, Rule{1}, ms.front(), 3);
        REQUIRE(cms.size() == 1);
        REQUIRE(cms.front().result == id(p, "w"));
        REQUIRE(cms.front().approval_set == ids(p, {"w"}));
    }
    SECTION("voter 3 cannot counter") {
        REQUIRE(countermanipulations(p, Rule{1}, ms.front(), 2).empty());
    }
    SECTION("the manipulator himself is rejected") {
        REQUIRE_THROWS_AS(countermanipulations(p, Rule{1}, ms.front(), 0), std::invalid_argument);
    }
}

TEST_CASE("countermanipulators respects the non-manipulator reading") {
    const Profile intro = parse_profile(fixtures::kIntroPlurality);
    REQUIRE(countermanipulators(intro, Rule{1}) == std::vector<VoterId>{3});

    const Profile two = parse_profile(fixtures::kTwoPromoters);
    REQUIRE(countermanipulators(two, Rule{1}).empty());

    SECTION("definition-only mode may include manipulators") {
        std::mt19937 rng(29);
        for (int trial = 0; trial < 50; ++trial) {
            Profile p = testsupport::random_profile(rng, 4, 4);
            auto strict = countermanipulators(p, Rule{1});
            auto wide = countermanipulators(p, Rule{1}, CounterPredicate::DefinitionOnly);
            REQUIRE(std::includes(wide.begin(), wide.end(), strict.begin(), strict.end()));
        }
    }
    SECTION("no manipulators implies no countermanipulators") {
        const Profile u = parse_profile("candidates: a b\nvote: a b\nvote: a b\n");
        REQUIRE(countermanipulators(u, Rule{1}).empty());
    }
}

TEST_CASE("gs_manipulations agrees with the full-permutation oracle") {
    std::mt19937 rng(31);
    int nontrivial = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 5); // up to 6
        const int n = 1 + static_cast<int>(rng() % 5);
        const int k = 1 + static_cast<int>(rng() % std::min(3, m - 1));
        Profile p = testsupport::random_profile(rng, n, m);
        for (VoterId i = 0; i < n; ++i) {
            auto oracle = testsupport::oracle_manipulations(p, k, i);
            auto mine = gs_manipulations(p, Rule{k}, i);

            std::set<CandidateId> ach;
            for (auto& [c, s] : achievable_outcomes(p, Rule{k}, i)) ach.insert(c);
            REQUIRE(ach == oracle.achievable);

            if (!oracle.target) {
                REQUIRE(mine.empty());
                continue;
            }
            ++nontrivial;
            REQUIRE(best_target(p, Rule{k}, i) == oracle.target);
            std::set<std::vector<CandidateId>> sets;
            for (auto& mp : mine) sets.insert(mp.approval_set);
            REQUIRE(sets == oracle.approval_sets);
            REQUIRE(sets.size() == mine.size()); // no duplicates under equivalence
        }
    }
    REQUIRE(nontrivial > 20);
}
