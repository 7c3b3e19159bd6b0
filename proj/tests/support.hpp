#pragma once

// Shared test helpers: random profile generation and an independent
// manipulation oracle that enumerates full vote permutations instead of
// approval sets, with its own scoring path.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "gsg/election.hpp"

namespace testsupport {

using namespace gsg;

inline Profile random_profile(std::mt19937& rng, int n, int m, bool random_tiebreak = true) {
    std::vector<std::string> names;
    for (int i = 0; i < m; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
    auto cs = make_candidate_set(names);

    std::vector<CandidateId> ident(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) ident[static_cast<size_t>(i)] = i;

    std::vector<Vote> votes;
    for (int v = 0; v < n; ++v) {
        auto perm = ident;
        std::shuffle(perm.begin(), perm.end(), rng);
        votes.push_back(make_vote(perm, m));
    }
    auto order = ident;
    if (random_tiebreak) std::shuffle(order.begin(), order.end(), rng);
    return make_profile(std::move(cs), std::move(votes), make_tiebreak(order, m));
}

// ---------------------------------------------------------------------------
// Independent oracle: winner by direct top-k counting, manipulations by
// enumerating all m! insincere ballots.
// ---------------------------------------------------------------------------

inline CandidateId oracle_winner(const Profile& p, int k) {
    const int m = p.num_candidates();
    std::vector<int> pts(static_cast<size_t>(m), 0);
    for (const auto& v : p.votes)
        for (int j = 0; j < std::min(k, m); ++j) ++pts[static_cast<size_t>(v.ranking[static_cast<size_t>(j)])];
    CandidateId best = 0;
    for (CandidateId c = 1; c < m; ++c) {
        if (pts[static_cast<size_t>(c)] > pts[static_cast<size_t>(best)] ||
            (pts[static_cast<size_t>(c)] == pts[static_cast<size_t>(best)] &&
             p.tiebreak.before(c, best)))
            best = c;
    }
    return best;
}

struct OracleManipulations {
    std::optional<CandidateId> target;                 // best strictly preferred outcome
    std::set<std::vector<CandidateId>> approval_sets;  // of optimal insincere ballots
    std::set<CandidateId> achievable;                  // all reachable winners
};

/// Enumerates every full permutation as voter i's ballot.
inline OracleManipulations oracle_manipulations(const Profile& p, int k, VoterId i) {
    const int m = p.num_candidates();
    std::vector<CandidateId> perm(static_cast<size_t>(m));
    for (int c = 0; c < m; ++c) perm[static_cast<size_t>(c)] = c;

    OracleManipulations out;
    const Vote& sincere = p.vote(i);
    std::optional<CandidateId> best;
    do {
        Profile q = p.with_vote(i, make_vote(perm, m));
        CandidateId w = oracle_winner(q, k);
        out.achievable.insert(w);
        if (!best || sincere.prefers(w, *best)) best = w;
    } while (std::next_permutation(perm.begin(), perm.end()));

    const CandidateId sincere_winner = oracle_winner(p, k);
    if (*best == sincere_winner || !sincere.prefers(*best, sincere_winner)) return out;
    out.target = best;

    // Second pass: collect the top-k sets of every optimal ballot.
    for (int c = 0; c < m; ++c) perm[static_cast<size_t>(c)] = c;
    do {
        Profile q = p.with_vote(i, make_vote(perm, m));
        if (oracle_winner(q, k) == *best) {
            std::vector<CandidateId> set(perm.begin(), perm.begin() + k);
            std::sort(set.begin(), set.end());
            out.approval_sets.insert(std::move(set));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

} // namespace testsupport
