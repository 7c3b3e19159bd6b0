#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsg/election.hpp"

namespace gsg {

enum class ManipulationKind { Promoter, Demoter };

inline const char* to_string(ManipulationKind k) {
    return k == ManipulationKind::Promoter ? "promoter" : "demoter";
}

/// An insincere vote that elects the voter's best unilaterally achievable
/// candidate. Identified by its approval set; `display_vote` is the
/// canonical representative (approved candidates in the voter's sincere
/// order, then the rest in sincere order).
struct Manipulation {
    VoterId voter = -1;
    std::vector<CandidateId> approval_set; // sorted by id, size k
    Vote display_vote;
    CandidateId target = -1;
    ManipulationKind kind = ManipulationKind::Promoter;
    std::optional<bool> sound; // promoters only; demoters carry no flag
    bool minimal = false;
    int demoted_count = 0;     // number of sincerely approved candidates dropped; 0 for promoters
};

struct CounterManipulation {
    VoterId voter = -1; // the countering voter
    Manipulation against;
    std::vector<CandidateId> approval_set;
    Vote display_vote;
    CandidateId result = -1;
};

namespace detail {

/// All size-k subsets of {0..m-1} in lexicographic order.
inline std::vector<std::vector<CandidateId>> k_subsets(int m, int k) {
    std::vector<std::vector<CandidateId>> out;
    std::vector<CandidateId> cur(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<size_t>(i)] = i;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<size_t>(i)] == m - k + i) --i;
        if (i < 0) break;
        ++cur[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j) cur[static_cast<size_t>(j)] = cur[static_cast<size_t>(j - 1)] + 1;
    }
    return out;
}

/// Winner oracle for unilateral deviations of one voter: holds everyone
/// else's scores so each candidate approval set is a cheap overlay.
class UnilateralScores {
public:
    UnilateralScores(const Profile& p, Rule r, VoterId i) : tiebreak_(&p.tiebreak) {
        validate_rule(p, r);
        base_.assign(static_cast<size_t>(p.num_candidates()), 0);
        const int width = std::min(r.k, p.num_candidates());
        for (VoterId v = 0; v < p.num_voters(); ++v) {
            if (v == i) continue;
            for (int j = 0; j < width; ++j)
                ++base_[static_cast<size_t>(p.vote(v).ranking[static_cast<size_t>(j)])];
        }
        work_ = base_;
    }

    CandidateId winner_with(std::span<const CandidateId> approvals) {
        for (CandidateId c : approvals) ++work_[static_cast<size_t>(c)];
        CandidateId w = best_of(work_, *tiebreak_);
        for (CandidateId c : approvals) --work_[static_cast<size_t>(c)];
        return w;
    }

private:
    std::vector<int> base_;
    std::vector<int> work_;
    const TieBreakOrder* tiebreak_;
};

/// Canonical full ranking with the given top-k set: approved candidates in
/// the voter's sincere order, then the rest in sincere order.
inline Vote canonical_vote(const Vote& sincere, const std::vector<CandidateId>& approval_set) {
    const int m = static_cast<int>(sincere.ranking.size());
    std::vector<char> approved(static_cast<size_t>(m), 0);
    for (CandidateId c : approval_set) approved[static_cast<size_t>(c)] = 1;
    std::vector<CandidateId> ranking;
    ranking.reserve(static_cast<size_t>(m));
    for (CandidateId c : sincere.ranking)
        if (approved[static_cast<size_t>(c)]) ranking.push_back(c);
    for (CandidateId c : sincere.ranking)
        if (!approved[static_cast<size_t>(c)]) ranking.push_back(c);
    return make_vote(std::move(ranking), m);
}

inline std::vector<CandidateId> set_difference(const std::vector<CandidateId>& a,
                                               const std::vector<CandidateId>& b) {
    std::vector<CandidateId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool set_contains(const std::vector<CandidateId>& sorted, CandidateId c) {
    return std::binary_search(sorted.begin(), sorted.end(), c);
}

/// The voter's best `count` candidates outside his sincere top-k, sorted by id.
inline std::vector<CandidateId> best_unapproved(const Vote& sincere, int k, int count) {
    std::vector<CandidateId> out;
    for (size_t j = static_cast<size_t>(k); j < sincere.ranking.size() && static_cast<int>(out.size()) < count; ++j)
        out.push_back(sincere.ranking[j]);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

/// Every candidate the voter can elect by a unilateral deviation, mapped to
/// the first witnessing approval set in lexicographic order. The sincere
/// outcome is always present.
inline std::map<CandidateId, std::vector<CandidateId>> achievable_outcomes(const Profile& p, Rule r,
                                                                           VoterId i) {
    detail::UnilateralScores oracle(p, r, i);
    std::map<CandidateId, std::vector<CandidateId>> out;
    const int width = std::min(r.k, p.num_candidates());
    for (auto& s : detail::k_subsets(p.num_candidates(), width))
        out.emplace(oracle.winner_with(s), s); // emplace keeps the first witness
    return out;
}

/// The voter's most preferred achievable outcome, if it strictly beats the
/// sincere winner; otherwise absent (the voter is not a GS-manipulator).
inline std::optional<CandidateId> best_target(const Profile& p, Rule r, VoterId i) {
    const CandidateId w = winner(p, r);
    const Vote& v = p.vote(i);
    std::optional<CandidateId> best;
    for (const auto& [c, witness] : achievable_outcomes(p, r, i))
        if (!best || v.prefers(c, *best)) best = c;
    if (best && *best != w && v.prefers(*best, w)) return best;
    return std::nullopt;
}

/// Promoter/demoter dichotomy. Promoter: the sincere winner is unapproved and the
/// target enters the approval set. Demoter: the sincere winner is approved
/// and leaves it, the target staying. Exactly one case applies to any
/// valid GS-manipulation; anything else signals an inconsistent input.
inline ManipulationKind classify_kind(const Profile& p, Rule r, const Manipulation& m) {
    const CandidateId w = winner(p, r);
    const Vote& sincere = p.vote(m.voter);
    const bool w_approved = sincere.approves(w, r.k);
    const bool w_in_set = detail::set_contains(m.approval_set, w);
    const bool target_in_set = detail::set_contains(m.approval_set, m.target);
    if (!w_approved && target_in_set && !sincere.approves(m.target, r.k) && !w_in_set)
        return ManipulationKind::Promoter;
    if (w_approved && !w_in_set && target_in_set && sincere.approves(m.target, r.k))
        return ManipulationKind::Demoter;
    throw std::logic_error("manipulation is neither a promotion nor a demotion");
}

/// A promoter manipulation is sound when every co-promoted candidate is
/// preferred to the target. Undefined for demoters.
inline bool is_sound(const Profile& p, Rule r, const Manipulation& m) {
    if (m.kind == ManipulationKind::Demoter)
        throw std::invalid_argument("soundness defined for Type 1 (promoter) manipulations only");
    const Vote& sincere = p.vote(m.voter);
    for (CandidateId c : detail::set_difference(m.approval_set, sincere.top_set(r.k)))
        if (c != m.target && !sincere.prefers(c, m.target)) return false;
    return true;
}

namespace detail {

/// All approval sets electing `target` on voter i's unilateral deviation,
/// in lexicographic order.
inline std::vector<std::vector<CandidateId>> manipulation_sets(const Profile& p, Rule r, VoterId i,
                                                               CandidateId target) {
    UnilateralScores oracle(p, r, i);
    std::vector<std::vector<CandidateId>> out;
    const int width = std::min(r.k, p.num_candidates());
    for (auto& s : k_subsets(p.num_candidates(), width))
        if (oracle.winner_with(s) == target) out.push_back(std::move(s));
    return out;
}

inline int demotion_count(const Vote& sincere, int k, const std::vector<CandidateId>& approval_set) {
    return static_cast<int>(set_difference(sincere.top_set(k), approval_set).size());
}

} // namespace detail

/// All GS-manipulations of voter i (empty iff i is not a GS-manipulator),
/// one entry per approval set, in lexicographic set order.
inline std::vector<Manipulation> gs_manipulations(const Profile& p, Rule r, VoterId i) {
    auto target = best_target(p, r, i);
    if (!target) return {};

    const Vote& sincere = p.vote(i);
    const auto sincere_set = sincere.top_set(r.k);
    auto sets = detail::manipulation_sets(p, r, i, *target);

    std::vector<Manipulation> out;
    out.reserve(sets.size());
    for (auto& s : sets) {
        Manipulation m;
        m.voter = i;
        m.target = *target;
        m.display_vote = detail::canonical_vote(sincere, s);
        m.approval_set = std::move(s);
        m.kind = classify_kind(p, r, m);
        if (m.kind == ManipulationKind::Promoter) {
            m.sound = is_sound(p, r, m);
            m.demoted_count = 0;
            // minimal promotion: only the target enters, the k-th sincere
            // candidate drops out
            std::vector<CandidateId> expected = sincere.top_set(r.k - 1);
            expected.insert(std::lower_bound(expected.begin(), expected.end(), *target), *target);
            m.minimal = (m.approval_set == expected);
        } else {
            m.demoted_count = detail::demotion_count(sincere, r.k, m.approval_set);
        }
        out.push_back(std::move(m));
    }

    // Demoter minimality: scan ell = 1, 2, ... and take the first demotion
    // count at which moving up the voter's best ell unapproved candidates
    // yields a valid manipulation.
    if (!out.empty() && out.front().kind == ManipulationKind::Demoter) {
        for (int ell = 1; ell <= r.k; ++ell) {
            const auto best_up = detail::best_unapproved(sincere, r.k, ell);
            bool found = false;
            for (auto& m : out)
                if (m.demoted_count == ell &&
                    detail::set_difference(m.approval_set, sincere_set) == best_up) {
                    m.minimal = true;
                    found = true;
                }
            if (found) break;
        }
    }
    return out;
}

/// Recomputes the minimality flag for a single manipulation.
inline bool is_minimal(const Profile& p, Rule r, const Manipulation& m) {
    for (const auto& cand : gs_manipulations(p, r, m.voter))
        if (cand.approval_set == m.approval_set) return cand.minimal;
    throw std::invalid_argument("is_minimal: not a GS-manipulation at this profile");
}

/// The set N(V, R): voters with at least one GS-manipulation.
inline std::vector<VoterId> gs_manipulators(const Profile& p, Rule r) {
    std::vector<VoterId> out;
    for (VoterId i = 0; i < p.num_voters(); ++i)
        if (best_target(p, r, i)) out.push_back(i);
    return out;
}

/// All countermanipulations of voter j against manipulation m: approval
/// sets that, applied after m, elect j's best achievable strictly preferred
/// candidate. Empty when no improvement exists for j.
inline std::vector<CounterManipulation> countermanipulations(const Profile& p, Rule r,
                                                             const Manipulation& m, VoterId j) {
    if (j == m.voter) throw std::invalid_argument("countermanipulations: j must differ from the manipulator");
    const Profile deviated = p.with_vote(m.voter, m.display_vote);
    const CandidateId w1 = winner(deviated, r);
    const Vote& sincere = p.vote(j);

    std::optional<CandidateId> best;
    for (const auto& [c, witness] : achievable_outcomes(deviated, r, j))
        if (!best || sincere.prefers(c, *best)) best = c;
    if (!best || *best == w1 || !sincere.prefers(*best, w1)) return {};

    std::vector<CounterManipulation> out;
    for (auto& s : detail::manipulation_sets(deviated, r, j, *best)) {
        CounterManipulation cm;
        cm.voter = j;
        cm.against = m;
        cm.display_vote = detail::canonical_vote(sincere, s);
        cm.approval_set = std::move(s);
        cm.result = *best;
        out.push_back(std::move(cm));
    }
    return out;
}

/// Which voters count as countermanipulators: the default follows the
/// narrative reading (a countermanipulator is not himself a GS-manipulator);
/// the permissive mode drops that exclusion.
enum class CounterPredicate { ExcludeManipulators, DefinitionOnly };

inline std::vector<VoterId> countermanipulators(const Profile& p, Rule r,
                                                CounterPredicate mode = CounterPredicate::ExcludeManipulators) {
    const auto manipulators = gs_manipulators(p, r);
    auto is_manipulator = [&](VoterId v) {
        return std::binary_search(manipulators.begin(), manipulators.end(), v);
    };

    std::vector<Manipulation> all;
    for (VoterId i : manipulators)
        for (auto& m : gs_manipulations(p, r, i)) all.push_back(std::move(m));

    std::vector<VoterId> out;
    for (VoterId j = 0; j < p.num_voters(); ++j) {
        if (mode == CounterPredicate::ExcludeManipulators && is_manipulator(j)) continue;
        for (const auto& m : all) {
            if (m.voter == j) continue;
            if (!countermanipulations(p, r, m, j).empty()) {
                out.push_back(j);
                break;
            }
        }
    }
    return out;
}

} // namespace gsg
