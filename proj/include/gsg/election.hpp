#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gsg {

using CandidateId = int;
using VoterId = int; // 0-based internally; rendered 1-based in file/CLI output

/// Error raised by parse_profile / parse_strategies, carrying the 1-based
/// line number of the offending input line (0 when not line-specific).
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// The candidate roster. A candidate's id is its index in declaration order.
struct CandidateSet {
    std::vector<std::string> names;

    int size() const { return static_cast<int>(names.size()); }
    const std::string& name(CandidateId c) const { return names[static_cast<size_t>(c)]; }

    std::optional<CandidateId> find(std::string_view token) const {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == token) return static_cast<CandidateId>(i);
        return std::nullopt;
    }
};

inline CandidateSet make_candidate_set(std::vector<std::string> names) {
    if (names.empty()) throw std::invalid_argument("candidate set must not be empty");
    for (size_t i = 0; i < names.size(); ++i) {
        if (names[i].empty()) throw std::invalid_argument("empty candidate token");
        for (size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j])
                throw std::invalid_argument("duplicate candidate '" + names[i] + "'");
    }
    return CandidateSet{std::move(names)};
}

/// Fixed total order used to resolve score ties, best-first.
struct TieBreakOrder {
    std::vector<CandidateId> order; // order[0] wins every tie it is part of
    std::vector<int> rank;          // rank[c] = position of c in `order`

    bool before(CandidateId a, CandidateId b) const {
        return rank[static_cast<size_t>(a)] < rank[static_cast<size_t>(b)];
    }
};

namespace detail {

inline std::vector<int> inverse_permutation(const std::vector<CandidateId>& perm, int m,
                                            const char* what) {
    if (static_cast<int>(perm.size()) != m)
        throw std::invalid_argument(std::string(what) + " must mention every candidate exactly once");
    std::vector<int> inv(static_cast<size_t>(m), -1);
    for (int pos = 0; pos < m; ++pos) {
        CandidateId c = perm[static_cast<size_t>(pos)];
        if (c < 0 || c >= m) throw std::invalid_argument(std::string(what) + ": candidate id out of range");
        if (inv[static_cast<size_t>(c)] != -1)
            throw std::invalid_argument(std::string(what) + ": repeated candidate");
        inv[static_cast<size_t>(c)] = pos;
    }
    return inv;
}

} // namespace detail

inline TieBreakOrder make_tiebreak(std::vector<CandidateId> order, int m) {
    auto rank = detail::inverse_permutation(order, m, "tiebreak order");
    return TieBreakOrder{std::move(order), std::move(rank)};
}

/// Default tie-breaking: candidate tokens in lexicographic order.
inline TieBreakOrder lexicographic_tiebreak(const CandidateSet& cs) {
    std::vector<CandidateId> order(static_cast<size_t>(cs.size()));
    for (int i = 0; i < cs.size(); ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](CandidateId a, CandidateId b) { return cs.name(a) < cs.name(b); });
    return make_tiebreak(std::move(order), cs.size());
}

/// A total order over the candidates, best-first.
struct Vote {
    std::vector<CandidateId> ranking;
    std::vector<int> position; // position[c] = index of c in `ranking`

    CandidateId top() const { return ranking[0]; }

    bool prefers(CandidateId a, CandidateId b) const {
        return position[static_cast<size_t>(a)] < position[static_cast<size_t>(b)];
    }

    bool approves(CandidateId c, int k) const { return position[static_cast<size_t>(c)] < k; }

    /// Top-k candidates as a set (sorted by id).
    std::vector<CandidateId> top_set(int k) const {
        const auto end = ranking.begin() + std::min<size_t>(static_cast<size_t>(k), ranking.size());
        std::vector<CandidateId> s(ranking.begin(), end);
        std::sort(s.begin(), s.end());
        return s;
    }

    /// Top-k candidates in ballot order.
    std::vector<CandidateId> top_list(int k) const {
        const auto end = ranking.begin() + std::min<size_t>(static_cast<size_t>(k), ranking.size());
        return {ranking.begin(), end};
    }

    bool operator==(const Vote& other) const { return ranking == other.ranking; }
};

inline Vote make_vote(std::vector<CandidateId> ranking, int m) {
    auto pos = detail::inverse_permutation(ranking, m, "vote");
    return Vote{std::move(ranking), std::move(pos)};
}

struct Profile {
    CandidateSet candidates;
    std::vector<Vote> votes;
    TieBreakOrder tiebreak;

    int num_candidates() const { return candidates.size(); }
    int num_voters() const { return static_cast<int>(votes.size()); }

    const Vote& vote(VoterId i) const { return votes[static_cast<size_t>(i)]; }

    Profile with_vote(VoterId i, Vote v) const {
        Profile q = *this;
        q.votes[static_cast<size_t>(i)] = std::move(v);
        return q;
    }
};

inline Profile make_profile(CandidateSet cs, std::vector<Vote> votes, TieBreakOrder tb) {
    if (votes.empty()) throw std::invalid_argument("profile must have at least one voter");
    const int m = cs.size();
    for (const auto& v : votes)
        if (static_cast<int>(v.ranking.size()) != m)
            throw std::invalid_argument("vote does not rank the full candidate set");
    if (static_cast<int>(tb.order.size()) != m)
        throw std::invalid_argument("tiebreak does not cover the candidate set");
    return Profile{std::move(cs), std::move(votes), std::move(tb)};
}

inline Profile make_profile(CandidateSet cs, std::vector<Vote> votes) {
    auto tb = lexicographic_tiebreak(cs);
    return make_profile(std::move(cs), std::move(votes), std::move(tb));
}

/// k-Approval, 1 <= k <= m-1. Plurality is k = 1. A single-candidate
/// election only admits k = 1.
struct Rule {
    int k = 1;
};

inline void validate_rule(const Profile& p, Rule r) {
    const int m = p.num_candidates();
    if (r.k < 1) throw std::invalid_argument("approval width k must be positive");
    if (m == 1) {
        if (r.k != 1) throw std::invalid_argument("k out of range: single-candidate election admits only k=1");
        return;
    }
    if (r.k > m - 1)
        throw std::invalid_argument("k out of range: need k <= m-1 (k=" + std::to_string(r.k) +
                                    ", m=" + std::to_string(m) + ")");
}

struct ScoreTable {
    std::vector<int> points; // indexed by candidate id

    int score(CandidateId c) const { return points[static_cast<size_t>(c)]; }
};

inline ScoreTable scores(const Profile& p, Rule r) {
    validate_rule(p, r);
    ScoreTable t{std::vector<int>(static_cast<size_t>(p.num_candidates()), 0)};
    const int width = std::min(r.k, p.num_candidates());
    for (const auto& v : p.votes)
        for (int j = 0; j < width; ++j) ++t.points[static_cast<size_t>(v.ranking[static_cast<size_t>(j)])];
    return t;
}

namespace detail {

/// Score-maximal candidate, ties resolved by the fixed order.
inline CandidateId best_of(const std::vector<int>& points, const TieBreakOrder& tb) {
    CandidateId best = 0;
    for (CandidateId c = 1; c < static_cast<CandidateId>(points.size()); ++c) {
        const size_t uc = static_cast<size_t>(c), ub = static_cast<size_t>(best);
        if (points[uc] > points[ub] || (points[uc] == points[ub] && tb.before(c, best))) best = c;
    }
    return best;
}

} // namespace detail

inline CandidateId winner(const Profile& p, Rule r) {
    return detail::best_of(scores(p, r).points, p.tiebreak);
}

/// Strict dominance at a profile: higher score, or equal score and earlier
/// in the tie-breaking order. A strict total order on candidates; the
/// winner is its maximum.
inline bool beats(const Profile& p, Rule r, CandidateId c, CandidateId c2) {
    if (c == c2) throw std::invalid_argument("beats: candidates must differ");
    auto t = scores(p, r);
    if (t.score(c) != t.score(c2)) return t.score(c) > t.score(c2);
    return p.tiebreak.before(c, c2);
}

/// Two votes act identically under k-Approval iff their top-k sets coincide.
inline bool votes_equivalent(const Vote& v, const Vote& v2, Rule r) {
    if (v.ranking.size() != v2.ranking.size())
        throw std::invalid_argument("votes_equivalent: different candidate sets");
    return v.top_set(r.k) == v2.top_set(r.k);
}

/// v[X;Y]: transpose x_j with y_j for every j, leaving other positions
/// untouched. X and Y must be disjoint, repeat-free and equally long.
inline Vote swap_vote(const Vote& v, const std::vector<CandidateId>& xs,
                      const std::vector<CandidateId>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("swap_vote: sequence length mismatch");
    const int m = static_cast<int>(v.ranking.size());
    std::vector<char> seen_x(static_cast<size_t>(m), 0), seen_y(static_cast<size_t>(m), 0);
    for (CandidateId c : xs) {
        if (c < 0 || c >= m) throw std::invalid_argument("swap_vote: unknown candidate");
        if (seen_x[static_cast<size_t>(c)]++) throw std::invalid_argument("swap_vote: repeated candidate in X");
    }
    for (CandidateId c : ys) {
        if (c < 0 || c >= m) throw std::invalid_argument("swap_vote: unknown candidate");
        if (seen_y[static_cast<size_t>(c)]++) throw std::invalid_argument("swap_vote: repeated candidate in Y");
        if (seen_x[static_cast<size_t>(c)]) throw std::invalid_argument("swap_vote: X and Y overlap");
    }
    std::vector<CandidateId> ranking = v.ranking;
    for (size_t j = 0; j < xs.size(); ++j) {
        const int px = v.position[static_cast<size_t>(xs[j])];
        const int py = v.position[static_cast<size_t>(ys[j])];
        ranking[static_cast<size_t>(px)] = ys[j];
        ranking[static_cast<size_t>(py)] = xs[j];
    }
    return make_vote(std::move(ranking), m);
}

// ---------------------------------------------------------------------------
// Profile file format
//
//   candidates: a b c d w
//   tiebreak: w a b c d      # optional; default = lexicographic
//   vote: a b c d w          # one line per voter, best-first
//
// '#' starts a comment; tokens match [A-Za-z0-9_]+; voter ids are 1-based
// in file order.
// ---------------------------------------------------------------------------

namespace detail {

inline bool valid_token(std::string_view t) {
    if (t.empty()) return false;
    for (char ch : t)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
    return true;
}

inline std::vector<std::string> split_tokens(std::string_view s) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::string strip_comment(std::string line) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    return line;
}

inline std::vector<CandidateId> tokens_to_ids(const std::vector<std::string>& tokens,
                                              const CandidateSet& cs, int line) {
    std::vector<CandidateId> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) {
        auto id = cs.find(t);
        if (!id) throw ParseError(line, "unknown candidate '" + t + "'");
        ids.push_back(*id);
    }
    return ids;
}

} // namespace detail

inline Profile parse_profile(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;

    std::optional<CandidateSet> cs;
    std::optional<TieBreakOrder> tb;
    std::vector<Vote> votes;

    while (std::getline(in, raw)) {
        ++lineno;
        auto line = detail::strip_comment(raw);
        auto tokens = detail::split_tokens(line);
        if (tokens.empty()) continue;

        const std::string& head = tokens.front();
        std::vector<std::string> rest(tokens.begin() + 1, tokens.end());
        for (const auto& t : rest)
            if (!detail::valid_token(t)) throw ParseError(lineno, "bad token '" + t + "'");

        if (head == "candidates:") {
            if (cs) throw ParseError(lineno, "duplicate candidates line");
            if (rest.empty()) throw ParseError(lineno, "candidates line is empty");
            try {
                cs = make_candidate_set(std::move(rest));
            } catch (const std::invalid_argument& e) {
                throw ParseError(lineno, e.what());
            }
        } else if (head == "tiebreak:") {
            if (!cs) throw ParseError(lineno, "tiebreak before candidates line");
            if (tb) throw ParseError(lineno, "duplicate tiebreak line");
            auto ids = detail::tokens_to_ids(rest, *cs, lineno);
            try {
                tb = make_tiebreak(std::move(ids), cs->size());
            } catch (const std::invalid_argument&) {
                throw ParseError(lineno, "tiebreak is not a permutation of the candidates");
            }
        } else if (head == "vote:") {
            if (!cs) throw ParseError(lineno, "vote before candidates line");
            auto ids = detail::tokens_to_ids(rest, *cs, lineno);
            try {
                votes.push_back(make_vote(std::move(ids), cs->size()));
            } catch (const std::invalid_argument&) {
                throw ParseError(lineno, "vote is not a permutation of the candidates");
            }
        } else {
            throw ParseError(lineno, "unrecognized line '" + head + "'");
        }
    }

    if (!cs) throw ParseError(0, "empty profile: no candidates line");
    if (votes.empty()) throw ParseError(0, "empty profile: no vote lines");
    if (!tb) tb = lexicographic_tiebreak(*cs);
    return make_profile(std::move(*cs), std::move(votes), std::move(*tb));
}

/// Parses one whitespace-separated ranking over an existing candidate set.
inline Vote parse_vote(const CandidateSet& cs, const std::string& text, int line = 0) {
    auto ids = detail::tokens_to_ids(detail::split_tokens(text), cs, line);
    try {
        return make_vote(std::move(ids), cs.size());
    } catch (const std::invalid_argument&) {
        throw ParseError(line, "vote is not a permutation of the candidates");
    }
}

/// Canonical, byte-stable rendering; parse_profile(serialize_profile(p)) == p.
inline std::string serialize_profile(const Profile& p) {
    std::ostringstream out;
    out << "candidates:";
    for (const auto& n : p.candidates.names) out << ' ' << n;
    out << '\n' << "tiebreak:";
    for (CandidateId c : p.tiebreak.order) out << ' ' << p.candidates.name(c);
    out << '\n';
    for (const auto& v : p.votes) {
        out << "vote:";
        for (CandidateId c : v.ranking) out << ' ' << p.candidates.name(c);
        out << '\n';
    }
    return out.str();
}

// Small formatting helpers shared by reports and tests.

inline std::string candidate_list(const Profile& p, std::span<const CandidateId> ids,
                                  const char* sep = " ") {
    std::string out;
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i) out += sep;
        out += p.candidates.name(ids[i]);
    }
    return out;
}

inline std::string vote_string(const Profile& p, const Vote& v) {
    return candidate_list(p, v.ranking);
}

} // namespace gsg
