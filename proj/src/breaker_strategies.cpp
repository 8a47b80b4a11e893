#include "kq/breaker_strategies.hpp"

#include "kq/enumeration.hpp"

#include <algorithm>

namespace kq {

std::pair<Rational, Rational> subset_pair(std::uint64_t t) {
    if (t == 0) throw std::invalid_argument("subset_pair: 1-based index");
    // b = least index with b(b-1)/2 >= t.
    std::uint64_t b = 2;
    while (b * (b - 1) / 2 < t) ++b;
    const std::uint64_t a = t - (b - 1) * (b - 2) / 2;
    return {enum_q(BigInt(a)), enum_q(BigInt(b))};
}

Edge canonical_edge_at(std::uint64_t t) {
    auto [x, y] = subset_pair(t);
    return Edge(std::move(x), std::move(y));
}

namespace {

// Pair lookup for the oriented reading (x, s): s must lie in some I_j with
// x one of that j's subset pair and s enum-later than both members.
std::optional<Edge> pair_of_role(const Rational& x, const Rational& s) {
    if (s.is_integer() || !(s > Rational(1)))
        return std::nullopt; // no interval (j, j+1), j >= 1, contains s
    const BigInt j_big = s.floor();
    if (j_big < 1) return std::nullopt;
    if (j_big > BigInt(std::numeric_limits<std::int64_t>::max() / 4))
        return std::nullopt; // indexes of such deep subsets are unreachable anyway
    const std::uint64_t j = static_cast<std::uint64_t>(j_big);
    auto [p, q] = subset_pair(j);
    if (x != p && x != q) return std::nullopt;
    if (s == p || s == q) return std::nullopt;
    // b is the larger enum index of the subset pair by construction.
    std::uint64_t b = 2;
    while (b * (b - 1) / 2 < j) ++b;
    if (!(enum_q_index(s) > BigInt(b))) return std::nullopt;
    return Edge(x == p ? q : p, s);
}

} // namespace

std::optional<Edge> pair_of(const Edge& edge) {
    if (auto r = pair_of_role(edge.a, edge.b)) return r;
    return pair_of_role(edge.b, edge.a);
}

std::vector<std::pair<Edge, Edge>> generate_pairs(std::uint64_t count) {
    std::vector<std::pair<Edge, Edge>> out;
    for (std::uint64_t t = 1; out.size() < count; ++t) {
        const Rational s = enum_q(BigInt(t));
        if (s.is_integer() || !(s > Rational(1))) continue;
        const std::uint64_t j = static_cast<std::uint64_t>(s.floor());
        auto [p, q] = subset_pair(j);
        if (s == p || s == q) continue;
        std::uint64_t b = 2;
        while (b * (b - 1) / 2 < j) ++b;
        if (!(t > b)) continue;
        out.emplace_back(Edge(p, s), Edge(q, s));
    }
    return out;
}

namespace {

Edge first_unclaimed_canonical(const GameState& state, std::uint64_t& cursor) {
    // Claims never revert, so the cursor only moves forward.
    for (;; ++cursor) {
        Edge e = canonical_edge_at(cursor);
        if (!state.claimed(e)) return e;
    }
}

} // namespace

Edge PairingBreaker::choose(const GameState& state) {
    const auto& last = state.last_maker_edge();
    if (last) {
        if (auto partner = pair_of(*last); partner && !state.claimed(*partner))
            return *partner;
    }
    ++fallbacks_;
    return first_unclaimed_canonical(state, canonical_cursor_);
}

void RandomBreaker::sync(const GameState& state) {
    const auto& moves = state.moves();
    for (std::uint64_t m = synced_moves_; m < moves.size(); ++m) {
        for (const Rational* v : {&moves[m].edge.a, &moves[m].edge.b}) {
            if (seen_set_.insert(*v).second) seen_.push_back(*v);
        }
    }
    synced_moves_ = moves.size();
}

Edge RandomBreaker::choose(const GameState& state) {
    sync(state);
    // Candidate vertices: everything touched, plus the next 3 fresh vertices
    // of the enum_q order.
    std::vector<Rational> fresh3;
    for (std::uint64_t i = fresh_scan_floor_; fresh3.size() < 3; ++i) {
        Rational v = enum_q(BigInt(i));
        if (state.fresh(v))
            fresh3.push_back(std::move(v));
        else if (fresh3.empty() && i == fresh_scan_floor_)
            ++fresh_scan_floor_; // non-fresh prefix never becomes fresh again
    }

    const std::uint64_t n = seen_.size() + fresh3.size();
    auto vertex_at = [&](std::uint64_t i) -> const Rational& {
        return i < seen_.size() ? seen_[i] : fresh3[i - seen_.size()];
    };
    for (;;) {
        const std::uint64_t i = rng_() % n;
        const std::uint64_t j = rng_() % n;
        if (i == j) continue;
        Edge e(vertex_at(i), vertex_at(j));
        if (!state.claimed(e)) return e;
    }
}

Edge BlockingBreaker::choose(const GameState& state) {
    MakerDecision plan = replica_.decide(state);
    if (!plan.fresh_branch && !state.claimed(plan.edge)) return plan.edge;
    return first_unclaimed_canonical(state, canonical_cursor_);
}

} // namespace kq
