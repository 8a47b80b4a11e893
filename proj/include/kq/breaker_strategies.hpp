#pragma once

#include "kq/context.hpp"
#include "kq/game.hpp"
#include "kq/maker_strategy.hpp"

#include <cstdint>
#include <random>

namespace kq {

// t-th 2-element subset {e_a, e_b} of Q, a < b, ordered by (b, a):
// {e_1,e_2}, {e_1,e_3}, {e_2,e_3}, {e_1,e_4}, ... This doubles as the
// canonical edge enumeration used by Breaker fallbacks.
std::pair<Rational, Rational> subset_pair(std::uint64_t t);
Edge canonical_edge_at(std::uint64_t t);

// Dense-game pairing table. Interval I_j = (j, j+1) cap Q; with {p_j, q_j}
// the j-th 2-subset, every s in I_j \ {p_j,q_j} that appears later in enum_q
// than both p_j and q_j yields the edge pair {p_j s, q_j s}.

// Partner of `edge` in the pair table, or nullopt when the edge is unpaired.
std::optional<Edge> pair_of(const Edge& edge);

// First `count` generated pairs, scanning s in enum_q order.
std::vector<std::pair<Edge, Edge>> generate_pairs(std::uint64_t count);

// Response rule: if Maker's last move is half of a pair whose partner is
// unclaimed, claim the partner; otherwise claim the first unclaimed edge of
// the canonical enumeration (a flagged fallback).
class PairingBreaker : public Strategy {
public:
    std::string id() const override { return "pairing"; }
    Edge choose(const GameState& state) override;
    std::vector<std::pair<std::string, std::uint64_t>> counters() const override {
        return {{"fallback_moves", fallbacks_}};
    }

private:
    std::uint64_t canonical_cursor_ = 1;
    std::uint64_t fallbacks_ = 0;
};

// Uniform choice over the unclaimed edges spanned by the touched vertices
// plus the next 3 fresh enum_q vertices, implemented by rejection sampling
// (the claimed fraction of the pool is tiny, so retries are rare and the
// conditional distribution over unclaimed pool edges is exactly uniform).
// mt19937_64 keeps the move sequence identical across platforms for a fixed
// seed.
class RandomBreaker : public Strategy {
public:
    explicit RandomBreaker(std::uint64_t seed) : seed_(seed), rng_(seed) {}

    std::string id() const override { return "random:" + std::to_string(seed_); }
    Edge choose(const GameState& state) override;

private:
    void sync(const GameState& state);

    std::uint64_t seed_;
    std::mt19937_64 rng_;
    std::uint64_t fresh_scan_floor_ = 1;
    std::uint64_t synced_moves_ = 0;
    std::vector<Rational> seen_; // touched vertices in first-touch order
    std::unordered_set<Rational, RationalHash> seen_set_;
};

// Adversary for the blocked-F fallback: recomputes Maker's current plan and
// claims the edge balanced_min would choose next, when there is one.
class BlockingBreaker : public Strategy {
public:
    BlockingBreaker(Context& ctx, std::uint64_t occ_budget = kDefaultOccBudget)
        : replica_(ctx, occ_budget) {}

    std::string id() const override { return "blocking"; }
    Edge choose(const GameState& state) override;

private:
    QStrategy replica_;
    std::uint64_t canonical_cursor_ = 1;
};

} // namespace kq
