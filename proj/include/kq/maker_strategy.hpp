#pragma once

#include "kq/context.hpp"
#include "kq/game.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace kq {

constexpr std::uint64_t kDefaultOccBudget = 1u << 21;

// --- Q-game strategy operations, computed directly from the state. ---
// These are the reference forms: linear scans, no private caches. QStrategy
// below answers identically through incremental indexes; the equivalence is
// tested move by move on full games.

Edge opening_move(const GameState& state); // {0,1}, declares v_1=0, v_2=1

// L: vertices of v_k's class whose record prefix of length l equals S_{v_k}.
std::vector<std::uint32_t> compute_L(const GameState& state, std::uint32_t vk, Context& ctx);

// Steering word of v_k: the addition indices of its record entries.
Word record_word(const GameState& state, std::uint32_t vk);

// class_enum(occurrence_next(word(S_{v_k}), |L|+1)); nullopt when the
// occurrence search exhausts `occ_budget` stream positions.
std::optional<ClassId> target_class(const GameState& state, std::uint32_t vk,
                                    std::uint64_t l_size, Context& ctx,
                                    std::uint64_t occ_budget);

// F: the at most l(l+1)+1 first vertices (by addition index) of the target
// class whose record prefix of length l equals S_{v_k}.
std::vector<std::uint32_t> compute_F(const GameState& state, std::uint32_t vk,
                                     const ClassId& target, Context& ctx);

// Minimal F-member under (|N_M(v_i) cap L|, i) with the edge to v_k still
// unclaimed; nullopt when every such edge is claimed.
std::optional<Edge> balanced_min(const GameState& state,
                                 const std::vector<std::uint32_t>& F,
                                 const std::vector<std::uint32_t>& L, std::uint32_t vk);

struct MakerDecision {
    Edge edge;
    bool fresh_branch;       // claimed {v_1, w} with a fresh w
    bool blocked_f_fallback; // F was full but every edge to it was claimed
    bool occ_budget_fallback;
    MakerDecision(Edge e) : edge(std::move(e)), fresh_branch(false), blocked_f_fallback(false),
                            occ_budget_fallback(false) {}
};

// One full Q-game decision computed from scratch; the test oracle for
// QStrategy::choose.
MakerDecision maker_move_reference(const GameState& state, Context& ctx,
                                   std::uint64_t occ_budget);

// Maker's Q-game strategy.
//
// Turn 1 claims {0,1}. Afterwards, with v_k the most recently added vertex
// and l = |S_{v_k}|: if v_k lies in (0,1), the target class is read off the
// steering sequence at the (|L|+1)-st occurrence of v_k's record word and
// Maker claims the balanced-minimal free edge into F whenever F is full;
// otherwise (including v_2 = 1, which lies in no partition class, a fully
// blocked F, and occurrence searches past the budget) she claims {v_1, w}
// for the first fresh member w of P_{n_{k+1}}, which becomes v_{k+1}.
class QStrategy : public Strategy {
public:
    QStrategy(Context& ctx, std::uint64_t occ_budget = kDefaultOccBudget)
        : ctx_(ctx), occ_budget_(occ_budget) {}

    std::string id() const override { return "q-strategy"; }
    Edge choose(const GameState& state) override;
    std::vector<std::pair<std::string, std::uint64_t>> counters() const override {
        return {{"fresh_moves", fresh_moves_},
                {"blocked_f_fallbacks", blocked_f_fallbacks_},
                {"occ_budget_fallbacks", occ_budget_fallbacks_}};
    }

    // Decision with flags; used by the verifier and the blocking breaker.
    MakerDecision decide(const GameState& state);

private:
    struct FamilyKey {
        std::vector<std::uint32_t> prefix; // record indices
        Rational class_label;
        bool operator<(const FamilyKey& o) const {
            if (prefix != o.prefix) return prefix < o.prefix;
            return class_label < o.class_label;
        }
    };

    struct Family {
        std::vector<std::uint32_t> members; // addition order
        // |N_M(v) cap members| per vertex, maintained incrementally.
        std::unordered_map<std::uint32_t, std::uint32_t> neighbour_counts;
    };

    void sync(const GameState& state);
    Family& family(const std::vector<std::uint32_t>& prefix, const Rational& label);
    Family* find_family(const std::vector<std::uint32_t>& prefix, const Rational& label);
    Edge fresh_move(const GameState& state);

    Context& ctx_;
    std::uint64_t occ_budget_;

    // Private memo, a pure function of the observed move prefix.
    std::uint64_t synced_moves_ = 0;
    std::map<FamilyKey, Family> families_;
    std::vector<std::vector<std::uint32_t>> nbrs_;   // running adjacency, by vertex id
    std::vector<std::vector<Family*>> joined_;       // families joined, by vertex id
    std::vector<std::uint32_t> rec_len_;             // record entries seen, by vertex id
    std::unordered_map<std::uint32_t, std::optional<Rational>> class_label_of_; // by vertex id
    std::unordered_map<Rational, std::uint64_t, RationalHash> fresh_cursor_;   // by class label

    std::uint64_t fresh_moves_ = 0;
    std::uint64_t blocked_f_fallbacks_ = 0;
    std::uint64_t occ_budget_fallbacks_ = 0;
};

} // namespace kq
