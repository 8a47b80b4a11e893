#pragma once

#include "kq/breaker_strategies.hpp"
#include "kq/context.hpp"
#include "kq/game.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kq {

// Line-oriented verification report; the first output line is the verdict
// ("OK" or "FAIL <n> violations").
struct Report {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    void add(std::string v) { violations.push_back(std::move(v)); }
    std::string text() const;
};

// Well-formedness, alternation and legality of a raw trace.
Report verify_trace(const Trace& trace);

// Replays a q-strategy trace move by move against a fresh strategy replica;
// reports the first divergence, per-vertex structural laws and the fallback
// counters.
Report verify_maker_strategy(const Trace& trace, Context& ctx);

// Pairing discipline: every Maker-claimed paired edge is answered within one
// Breaker turn, Maker never owns both edges of a pair, and for every j with
// both p_j, q_j Maker-incident the count of common I_j-neighbours in G_M is
// within the enum-earlier bound.
Report verify_pairing(const Trace& trace);

// Pairwise edge-disjointness of the first `bound` generated pairs.
Report pair_disjointness(std::uint64_t bound);

// --- Clique extraction (finite-scale recursion with certificates) ---

struct CliqueStep {
    std::uint32_t vertex_index = 0;            // u_m as addition index
    Rational vertex_value;                     //
    std::optional<Rational> class_label;       // R_m; disengaged for u_1 = v_1
    std::int64_t gap_index = 0;                // a_{m-1}; 0 on the first step
    std::uint64_t reservoir_size = 0;          // |W_m|
    std::vector<std::pair<Rational, std::uint64_t>> class_counts; // |W_m cap P| >= threshold
};

struct CliqueCertificate {
    std::uint64_t threshold = 0;
    std::uint64_t m_max = 0;
    std::vector<CliqueStep> steps;

    std::size_t achieved_m() const { return steps.size(); }
    std::string serialize() const;
    static CliqueCertificate parse(const std::string& text);
};

// Recursion following the proof shape: W_1 = V(G_M) \ {v_1}; at each step the
// target class is the first P_x (x scanned in gap-sequence value order)
// inside the a_k-gap with >= threshold reservoir members and no clique
// vertex; u_{k+1} is the least member of F admissible for every gap region;
// W_{k+1} is recomputed from the records. "Infinitely many" is replaced by
// the threshold throughout. Degenerate inputs yield m = 1.
CliqueCertificate extract_clique(const GameState& state, Context& ctx, std::uint64_t m_max,
                                 std::uint64_t threshold);

// Independent re-verification of a certificate against the state: clique
// edges in G_M, reservoir counts, thresholds, and the gap attestation.
Report check_certificate(const CliqueCertificate& cert, const GameState& state, Context& ctx);

// --- Ramsey tools ---

enum class Colour { Red, Blue };

// Blue iff the value order of (e_i, e_j) agrees with the index order.
Colour index_colouring(std::uint64_t i, std::uint64_t j);

// Size of the largest clique among e_1..e_n monochromatic in `colour` under
// index_colouring. Both colour classes are transitive, so a chain dynamic
// program is exact.
std::size_t max_mono_clique_prefix(std::size_t n, Colour colour);

// Vertex-colouring oracle with a total query budget.
struct ColouringOracle {
    std::function<Colour(const Rational&)> colour;
    std::uint64_t budget = 1u << 20;
    std::uint64_t queries = 0;

    struct BudgetExhausted {};
    Colour query(const Rational& r) {
        if (queries >= budget) throw BudgetExhausted{};
        ++queries;
        return colour(r);
    }
};

ColouringOracle all_blue_oracle();
ColouringOracle all_red_oracle();
ColouringOracle denominator_parity_oracle(); // red iff denominator odd

struct DenseSubsetResult {
    enum class Case { BlueClass, RedSelection, Inconclusive };
    Case tag = Case::Inconclusive;
    std::vector<Rational> elements;
    std::vector<Rational> class_labels; // one per element in the red case
    std::string note;
};

// Budgeted constructive extraction of a monochromatic set: `count` classes
// with labels forming the dyadic midpoint pattern are scanned member by
// member; a class with no red element within `per_class_budget` members
// certifies the blue case, otherwise one red element per class realizes the
// red case. An exhausted oracle budget is reported as inconclusive.
DenseSubsetResult mono_dense_subset(ColouringOracle& oracle, std::size_t count,
                                    std::uint64_t per_class_budget, Context& ctx);

} // namespace kq
