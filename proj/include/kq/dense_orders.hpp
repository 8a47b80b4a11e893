#pragma once

#include "kq/enumeration.hpp"
#include "kq/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace kq {

// Partition class of (0,1) cap Q, identified by the first coordinate of the
// back-and-forth isomorphism's preimage. Two rationals share a class iff
// their preimages share a first coordinate; class order is label order.
struct ClassId {
    Rational label;

    bool operator==(const ClassId& o) const { return label == o.label; }
    bool operator!=(const ClassId& o) const { return label != o.label; }
    bool operator<(const ClassId& o) const { return label < o.label; }
    bool operator>(const ClassId& o) const { return o < *this; }
};

int class_compare(const ClassId& a, const ClassId& b); // -1, 0, +1
ClassId class_enum(const BigInt& index);               // ClassId(enum_q(index))
ClassId class_between(const ClassId& lo, const ClassId& hi); // label midpoint

// Ordered pair of rationals under the lexicographic order on Q^2.
struct LexPair {
    Rational first;
    Rational second;

    bool operator==(const LexPair& o) const {
        return first == o.first && second == o.second;
    }
    bool operator<(const LexPair& o) const {
        if (first != o.first) return first < o.first;
        return second < o.second;
    }
};

// Deterministic Cantor back-and-forth isomorphism f from (Q^2, lex) onto
// ((0,1) cap Q, <=), built lazily.
//
// Domain enumeration of Q^2: pair (i, j) of enum_q indices sits at shell
// w = i + ceil(sqrt(j)); pairs are ordered by (w, i, j). Shells are finite,
// the order type is omega, and the index of (i, j) is O((i + sqrt(j))^3),
// so both small-i deep-j rows (the strategy's access pattern) and small
// square blocks (the documented totality budget) stay polynomial.
//
// Step 2t-1 (forth) matches the least-index unmatched domain pair to the
// least enum_unit-index codomain element compatible with the recorded
// matching; step 2t (back) matches the least-index unmatched codomain
// element to the least-index compatible domain pair. Both "least compatible
// partner" searches reduce to minimal-enumeration-index-in-an-open-interval
// queries answered in closed form through the Stern-Brocot tree.
//
// The memo after n steps is a pure function of n, so every query result is
// reproducible no matter how the memo was grown.
//
// Concurrency contract: concurrent readers of a quiescent instance are safe;
// any call may extend the memo, so either confine an instance to one worker
// or guard all calls externally.
class BackAndForthIso {
public:
    BackAndForthIso();

    // Total on Q^2; extends the memo until the pair is matched.
    Rational forward(const Rational& a, const Rational& b);

    // Inverse; total on (0,1) cap Q. Throws std::domain_error outside (0,1).
    LexPair backward(const Rational& r);

    ClassId class_of(const Rational& r); // first coordinate of backward(r)

    // k-th element of the class: forward((label, enum_q(k))), k >= 1.
    Rational class_member(const ClassId& c, std::uint64_t k);

    std::uint64_t steps() const { return steps_; }
    std::uint64_t matched_pairs() const { return by_domain_.size(); }

    // Match log for prefix-order tests; enable before the first query.
    void enable_log() { log_enabled_ = true; }
    const std::vector<std::pair<LexPair, Rational>>& log() const { return log_; }

    // Extend the memo to exactly n total steps.
    void run_steps(std::uint64_t n);

private:
    struct DomainCursor {
        std::uint64_t i = 1;
        std::uint64_t j = 1;
        void advance();
    };

    void step();
    void forth();
    void back();
    void record(LexPair d, Rational u);
    void check_cache_limit() const;

    std::map<LexPair, Rational> by_domain_;
    std::map<Rational, LexPair> by_codomain_;
    DomainCursor domain_cursor_;
    std::uint64_t codomain_cursor_ = 1;
    std::uint64_t steps_ = 0;
    std::uint64_t cache_limit_ = 0; // 0 = unlimited; from KQ_CACHE_LIMIT
    bool log_enabled_ = false;
    std::vector<std::pair<LexPair, Rational>> log_;
};

} // namespace kq
