#include "kq/dense_orders.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cstdlib>
#include <stdexcept>
#include <tuple>

namespace kq {

int class_compare(const ClassId& a, const ClassId& b) {
    if (a.label < b.label) return -1;
    if (b.label < a.label) return 1;
    return 0;
}

ClassId class_enum(const BigInt& index) { return ClassId{enum_q(index)}; }

ClassId class_between(const ClassId& lo, const ClassId& hi) {
    if (!(lo.label < hi.label))
        throw std::invalid_argument("class_between: lo must be below hi");
    return ClassId{midpoint(lo.label, hi.label)};
}

namespace {

BigInt ceil_sqrt(const BigInt& n) {
    if (n <= 1) return n;
    BigInt r = boost::multiprecision::sqrt(n);
    if (r * r < n) ++r;
    return r;
}

// Ordering key of domain pair (i, j): (shell, i, j) with shell i + ceil(sqrt j).
using DomainKey = std::tuple<BigInt, BigInt, BigInt>;

DomainKey domain_key(const BigInt& i, const BigInt& j) {
    return {i + ceil_sqrt(j), i, j};
}

struct Candidate {
    DomainKey key;
    BigInt i;
    BigInt j;
};

void offer(std::optional<Candidate>& best, BigInt i, BigInt j) {
    Candidate c{domain_key(i, j), std::move(i), std::move(j)};
    if (!best || c.key < best->key) best = std::move(c);
}

} // namespace

void BackAndForthIso::DomainCursor::advance() {
    const std::uint64_t w = i + static_cast<std::uint64_t>(ceil_sqrt(BigInt(j)));
    const std::uint64_t d = w - i;
    if (j < d * d) {
        ++j;
    } else if (i + 1 < w) {
        ++i;
        const std::uint64_t nd = w - i;
        j = (nd - 1) * (nd - 1) + 1;
    } else {
        // next shell, first row
        i = 1;
        const std::uint64_t nd = w; // (w+1) - 1
        j = (nd - 1) * (nd - 1) + 1;
    }
}

BackAndForthIso::BackAndForthIso() {
    if (const char* env = std::getenv("KQ_CACHE_LIMIT")) {
        cache_limit_ = std::strtoull(env, nullptr, 10);
    }
}

void BackAndForthIso::check_cache_limit() const {
    if (cache_limit_ != 0 && steps_ >= cache_limit_)
        throw std::runtime_error("BackAndForthIso: KQ_CACHE_LIMIT exceeded");
}

void BackAndForthIso::record(LexPair d, Rational u) {
    if (log_enabled_) log_.emplace_back(d, u);
    by_codomain_.emplace(u, d);
    by_domain_.emplace(std::move(d), std::move(u));
}

void BackAndForthIso::step() {
    check_cache_limit();
    ++steps_;
    if (steps_ % 2 == 1)
        forth();
    else
        back();
}

void BackAndForthIso::forth() {
    // Least-index unmatched domain pair.
    LexPair d;
    for (;;) {
        d = LexPair{enum_q(BigInt(domain_cursor_.i)), enum_q(BigInt(domain_cursor_.j))};
        if (!by_domain_.count(d)) break;
        domain_cursor_.advance();
    }
    domain_cursor_.advance();

    // Image must sit strictly between the images of d's lex neighbours. All
    // matched images outside that gap, all codomain elements inside it are
    // unmatched, so the least-index element of the open gap is the partner.
    Bound lo, hi;
    auto it = by_domain_.lower_bound(d);
    if (it != by_domain_.end()) hi = it->second;
    if (it != by_domain_.begin()) lo = std::prev(it)->second;
    BigInt m = least_unit_index_in(lo, hi);
    record(std::move(d), enum_unit(m));
}

void BackAndForthIso::back() {
    // Least-index unmatched codomain element.
    Rational u;
    for (;;) {
        u = enum_unit(BigInt(codomain_cursor_));
        if (!by_codomain_.count(u)) break;
        ++codomain_cursor_;
    }
    ++codomain_cursor_;

    // Partner: least-index domain pair strictly inside the lex gap between
    // the preimages of u's value neighbours.
    std::optional<LexPair> lo, hi;
    auto it = by_codomain_.lower_bound(u);
    if (it != by_codomain_.end()) hi = it->second;
    if (it != by_codomain_.begin()) lo = std::prev(it)->second;

    std::optional<Candidate> best;
    if (lo && hi && lo->first == hi->first) {
        // Only second coordinates inside (lo.second, hi.second) qualify.
        BigInt i = enum_q_index(lo->first);
        BigInt j = least_enum_q_index_in(lo->second, hi->second);
        offer(best, std::move(i), std::move(j));
    } else {
        // First coordinate strictly between the neighbour firsts; j free, so
        // j = 1 and the key is increasing in i: take the least such i.
        {
            Bound flo, fhi;
            if (lo) flo = lo->first;
            if (hi) fhi = hi->first;
            BigInt i = least_enum_q_index_in(flo, fhi);
            offer(best, std::move(i), BigInt(1));
        }
        if (lo) {
            BigInt i = enum_q_index(lo->first);
            BigInt j = least_enum_q_index_in(lo->second, Bound());
            offer(best, std::move(i), std::move(j));
        }
        if (hi) {
            BigInt i = enum_q_index(hi->first);
            BigInt j = least_enum_q_index_in(Bound(), hi->second);
            offer(best, std::move(i), std::move(j));
        }
    }

    record(LexPair{enum_q(best->i), enum_q(best->j)}, std::move(u));
}

Rational BackAndForthIso::forward(const Rational& a, const Rational& b) {
    const LexPair d{a, b};
    for (;;) {
        auto it = by_domain_.find(d);
        if (it != by_domain_.end()) return it->second;
        step();
    }
}

LexPair BackAndForthIso::backward(const Rational& r) {
    if (!r.in_unit_interval())
        throw std::domain_error("backward: input outside (0,1)");
    for (;;) {
        auto it = by_codomain_.find(r);
        if (it != by_codomain_.end()) return it->second;
        step();
    }
}

ClassId BackAndForthIso::class_of(const Rational& r) {
    return ClassId{backward(r).first};
}

Rational BackAndForthIso::class_member(const ClassId& c, std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("class_member: k must be >= 1");
    return forward(c.label, enum_q(BigInt(k)));
}

void BackAndForthIso::run_steps(std::uint64_t n) {
    while (steps_ < n) step();
}

} // namespace kq
