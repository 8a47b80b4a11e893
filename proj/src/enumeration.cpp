#include "kq/enumeration.hpp"

#include <boost/multiprecision/integer.hpp>

#include <utility>
#include <vector>

namespace kq {

namespace {

// One run of equal tree steps: `ones` selects right-child steps.
struct Run {
    bool ones;
    BigInt length;
};

} // namespace

Rational cw_value(const BigInt& index) {
    if (index < 1) throw std::invalid_argument("cw_value: index must be >= 1");
    BigInt p = 1, q = 1;
    if (index == 1) return Rational(p, q);
    const unsigned msb = boost::multiprecision::msb(index);
    for (unsigned bit = msb; bit-- > 0;) {
        if (boost::multiprecision::bit_test(index, bit))
            p += q; // right child (p+q)/q
        else
            q += p; // left child p/(p+q)
    }
    return Rational(std::move(p), std::move(q));
}

BigInt cw_index(const Rational& value) {
    if (!value.is_positive()) throw std::invalid_argument("cw_index: value must be positive");
    BigInt p = value.numerator(), q = value.denominator();
    std::vector<Run> runs; // collected leaf -> root
    while (!(p == 1 && q == 1)) {
        if (p > q) {
            if (q == 1) {
                runs.push_back({true, p - 1});
                p = 1;
            } else {
                BigInt a = p / q;
                runs.push_back({true, a});
                p %= q;
            }
        } else {
            if (p == 1) {
                runs.push_back({false, q - 1});
                q = 1;
            } else {
                BigInt a = q / p;
                runs.push_back({false, a});
                q %= p;
            }
        }
    }
    BigInt index = 1;
    for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
        const unsigned len = static_cast<unsigned>(it->length);
        index <<= len;
        if (it->ones) index |= (BigInt(1) << len) - 1;
    }
    return index;
}

Rational enum_q(const BigInt& index) {
    if (index < 1) throw std::invalid_argument("enum_q: index must be >= 1");
    if (index == 1) return Rational(0);
    if (index % 2 == 0) return cw_value(index / 2);
    return -cw_value((index - 1) / 2);
}

BigInt enum_q_index(const Rational& value) {
    if (value.is_zero()) return 1;
    if (value.is_positive()) return 2 * cw_index(value);
    return 2 * cw_index(-value) + 1;
}

Rational enum_unit(const BigInt& index) {
    Rational x = cw_value(index);
    return Rational(x.numerator(), x.numerator() + x.denominator());
}

BigInt enum_unit_index(const Rational& value) {
    if (!value.in_unit_interval())
        throw std::domain_error("enum_unit_index: value outside (0,1)");
    return cw_index(Rational(value.numerator(), value.denominator() - value.numerator()));
}

Rational simplest_in(const Bound& lo, const Bound& hi) {
    const Rational one(1);
    const bool lo_below_one = !lo || *lo < one;
    const bool hi_above_one = !hi || *hi > one;
    if (lo && hi && !(*lo < *hi)) throw std::invalid_argument("simplest_in: empty interval");
    if (lo_below_one && hi_above_one) return one;
    if (!hi_above_one) {
        // Interval inside (0,1]; mirror through x -> 1/x, which preserves
        // Stern-Brocot depth.
        Bound new_lo = hi->reciprocal();
        Bound new_hi = (lo && lo->is_positive()) ? Bound(lo->reciprocal()) : Bound();
        return simplest_in(new_lo, new_hi).reciprocal();
    }
    // Here lo >= 1. The smallest integer above lo wins if it fits; otherwise
    // recurse on the fractional part within [n, n+1).
    BigInt n = lo->floor();
    Rational candidate(n + 1);
    if (!hi || *hi > candidate) return candidate;
    Rational shifted_lo = *lo - Rational(n);
    Bound new_lo = shifted_lo.is_positive() ? Bound(shifted_lo) : Bound();
    Bound new_hi = Bound(*hi - Rational(n));
    return Rational(n) + simplest_in(new_lo, new_hi);
}

BigInt least_cw_index_in(const Bound& lo, const Bound& hi) {
    // The shallowest Stern-Brocot node in an open interval is unique and any
    // deeper node has a strictly larger Calkin-Wilf (breadth-first) index, so
    // it is also the least-index Calkin-Wilf element of the interval.
    return cw_index(simplest_in(lo, hi));
}

BigInt least_enum_q_index_in(const Bound& lo, const Bound& hi) {
    const Rational zero(0);
    if ((!lo || *lo < zero) && (!hi || *hi > zero)) return 1;
    std::optional<BigInt> best;
    // Positive side: interval cap (0, inf).
    if (!hi || *hi > zero) {
        Bound plo = (lo && *lo > zero) ? lo : Bound();
        best = 2 * least_cw_index_in(plo, hi);
    }
    // Negative side: x = -v with v in (max(0,-hi), -lo).
    if (!lo || *lo < zero) {
        Bound vlo = (hi && *hi < zero) ? Bound(-*hi) : Bound();
        Bound vhi = lo ? Bound(-*lo) : Bound();
        BigInt cand = 2 * least_cw_index_in(vlo, vhi) + 1;
        if (!best || cand < *best) best = cand;
    }
    if (!best) throw std::invalid_argument("least_enum_q_index_in: empty interval");
    return *best;
}

BigInt least_unit_index_in(const Bound& lo, const Bound& hi) {
    const Rational one(1);
    // Map (0,1) bounds through the inverse of x -> x/(x+1), i.e. y -> y/(1-y).
    Bound cw_lo, cw_hi;
    if (lo && lo->is_positive()) cw_lo = *lo / (one - *lo);
    if (hi && *hi < one) cw_hi = *hi / (one - *hi);
    return least_cw_index_in(cw_lo, cw_hi);
}

} // namespace kq
