#pragma once

#include "kq/rational.hpp"

#include <optional>

namespace kq {

// Canonical enumerations of Q, (0,1) cap Q and of the positive rationals.
//
// The positive rationals are enumerated in Calkin-Wilf order: cw(1) = 1 and
// the node at index n has children cw(2n) = p/(p+q) and cw(2n+1) = (p+q)/q.
// Breadth-first this is 1, 1/2, 2, 1/3, 3/2, 2/3, 3, ... and coincides with
// the single-step recurrence next(x) = 1/(2*floor(x) - x + 1).
//
// enum_q interleaves signs around that order: 0, 1, -1, 1/2, -1/2, 2, -2, ...
// enum_unit is the image of the Calkin-Wilf order under x -> x/(x+1), a
// bijection onto (0,1) cap Q: 1/2, 1/3, 2/3, 1/4, 3/5, ...
//
// All three are bijections with exact big-integer inverses; the inverse walks
// the Calkin-Wilf tree upward with batched (continued-fraction) steps, so the
// cost is polynomial in the bit size of the input, never in the index.

Rational cw_value(const BigInt& index);          // index >= 1
BigInt cw_index(const Rational& positive_value); // value > 0

Rational enum_q(const BigInt& index); // index >= 1
BigInt enum_q_index(const Rational& value);

Rational enum_unit(const BigInt& index);      // index >= 1, image in (0,1)
BigInt enum_unit_index(const Rational& value); // value in (0,1)

// Open-interval endpoint; disengaged means the interval is unbounded on that
// side (0 resp. +infinity for the positive-rational searches).
using Bound = std::optional<Rational>;

// The rational of minimal Stern-Brocot depth in the open interval (lo, hi)
// over the positive rationals. Precondition: the interval is nonempty.
Rational simplest_in(const Bound& lo, const Bound& hi);

// Least Calkin-Wilf index whose value lies strictly inside (lo, hi).
BigInt least_cw_index_in(const Bound& lo, const Bound& hi);

// Least enum_q index whose value lies strictly inside (lo, hi); the interval
// ranges over all of Q (disengaged bounds mean -/+ infinity).
BigInt least_enum_q_index_in(const Bound& lo, const Bound& hi);

// Least enum_unit index whose value lies strictly inside (lo, hi); bounds are
// within [0,1], disengaged meaning 0 resp. 1.
BigInt least_unit_index_in(const Bound& lo, const Bound& hi);

} // namespace kq
