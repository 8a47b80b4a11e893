#pragma once

#include "kq/dense_orders.hpp"
#include "kq/universal_sequence.hpp"

namespace kq {

// The frozen strategy ingredients: the interval partition (through the
// back-and-forth isomorphism) and the steering sequence. One context per
// worker; all queries may extend the underlying memos.
struct Context {
    BackAndForthIso iso;
    UniversalStream stream;
};

} // namespace kq
