#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace kq {

using Word = std::vector<std::int32_t>;

// The steering sequence (n_i): every finite word of positive integers occurs
// infinitely often as a consecutive subsequence.
//
// Construction: enumerate the nonempty words w_1, w_2, ... ordered by
// weight = length + sum, ties lexicographic ((1), (2), (1,1), (3), (1,2),
// (2,1), (4), ...), and emit the blocks w_1 | w_1 w_2 | w_1 w_2 w_3 | ...
// Every word is a block segment of all later rounds, hence occurs in
// infinitely many positions.
//
// Occurrences are counted at every starting position: overlapping matches
// and matches across block boundaries all count.
//
// Concurrency contract: same as the iso memo - concurrent reads of a
// quiescent instance are safe, extensions must be serialized.
class UniversalStream {
public:
    // n_i, 1-based.
    std::int32_t at(std::uint64_t i);

    // Stream element immediately after the m-th occurrence of `word`
    // (occurrence = starting position). Terminates for every word by
    // universality; beware that words mentioning large letters first occur
    // astronomically late, which is what the bounded variant is for.
    std::int32_t occurrence_next(const Word& word, std::uint64_t m);

    // Same, but gives up once the scan frontier passes `position_budget`.
    std::optional<std::int32_t> occurrence_next_bounded(const Word& word, std::uint64_t m,
                                                        std::uint64_t position_budget);

    // Starting position (1-based) of the m-th occurrence; test/debug surface.
    std::optional<std::uint64_t> occurrence_position(const Word& word, std::uint64_t m,
                                                     std::uint64_t position_budget);

    const Word& word_at(std::uint64_t t); // w_t, 1-based
    std::uint64_t materialized() const { return stream_.size(); }
    void ensure_prefix(std::uint64_t n);

private:
    struct Occurrences {
        std::vector<std::uint64_t> positions;
        std::uint64_t frontier = 1; // next unscanned starting position
    };

    void ensure_words(std::uint64_t t);
    void append_next_block();
    // Scans for occurrences until `m` are known or the frontier passes
    // `limit` (0 = unlimited); returns the m-th position if found.
    std::optional<std::uint64_t> scan(const Word& word, std::uint64_t m, std::uint64_t limit);

    std::vector<Word> words_;
    std::int32_t next_weight_ = 2;
    std::vector<std::int32_t> stream_;
    std::uint64_t blocks_emitted_ = 0;
    std::map<Word, Occurrences> occ_;
};

// Gap sequence 1,1,2,1,2,3,1,2,3,4,...; a_i <= i and every positive integer
// occurs infinitely often.
std::int64_t gap_at(std::uint64_t i);

} // namespace kq
