#include "kq/universal_sequence.hpp"

#include <algorithm>
#include <stdexcept>

namespace kq {

namespace {

void compositions_of(std::int32_t total, std::int32_t parts, Word& prefix,
                     std::vector<Word>& out) {
    if (parts == 1) {
        prefix.push_back(total);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (std::int32_t first = 1; first <= total - (parts - 1); ++first) {
        prefix.push_back(first);
        compositions_of(total - first, parts - 1, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

void UniversalStream::ensure_words(std::uint64_t t) {
    while (words_.size() < t) {
        std::vector<Word> batch;
        Word prefix;
        const std::int32_t w = next_weight_++;
        for (std::int32_t len = 1; 2 * len <= w; ++len)
            compositions_of(w - len, len, prefix, batch);
        std::sort(batch.begin(), batch.end());
        words_.insert(words_.end(), batch.begin(), batch.end());
    }
}

void UniversalStream::append_next_block() {
    const std::uint64_t t = ++blocks_emitted_;
    ensure_words(t);
    for (std::uint64_t s = 0; s < t; ++s)
        stream_.insert(stream_.end(), words_[s].begin(), words_[s].end());
}

void UniversalStream::ensure_prefix(std::uint64_t n) {
    while (stream_.size() < n) append_next_block();
}

std::int32_t UniversalStream::at(std::uint64_t i) {
    if (i == 0) throw std::invalid_argument("UniversalStream::at: 1-based index");
    ensure_prefix(i);
    return stream_[i - 1];
}

const Word& UniversalStream::word_at(std::uint64_t t) {
    if (t == 0) throw std::invalid_argument("UniversalStream::word_at: 1-based index");
    ensure_words(t);
    return words_[t - 1];
}

std::optional<std::uint64_t> UniversalStream::scan(const Word& word, std::uint64_t m,
                                                   std::uint64_t limit) {
    if (word.empty()) throw std::invalid_argument("occurrence scan: empty word");
    Occurrences& occ = occ_[word];
    const std::uint64_t len = word.size();
    while (occ.positions.size() < m) {
        if (limit != 0 && occ.frontier > limit) return std::nullopt;
        // Keep a block of unscanned material ahead of the frontier.
        if (occ.frontier + len - 1 > stream_.size() ||
            stream_.size() < occ.frontier + 4096) {
            std::uint64_t want = std::max<std::uint64_t>(stream_.size() * 2, 4096);
            want = std::max(want, occ.frontier + len + 4096);
            ensure_prefix(want);
        }
        const std::uint64_t last_start = stream_.size() - len + 1;
        std::uint64_t stop = last_start;
        if (limit != 0) stop = std::min(stop, limit);
        for (std::uint64_t pos = occ.frontier; pos <= stop; ++pos) {
            if (std::equal(word.begin(), word.end(), stream_.begin() + (pos - 1))) {
                occ.positions.push_back(pos);
                if (occ.positions.size() == m) {
                    occ.frontier = pos + 1;
                    return pos;
                }
            }
        }
        occ.frontier = stop + 1;
    }
    return occ.positions[m - 1];
}

std::int32_t UniversalStream::occurrence_next(const Word& word, std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("occurrence_next: m must be >= 1");
    auto pos = scan(word, m, 0);
    return at(*pos + word.size());
}

std::optional<std::int32_t> UniversalStream::occurrence_next_bounded(
    const Word& word, std::uint64_t m, std::uint64_t position_budget) {
    if (m == 0) throw std::invalid_argument("occurrence_next_bounded: m must be >= 1");
    auto pos = scan(word, m, position_budget);
    if (!pos) return std::nullopt;
    return at(*pos + word.size());
}

std::optional<std::uint64_t> UniversalStream::occurrence_position(
    const Word& word, std::uint64_t m, std::uint64_t position_budget) {
    if (m == 0) throw std::invalid_argument("occurrence_position: m must be >= 1");
    return scan(word, m, position_budget);
}

std::int64_t gap_at(std::uint64_t i) {
    if (i == 0) throw std::invalid_argument("gap_at: 1-based index");
    std::uint64_t block = 1;
    std::uint64_t start = 1;
    while (start + block <= i) {
        start += block;
        ++block;
    }
    return static_cast<std::int64_t>(i - start + 1);
}

} // namespace kq
