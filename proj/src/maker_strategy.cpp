#include "kq/maker_strategy.hpp"

#include <algorithm>
#include <stdexcept>

namespace kq {

namespace {

const Rational kZero(0);
const Rational kOne(1);

std::size_t need_for(std::size_t l) { return l * (l + 1) + 1; }

// Record prefix of length l as addition indices, or empty when the effective
// record is shorter than l.
bool record_prefix_matches(const GameState& state, std::uint32_t v,
                           const std::vector<std::uint32_t>& want, std::size_t l) {
    const ConnectionRecord& rec = state.record(v);
    if (rec.effective_len() < l) return false;
    for (std::size_t t = 0; t < l; ++t)
        if (rec.older[t] != want[t]) return false;
    return true;
}

} // namespace

Edge opening_move(const GameState& state) {
    if (state.turn() != 0)
        throw std::invalid_argument("opening_move: state is not empty");
    return Edge(kZero, kOne);
}

std::vector<std::uint32_t> compute_L(const GameState& state, std::uint32_t vk, Context& ctx) {
    const Rational& val = state.vertex(vk);
    if (!val.in_unit_interval())
        throw std::invalid_argument("compute_L: active vertex lies in no partition class");
    const ClassId cls = ctx.iso.class_of(val);
    const ConnectionRecord& rec = state.record(vk);
    const std::size_t l = rec.effective_len();
    std::vector<std::uint32_t> want(rec.older.begin(), rec.older.begin() + l);

    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 1; v <= state.maker_vertex_count(); ++v) {
        const Rational& value = state.vertex(v);
        if (!value.in_unit_interval()) continue;
        if (!(ctx.iso.class_of(value) == cls)) continue;
        if (record_prefix_matches(state, v, want, l)) out.push_back(v);
    }
    return out;
}

Word record_word(const GameState& state, std::uint32_t vk) {
    const ConnectionRecord& rec = state.record(vk);
    Word w;
    for (std::size_t t = 0; t < rec.effective_len(); ++t)
        w.push_back(static_cast<std::int32_t>(rec.older[t]));
    return w;
}

std::optional<ClassId> target_class(const GameState& state, std::uint32_t vk,
                                    std::uint64_t l_size, Context& ctx,
                                    std::uint64_t occ_budget) {
    Word word = record_word(state, vk);
    if (word.empty())
        throw std::invalid_argument("target_class: empty connection record");
    auto n = ctx.stream.occurrence_next_bounded(word, l_size + 1, occ_budget);
    if (!n) return std::nullopt;
    return class_enum(BigInt(*n));
}

std::vector<std::uint32_t> compute_F(const GameState& state, std::uint32_t vk,
                                     const ClassId& target, Context& ctx) {
    const ConnectionRecord& rec = state.record(vk);
    const std::size_t l = rec.effective_len();
    std::vector<std::uint32_t> want(rec.older.begin(), rec.older.begin() + l);
    const std::size_t need = need_for(l);

    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 1; v <= state.maker_vertex_count() && out.size() < need; ++v) {
        const Rational& value = state.vertex(v);
        if (!value.in_unit_interval()) continue;
        if (!(ctx.iso.class_of(value) == target)) continue;
        if (record_prefix_matches(state, v, want, l)) out.push_back(v);
    }
    return out;
}

std::optional<Edge> balanced_min(const GameState& state, const std::vector<std::uint32_t>& F,
                                 const std::vector<std::uint32_t>& L, std::uint32_t vk) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> order; // (|N cap L|, index)
    for (std::uint32_t f : F) {
        if (f == vk) continue;
        std::uint32_t cnt = 0;
        for (std::uint32_t w : L)
            if (state.maker_adjacent(f, w)) ++cnt;
        order.emplace_back(cnt, f);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [cnt, f] : order) {
        Edge e(state.vertex(f), state.vertex(vk));
        if (!state.claimed(e)) return e;
    }
    return std::nullopt;
}

namespace {

// Fresh-branch target vertex via linear scan; the reference path has no
// cursor and re-scans from k = 1 every time.
Edge fresh_move_reference(const GameState& state, Context& ctx) {
    const std::uint64_t m = state.maker_vertex_count();
    const std::int32_t n = ctx.stream.at(m + 1);
    const ClassId cls = class_enum(BigInt(n));
    for (std::uint64_t k = 1;; ++k) {
        Rational w = ctx.iso.class_member(cls, k);
        if (state.fresh(w)) return Edge(state.vertex(1), w);
    }
}

// Largest per-class count of vertices whose effective record prefix of
// length l matches `want`. When this is below l(l+1)+1, F cannot be full for
// any target class, so the occurrence search is skipped entirely (the chosen
// move is the same fresh-branch move either way).
std::size_t max_prefix_family_reference(const GameState& state,
                                        const std::vector<std::uint32_t>& want, std::size_t l,
                                        Context& ctx) {
    std::map<Rational, std::size_t> per_class;
    std::size_t best = 0;
    for (std::uint32_t v = 1; v <= state.maker_vertex_count(); ++v) {
        const Rational& value = state.vertex(v);
        if (!value.in_unit_interval()) continue;
        if (!record_prefix_matches(state, v, want, l)) continue;
        best = std::max(best, ++per_class[ctx.iso.class_of(value).label]);
    }
    return best;
}

} // namespace

MakerDecision maker_move_reference(const GameState& state, Context& ctx,
                                   std::uint64_t occ_budget) {
    if (state.turn() == 0) return MakerDecision(opening_move(state));

    const std::uint32_t vk = state.maker_vertex_count();
    const Rational& val = state.vertex(vk);
    auto fresh = [&](bool blocked, bool occ) {
        MakerDecision d(fresh_move_reference(state, ctx));
        d.fresh_branch = true;
        d.blocked_f_fallback = blocked;
        d.occ_budget_fallback = occ;
        return d;
    };
    if (!val.in_unit_interval()) return fresh(false, false);

    const ConnectionRecord& rec = state.record(vk);
    const std::size_t l = rec.effective_len();
    if (l == 0) return fresh(false, false);
    std::vector<std::uint32_t> want(rec.older.begin(), rec.older.begin() + l);
    const std::size_t need = need_for(l);

    if (max_prefix_family_reference(state, want, l, ctx) < need) return fresh(false, false);

    std::vector<std::uint32_t> L = compute_L(state, vk, ctx);
    auto target = target_class(state, vk, L.size(), ctx, occ_budget);
    if (!target) return fresh(false, true);

    std::vector<std::uint32_t> F = compute_F(state, vk, *target, ctx);
    if (F.size() < need) return fresh(false, false);

    auto e = balanced_min(state, F, L, vk);
    if (!e) return fresh(true, false);
    return MakerDecision(*e);
}

// --- QStrategy fast path ---

QStrategy::Family& QStrategy::family(const std::vector<std::uint32_t>& prefix,
                                     const Rational& label) {
    return families_[FamilyKey{prefix, label}];
}

QStrategy::Family* QStrategy::find_family(const std::vector<std::uint32_t>& prefix,
                                          const Rational& label) {
    auto it = families_.find(FamilyKey{prefix, label});
    return it == families_.end() ? nullptr : &it->second;
}

void QStrategy::sync(const GameState& state) {
    const auto& moves = state.moves();
    auto& nbrs = nbrs_;
    auto& joined = joined_;
    auto& rec_len = rec_len_;
    auto grow_to = [&](std::uint32_t id) {
        if (nbrs.size() < id) {
            nbrs.resize(id);
            joined.resize(id);
            rec_len.resize(id, 0);
        }
    };

    for (std::uint64_t m = synced_moves_; m < moves.size(); ++m) {
        const Move& mv = moves[m];
        if (mv.player != Player::Maker) continue;
        const std::uint32_t ia = state.vertex_index(mv.edge.a);
        const std::uint32_t ib = state.vertex_index(mv.edge.b);
        const std::uint32_t older = std::min(ia, ib);
        const std::uint32_t younger = std::max(ia, ib);
        grow_to(younger);

        const std::uint32_t new_len = ++rec_len[younger - 1];
        if (new_len == 1) {
            const Rational& value = state.vertex(younger);
            class_label_of_[younger] = value.in_unit_interval()
                                           ? std::optional<Rational>(ctx_.iso.class_of(value).label)
                                           : std::nullopt;
            if (older == younger - 1) {
                // Both endpoints entered G_M on this move; the older one has
                // an empty record and a class label of its own.
                const Rational& ov = state.vertex(older);
                class_label_of_[older] = ov.in_unit_interval()
                                             ? std::optional<Rational>(ctx_.iso.class_of(ov).label)
                                             : std::nullopt;
            }
        }

        // Count the new edge in every family either endpoint belongs to.
        for (Family* fam : joined[younger - 1]) ++fam->neighbour_counts[older];
        for (Family* fam : joined[older - 1]) ++fam->neighbour_counts[younger];

        // Entries beyond the frozen length are not part of S_v and found no
        // family; freshness of the final frozen_len is chronologically sound
        // because records only append.
        const ConnectionRecord& rec = state.record(younger);
        const bool within_record = !rec.frozen_len || new_len <= *rec.frozen_len;
        const auto& label = class_label_of_[younger];
        if (within_record && label) {
            std::vector<std::uint32_t> prefix(rec.older.begin(), rec.older.begin() + new_len);
            Family& fam = family(prefix, *label);
            auto pos = std::lower_bound(fam.members.begin(), fam.members.end(), younger);
            fam.members.insert(pos, younger);
            joined[younger - 1].push_back(&fam);
            for (std::uint32_t x : nbrs[younger - 1]) ++fam.neighbour_counts[x];
            ++fam.neighbour_counts[older];
        }

        nbrs[younger - 1].push_back(older);
        nbrs[older - 1].push_back(younger);
    }
    synced_moves_ = moves.size();
}

Edge QStrategy::fresh_move(const GameState& state) {
    const std::uint64_t m = state.maker_vertex_count();
    const std::int32_t n = ctx_.stream.at(m + 1);
    const Rational label = enum_q(BigInt(n));
    // Freshness is monotone, so members below the cursor stay unusable and
    // the cursor never needs to rewind. It stops at the first fresh member
    // rather than past it: a move may be computed without being played.
    std::uint64_t& k = fresh_cursor_.try_emplace(label, 1).first->second;
    for (;;) {
        Rational w = ctx_.iso.class_member(ClassId{label}, k);
        if (state.fresh(w)) return Edge(state.vertex(1), w);
        ++k;
    }
}

MakerDecision QStrategy::decide(const GameState& state) {
    if (state.turn() == 0) return MakerDecision(opening_move(state));
    sync(state);

    const std::uint32_t vk = state.maker_vertex_count();
    const Rational& val = state.vertex(vk);
    auto fresh = [&](bool blocked, bool occ) {
        MakerDecision d(fresh_move(state));
        d.fresh_branch = true;
        d.blocked_f_fallback = blocked;
        d.occ_budget_fallback = occ;
        return d;
    };
    if (!val.in_unit_interval()) return fresh(false, false);

    const ConnectionRecord& rec = state.record(vk);
    const std::size_t l = rec.older.size(); // active vertex is unfrozen
    if (l == 0) return fresh(false, false);
    const std::size_t need = need_for(l);
    std::vector<std::uint32_t> prefix(rec.older.begin(), rec.older.end());
    const Rational& cls = *class_label_of_.at(vk);

    // F cannot be full for any target when no class holds enough
    // prefix-compatible vertices; skip the occurrence search then.
    std::size_t best = 0;
    for (auto it = families_.lower_bound(FamilyKey{prefix, Rational()});
         it != families_.end() && it->first.prefix == prefix; ++it)
        best = std::max(best, it->second.members.size());
    if (best < need) return fresh(false, false);

    Family& Lfam = *find_family(prefix, cls);
    const std::uint64_t l_size = Lfam.members.size();

    Word word(prefix.begin(), prefix.end());
    auto n = ctx_.stream.occurrence_next_bounded(word, l_size + 1, occ_budget_);
    if (!n) return fresh(false, true);
    const Rational target = enum_q(BigInt(*n));

    Family* Ffam = find_family(prefix, target);
    if (!Ffam || Ffam->members.size() < need) return fresh(false, false);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> order;
    for (std::size_t t = 0; t < need; ++t) {
        const std::uint32_t f = Ffam->members[t];
        if (f == vk) continue;
        auto cit = Lfam.neighbour_counts.find(f);
        order.emplace_back(cit == Lfam.neighbour_counts.end() ? 0 : cit->second, f);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [cnt, f] : order) {
        Edge e(state.vertex(f), state.vertex(vk));
        if (!state.claimed(e)) return MakerDecision(e);
    }
    return fresh(true, false);
}

Edge QStrategy::choose(const GameState& state) {
    MakerDecision d = decide(state);
    if (d.fresh_branch) ++fresh_moves_;
    if (d.blocked_f_fallback) ++blocked_f_fallbacks_;
    if (d.occ_budget_fallback) ++occ_budget_fallbacks_;
    return d.edge;
}

} // namespace kq
