#include "kq/analysis.hpp"

#include "kq/enumeration.hpp"
#include "kq/maker_strategy.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

namespace kq {

std::string Report::text() const {
    std::ostringstream os;
    if (ok())
        os << "OK\n";
    else
        os << "FAIL " << violations.size() << " violations\n";
    for (const auto& v : violations) os << v << "\n";
    return os.str();
}

Report verify_trace(const Trace& trace) {
    Report rep;
    std::unordered_map<Edge, std::uint64_t, EdgeHash> first_claim;
    std::uint64_t expected = 1;
    for (const Move& m : trace.moves) {
        if (m.turn != expected)
            rep.add("turn " + std::to_string(m.turn) + ": expected turn number " +
                    std::to_string(expected));
        const Player should = (m.turn % 2 == 1) ? Player::Maker : Player::Breaker;
        if (m.player != should)
            rep.add("turn " + std::to_string(m.turn) + ": out-of-turn move by " +
                    player_tag(m.player));
        auto [it, inserted] = first_claim.emplace(m.edge, m.turn);
        if (!inserted)
            rep.add("turn " + std::to_string(m.turn) + ": edge " + m.edge.str() +
                    " already claimed at turn " + std::to_string(it->second));
        ++expected;
    }
    return rep;
}

Report verify_maker_strategy(const Trace& trace, Context& ctx) {
    Report rep;
    if (trace.header.maker_id != "q-strategy") {
        rep.add("header: maker is '" + trace.header.maker_id + "', expected 'q-strategy'");
        return rep;
    }
    const std::uint64_t budget =
        trace.header.occ_budget ? trace.header.occ_budget : kDefaultOccBudget;
    QStrategy replica(ctx, budget);
    GameState state;
    for (const Move& m : trace.moves) {
        try {
            if (m.player == Player::Maker) {
                Edge expected = replica.choose(state);
                if (expected != m.edge) {
                    rep.add("turn " + std::to_string(m.turn) + ": divergence, strategy plays " +
                            expected.str() + " but trace has " + m.edge.str());
                    return rep;
                }
            }
            state.apply(m.player, m.edge);
        } catch (const std::exception& ex) {
            rep.add("turn " + std::to_string(m.turn) + ": " + ex.what());
            return rep;
        }
    }

    // Per-vertex laws. Every non-initial vertex connects to v_1 first; every
    // vertex from v_3 on lands in the class dictated by the steering
    // sequence at its own addition index.
    for (std::uint32_t v = 2; v <= state.maker_vertex_count(); ++v) {
        const ConnectionRecord& rec = state.record(v);
        if (rec.older.empty() || rec.older[0] != 1)
            rep.add("vertex " + std::to_string(v) + ": first connection is not v_1");
        if (v >= 3) {
            const Rational& value = state.vertex(v);
            const Rational want = enum_q(BigInt(ctx.stream.at(v)));
            if (!value.in_unit_interval() || ctx.iso.class_of(value).label != want)
                rep.add("vertex " + std::to_string(v) + ": not in class P_n(" +
                        std::to_string(ctx.stream.at(v)) + ")");
        }
    }

    // Fallback counters recorded in the header must match the replay.
    std::map<std::string, std::uint64_t> recorded(trace.header.counters.begin(),
                                                  trace.header.counters.end());
    for (const auto& [key, value] : replica.counters()) {
        auto it = recorded.find("maker." + key);
        if (it != recorded.end() && it->second != value)
            rep.add("header counter maker." + key + "=" + std::to_string(it->second) +
                    " but replay counts " + std::to_string(value));
    }
    return rep;
}

Report verify_pairing(const Trace& trace) {
    Report rep;
    if (trace.header.breaker_id != "pairing") {
        rep.add("header: breaker is '" + trace.header.breaker_id + "', expected 'pairing'");
        return rep;
    }
    GameState state;
    std::optional<std::pair<Edge, std::uint64_t>> pending; // partner, maker turn
    for (const Move& m : trace.moves) {
        if (m.player == Player::Maker) {
            if (auto partner = pair_of(m.edge)) {
                auto owner = state.owner(*partner);
                if (owner == Player::Maker)
                    rep.add("turn " + std::to_string(m.turn) + ": Maker completes pair " +
                            m.edge.str() + " / " + partner->str());
                else if (!owner)
                    pending = {{*partner, m.turn}};
            }
        } else {
            if (pending) {
                if (m.edge != pending->first)
                    rep.add("turn " + std::to_string(m.turn) + ": response to turn " +
                            std::to_string(pending->second) + " should claim " +
                            pending->first.str() + " but claims " + m.edge.str());
                pending.reset();
            }
        }
        try {
            state.apply(m.player, m.edge);
        } catch (const std::exception& ex) {
            rep.add(std::string("replay failed: ") + ex.what());
            return rep;
        }
    }

    // Density witnesses: per interval I_j with both subset-pair members
    // Maker-incident, Maker vertices of I_j adjacent to both are bounded by
    // the number of I_j members enum-earlier than the later of p_j, q_j.
    std::map<std::uint64_t, std::vector<std::uint32_t>> interval_members;
    for (std::uint32_t v = 1; v <= state.maker_vertex_count(); ++v) {
        const Rational& value = state.vertex(v);
        if (value.is_integer() || !(value > Rational(1))) continue;
        interval_members[static_cast<std::uint64_t>(value.floor())].push_back(v);
    }
    for (const auto& [j, members] : interval_members) {
        auto [p, q] = subset_pair(j);
        const std::uint32_t ip = state.vertex_index(p);
        const std::uint32_t iq = state.vertex_index(q);
        if (ip == 0 || iq == 0) continue;
        std::uint64_t common = 0;
        for (std::uint32_t s : members)
            if (state.maker_adjacent(s, ip) && state.maker_adjacent(s, iq)) ++common;
        std::uint64_t b = 2;
        while (b * (b - 1) / 2 < j) ++b;
        std::uint64_t bound = 0;
        const Rational lo(static_cast<long long>(j)), hi(static_cast<long long>(j + 1));
        for (std::uint64_t t = 1; t < b; ++t) {
            const Rational e = enum_q(BigInt(t));
            if (lo < e && e < hi) ++bound;
        }
        if (common > bound)
            rep.add("interval I_" + std::to_string(j) + ": " + std::to_string(common) +
                    " common Maker neighbours exceed enum-earlier bound " +
                    std::to_string(bound));
    }
    return rep;
}

Report pair_disjointness(std::uint64_t bound) {
    Report rep;
    auto pairs = generate_pairs(bound);
    std::unordered_map<Edge, std::uint64_t, EdgeHash> seen;
    for (std::uint64_t idx = 0; idx < pairs.size(); ++idx) {
        for (const Edge* e : {&pairs[idx].first, &pairs[idx].second}) {
            auto [it, inserted] = seen.emplace(*e, idx);
            if (!inserted)
                rep.add("pair " + std::to_string(idx + 1) + " collides with pair " +
                        std::to_string(it->second + 1) + " on edge " + e->str());
        }
    }
    return rep;
}

// --- clique extraction ---

namespace {

std::optional<Rational> vertex_class_label(const GameState& state, std::uint32_t v,
                                           Context& ctx) {
    const Rational& value = state.vertex(v);
    if (!value.in_unit_interval()) return std::nullopt;
    return ctx.iso.class_of(value).label;
}

// Labels of classes holding >= threshold of the given vertices, with their
// member lists, ordered by label.
std::map<Rational, std::vector<std::uint32_t>> group_by_class(
    const GameState& state, const std::vector<std::uint32_t>& vertices, Context& ctx) {
    std::map<Rational, std::vector<std::uint32_t>> groups;
    for (std::uint32_t v : vertices) {
        auto label = vertex_class_label(state, v, ctx);
        if (label) groups[*label].push_back(v);
    }
    return groups;
}

// True when `label` lies strictly above `anchor` with no clique class
// strictly between. A disengaged anchor is the below-everything sentinel of
// u_1 = v_1 = 0.
bool in_gap(const std::optional<Rational>& anchor, const Rational& label,
            const std::vector<std::optional<Rational>>& clique_labels) {
    if (anchor && !(*anchor < label)) return false;
    for (const auto& r : clique_labels) {
        if (!r) continue;
        if (anchor && !(*anchor < *r)) continue;
        if (*r < label) return false; // r strictly between anchor and label
    }
    return true;
}

std::vector<std::pair<Rational, std::uint64_t>> threshold_counts(
    const std::map<Rational, std::vector<std::uint32_t>>& groups, std::uint64_t threshold) {
    std::vector<std::pair<Rational, std::uint64_t>> out;
    for (const auto& [label, members] : groups)
        if (members.size() >= threshold) out.emplace_back(label, members.size());
    return out;
}

} // namespace

CliqueCertificate extract_clique(const GameState& state, Context& ctx, std::uint64_t m_max,
                                 std::uint64_t threshold) {
    CliqueCertificate cert;
    cert.threshold = threshold;
    cert.m_max = m_max;
    if (state.maker_vertex_count() == 0 || m_max == 0) return cert;

    std::vector<std::uint32_t> clique{1};
    std::vector<std::optional<Rational>> clique_labels{vertex_class_label(state, 1, ctx)};

    // W_1: vertices whose first recorded connection is u_1 (everything but
    // v_1 under the Q-game strategy).
    std::vector<std::uint32_t> reservoir;
    for (std::uint32_t v = 2; v <= state.maker_vertex_count(); ++v) {
        const ConnectionRecord& rec = state.record(v);
        if (rec.effective_len() >= 1 && rec.older[0] == 1) reservoir.push_back(v);
    }

    auto groups = group_by_class(state, reservoir, ctx);
    cert.steps.push_back(CliqueStep{1, state.vertex(1), clique_labels[0], 0, reservoir.size(),
                                    threshold_counts(groups, threshold)});

    while (cert.steps.size() < m_max) {
        const std::size_t k = cert.steps.size();
        const std::int64_t a = gap_at(k);
        const std::optional<Rational>& anchor = clique_labels[a - 1];

        // Target class: least enum index among classes in the a_k-gap with a
        // threshold-sized reservoir share and no clique vertex. Scanning the
        // gap sequence values 1,1,2,1,2,3,... visits indices in ascending
        // first-appearance order, so this is the sequence's own choice.
        std::optional<Rational> target;
        std::optional<BigInt> target_idx;
        for (const auto& [label, members] : groups) {
            if (members.size() < threshold) continue;
            if (!in_gap(anchor, label, clique_labels)) continue;
            bool holds_clique_vertex = false;
            for (const auto& r : clique_labels)
                if (r && *r == label) holds_clique_vertex = true;
            if (holds_clique_vertex) continue;
            BigInt idx = enum_q_index(label);
            if (!target_idx || idx < *target_idx) {
                target_idx = idx;
                target = label;
            }
        }
        if (!target) break;

        // F: the first k(k+1)+1 reservoir members of the target class.
        const std::vector<std::uint32_t>& in_class = groups.at(*target);
        const std::size_t need = k * (k + 1) + 1;
        if (in_class.size() < need) break;
        std::vector<std::uint32_t> F(in_class.begin(), in_class.begin() + need);

        // Admissible candidate: every gap region above a clique class (and
        // above the target itself) keeps a threshold-sized class among the
        // vertices that connected to the candidate next.
        auto labels_with_target = clique_labels;
        labels_with_target.emplace_back(*target);
        std::optional<std::uint32_t> chosen;
        std::vector<std::uint32_t> chosen_reservoir;
        std::map<Rational, std::vector<std::uint32_t>> chosen_groups;
        for (std::uint32_t f : F) {
            std::vector<std::uint32_t> next;
            for (std::uint32_t w : reservoir) {
                const ConnectionRecord& rec = state.record(w);
                if (rec.effective_len() >= k + 1 && rec.older[k] == f) next.push_back(w);
            }
            auto next_groups = group_by_class(state, next, ctx);
            bool admissible = true;
            for (const auto& region : labels_with_target) {
                bool found = false;
                for (const auto& [label, members] : next_groups) {
                    if (members.size() < threshold) continue;
                    if (in_gap(region, label, labels_with_target)) {
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    admissible = false;
                    break;
                }
            }
            if (admissible) {
                chosen = f;
                chosen_reservoir = std::move(next);
                chosen_groups = std::move(next_groups);
                break;
            }
        }
        if (!chosen) break;

        clique.push_back(*chosen);
        clique_labels.emplace_back(*target);
        reservoir = std::move(chosen_reservoir);
        groups = std::move(chosen_groups);
        cert.steps.push_back(CliqueStep{*chosen, state.vertex(*chosen), *target, a,
                                        reservoir.size(),
                                        threshold_counts(groups, threshold)});
    }
    return cert;
}

Report check_certificate(const CliqueCertificate& cert, const GameState& state, Context& ctx) {
    Report rep;
    if (cert.steps.empty()) {
        if (state.maker_vertex_count() > 0) rep.add("certificate empty for nonempty state");
        return rep;
    }

    std::vector<std::optional<Rational>> clique_labels;
    std::vector<std::uint32_t> clique;
    for (std::size_t m = 1; m <= cert.steps.size(); ++m) {
        const CliqueStep& step = cert.steps[m - 1];
        const std::string where = "step " + std::to_string(m);
        if (step.vertex_index == 0 || step.vertex_index > state.maker_vertex_count()) {
            rep.add(where + ": vertex index out of range");
            return rep;
        }
        if (state.vertex(step.vertex_index) != step.vertex_value)
            rep.add(where + ": vertex value does not match state");
        auto label = vertex_class_label(state, step.vertex_index, ctx);
        if (label != step.class_label) rep.add(where + ": class label mismatch");

        if (m == 1) {
            if (step.vertex_index != 1) rep.add(where + ": recursion must start at v_1");
        } else {
            // (a) complete graph inside G_M
            for (std::uint32_t u : clique)
                if (!state.maker_adjacent(u, step.vertex_index))
                    rep.add(where + ": missing Maker edge to vertex " + std::to_string(u));
            // (d) gap attestation
            const std::int64_t a = gap_at(m - 1);
            if (a != step.gap_index)
                rep.add(where + ": gap index " + std::to_string(step.gap_index) +
                        " but gap sequence dictates " + std::to_string(a));
            else if (!step.class_label ||
                     !in_gap(clique_labels[a - 1], *step.class_label, clique_labels))
                rep.add(where + ": class is not in the dictated gap");
        }

        // (b) reservoir recomputation from the records
        std::vector<std::uint32_t> reservoir;
        for (std::uint32_t v = 1; v <= state.maker_vertex_count(); ++v) {
            const ConnectionRecord& rec = state.record(v);
            if (rec.effective_len() < m) continue;
            bool match = true;
            for (std::size_t t = 0; t < m; ++t) {
                const std::uint32_t want =
                    (t < clique.size()) ? clique[t] : step.vertex_index;
                if (rec.older[t] != want) {
                    match = false;
                    break;
                }
            }
            if (match) reservoir.push_back(v);
        }
        if (reservoir.size() != step.reservoir_size)
            rep.add(where + ": reservoir size " + std::to_string(step.reservoir_size) +
                    " but recomputation finds " + std::to_string(reservoir.size()));
        auto groups = group_by_class(state, reservoir, ctx);
        auto counts = threshold_counts(groups, cert.threshold);
        if (counts != step.class_counts)
            rep.add(where + ": per-class reservoir counts do not match recomputation");

        clique.push_back(step.vertex_index);
        clique_labels.push_back(step.class_label);
    }
    return rep;
}

std::string CliqueCertificate::serialize() const {
    std::ostringstream os;
    os << "certificate v1\n";
    os << "threshold=" << threshold << " m-max=" << m_max << " steps=" << steps.size() << "\n";
    for (std::size_t m = 1; m <= steps.size(); ++m) {
        const CliqueStep& s = steps[m - 1];
        os << "step m=" << m << " u-index=" << s.vertex_index << " u=" << s.vertex_value.str()
           << " class=" << (s.class_label ? s.class_label->str() : "-")
           << " gap=" << s.gap_index << " w-size=" << s.reservoir_size << "\n";
        os << "counts";
        for (const auto& [label, count] : s.class_counts) os << " " << label.str() << ":" << count;
        os << "\n";
    }
    return os.str();
}

CliqueCertificate CliqueCertificate::parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    // Skip anything before the certificate marker (e.g. a trace).
    bool found = false;
    while (std::getline(is, line)) {
        if (line == "certificate v1") {
            found = true;
            break;
        }
    }
    if (!found) throw std::invalid_argument("certificate: marker line not found");
    CliqueCertificate cert;
    if (!std::getline(is, line)) throw std::invalid_argument("certificate: truncated");
    std::size_t nsteps = 0;
    {
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("certificate: malformed token " + tok);
            const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
            if (key == "threshold") cert.threshold = std::stoull(value);
            else if (key == "m-max") cert.m_max = std::stoull(value);
            else if (key == "steps") nsteps = std::stoull(value);
            else throw std::invalid_argument("certificate: unknown key " + key);
        }
    }
    for (std::size_t m = 1; m <= nsteps; ++m) {
        if (!std::getline(is, line)) throw std::invalid_argument("certificate: truncated step");
        CliqueStep step;
        {
            std::istringstream ls(line);
            std::string tok;
            ls >> tok;
            if (tok != "step") throw std::invalid_argument("certificate: expected step line");
            while (ls >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("certificate: malformed token " + tok);
                const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
                if (key == "m") {
                    if (std::stoull(value) != m)
                        throw std::invalid_argument("certificate: step numbering broken");
                } else if (key == "u-index") step.vertex_index = std::stoul(value);
                else if (key == "u") step.vertex_value = Rational::parse(value);
                else if (key == "class")
                    step.class_label = (value == "-") ? std::nullopt
                                                      : std::optional<Rational>(Rational::parse(value));
                else if (key == "gap") step.gap_index = std::stoll(value);
                else if (key == "w-size") step.reservoir_size = std::stoull(value);
                else throw std::invalid_argument("certificate: unknown step key " + key);
            }
        }
        if (!std::getline(is, line) || line.rfind("counts", 0) != 0)
            throw std::invalid_argument("certificate: missing counts line");
        {
            std::istringstream ls(line.substr(6));
            std::string tok;
            while (ls >> tok) {
                auto colon = tok.rfind(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("certificate: malformed count " + tok);
                step.class_counts.emplace_back(Rational::parse(tok.substr(0, colon)),
                                               std::stoull(tok.substr(colon + 1)));
            }
        }
        cert.steps.push_back(std::move(step));
    }
    return cert;
}

// --- Ramsey tools ---

Colour index_colouring(std::uint64_t i, std::uint64_t j) {
    if (i == j) throw std::invalid_argument("index_colouring: loop edge");
    const Rational ei = enum_q(BigInt(i)), ej = enum_q(BigInt(j));
    const bool blue = (i < j) == (ei < ej);
    return blue ? Colour::Blue : Colour::Red;
}

std::size_t max_mono_clique_prefix(std::size_t n, Colour colour) {
    if (n == 0) throw std::invalid_argument("max_mono_clique_prefix: n must be >= 1");
    std::vector<Rational> values;
    values.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) values.push_back(enum_q(BigInt(i)));
    // Both colour classes are transitive on index-ordered triples, so
    // maximum cliques are maximum chains.
    std::vector<std::size_t> dp(n, 1);
    std::size_t best = 1;
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const bool blue = values[i] < values[j];
            if ((colour == Colour::Blue) == blue) dp[j] = std::max(dp[j], dp[i] + 1);
        }
        best = std::max(best, dp[j]);
    }
    return best;
}

ColouringOracle all_blue_oracle() {
    return ColouringOracle{[](const Rational&) { return Colour::Blue; }};
}

ColouringOracle all_red_oracle() {
    return ColouringOracle{[](const Rational&) { return Colour::Red; }};
}

ColouringOracle denominator_parity_oracle() {
    return ColouringOracle{[](const Rational& r) {
        return (r.denominator() % 2 != 0) ? Colour::Red : Colour::Blue;
    }};
}

DenseSubsetResult mono_dense_subset(ColouringOracle& oracle, std::size_t count,
                                    std::uint64_t per_class_budget, Context& ctx) {
    if (count < 1) throw std::invalid_argument("mono_dense_subset: count must be >= 1");
    if (count > per_class_budget)
        throw std::invalid_argument("mono_dense_subset: count exceeds per-class budget");

    // Labels realize a finite dense pattern: starting from 0 and 1, each new
    // label is the least-enumeration-index class strictly between an earlier
    // pair, so every later label witnesses betweenness of earlier ones. The
    // least-index choice keeps class_member affordable (deep labels cost
    // cubically in their enumeration index).
    std::vector<ClassId> classes{ClassId{Rational(0)}, ClassId{Rational(1)}};
    std::vector<std::pair<ClassId, ClassId>> splits{{classes[0], classes[1]}};
    for (std::size_t next = 0; classes.size() < count; ++next) {
        auto [lo, hi] = splits[next];
        ClassId mid{enum_q(least_enum_q_index_in(lo.label, hi.label))};
        classes.push_back(mid);
        splits.push_back({lo, mid});
        splits.push_back({mid, hi});
    }
    classes.resize(count);

    DenseSubsetResult result;
    try {
        for (const ClassId& cls : classes) {
            bool red_found = false;
            for (std::uint64_t k = 1; k <= per_class_budget; ++k) {
                Rational member = ctx.iso.class_member(cls, k);
                if (oracle.query(member) == Colour::Red) {
                    result.elements.push_back(std::move(member));
                    result.class_labels.push_back(cls.label);
                    red_found = true;
                    break;
                }
            }
            if (!red_found) {
                // Budget-certified blue class: its first `count` members were
                // all queried blue above.
                result.tag = DenseSubsetResult::Case::BlueClass;
                result.elements.clear();
                result.class_labels.assign(count, cls.label);
                for (std::uint64_t k = 1; k <= count; ++k)
                    result.elements.push_back(ctx.iso.class_member(cls, k));
                result.note = "class " + cls.label.str() + " has no red element within budget " +
                              std::to_string(per_class_budget);
                return result;
            }
        }
    } catch (const ColouringOracle::BudgetExhausted&) {
        result.tag = DenseSubsetResult::Case::Inconclusive;
        result.elements.clear();
        result.class_labels.clear();
        result.note = "oracle query budget exhausted with mixed evidence";
        return result;
    }
    result.tag = DenseSubsetResult::Case::RedSelection;
    return result;
}

} // namespace kq
