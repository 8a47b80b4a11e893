#include "kq/analysis.hpp"

#include "kq/maker_strategy.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace kq;

namespace {

// Maximum length over ordered cliques (u_1, u_2, ...) with u_1 = v_1 whose
// members' records open with exactly the clique prefix; the structural
// shadow of conditions (a)+(b) with no thresholds. Exponential, test-only.
std::size_t brute_force_max_ordered_clique(const GameState& s) {
    std::size_t best = 0;
    std::vector<std::uint32_t> chain;
    auto extend = [&](auto&& self) -> void {
        best = std::max(best, chain.size());
        const std::size_t m = chain.size();
        for (std::uint32_t w = 1; w <= s.maker_vertex_count(); ++w) {
            const ConnectionRecord& rec = s.record(w);
            if (rec.effective_len() < m) continue;
            bool ok = true;
            for (std::size_t t = 0; t < m && ok; ++t) ok = rec.older[t] == chain[t];
            if (!ok) continue;
            chain.push_back(w);
            self(self);
            chain.pop_back();
        }
    };
    if (s.maker_vertex_count() == 0) return 0;
    chain.push_back(1);
    extend(extend);
    return best;
}

void breaker_junk(GameState& s, int& junk) {
    s.apply(Player::Breaker, Edge(Rational(1000 + ++junk), Rational(5000 + junk)));
}

} // namespace

TEST_CASE("verify_trace accepts genuine runs and reports violations") {
    Context ctx;
    QStrategy maker(ctx);
    RandomBreaker breaker(2);
    RunResult r = run_game(maker, breaker, 100, 2, kDefaultOccBudget);
    CHECK(verify_trace(r.trace).ok());

    Trace swapped = r.trace;
    std::swap(swapped.moves[3].player, swapped.moves[4].player);
    Report rep = verify_trace(swapped);
    CHECK(!rep.ok());
    CHECK(rep.text().find("turn 4") != std::string::npos);

    Trace dup = r.trace;
    dup.moves[5].edge = dup.moves[2].edge;
    Report rep2 = verify_trace(dup);
    CHECK(!rep2.ok());
    CHECK(rep2.text().find("turn 6") != std::string::npos);
    CHECK(rep2.text().find("turn 3") != std::string::npos);
}

TEST_CASE("verify_maker_strategy replays cleanly and spots divergence") {
    Context ctx;
    QStrategy maker(ctx);
    RandomBreaker breaker(4);
    RunResult r = run_game(maker, breaker, 200, 4, kDefaultOccBudget);
    {
        Context fresh;
        CHECK(verify_maker_strategy(r.trace, fresh).ok());
    }
    {
        Context fresh;
        Trace tampered = r.trace;
        // Replace the last maker move by a different, legal edge.
        for (std::size_t i = tampered.moves.size(); i-- > 0;) {
            if (tampered.moves[i].player == Player::Maker) {
                tampered.moves[i].edge = Edge(Rational(777), Rational(778));
                break;
            }
        }
        Report rep = verify_maker_strategy(tampered, fresh);
        CHECK(!rep.ok());
        CHECK(rep.text().find("divergence") != std::string::npos);
    }
    {
        Context fresh;
        Trace wrong_header = r.trace;
        wrong_header.header.maker_id = "other";
        CHECK(!verify_maker_strategy(wrong_header, fresh).ok());
    }
}

TEST_CASE("verify_pairing flags a skipped response") {
    Context ctx;
    QStrategy maker(ctx);
    PairingBreaker breaker;
    RunResult r = run_game(maker, breaker, 200, 0, kDefaultOccBudget);
    CHECK(verify_pairing(r.trace).ok());

    // An adversarial trace where Breaker ignores a paired Maker move.
    Trace bad;
    bad.header = r.trace.header;
    bad.moves.push_back(Move{1, Player::Maker, Edge(Rational(0), Rational(3, 2))});
    bad.moves.push_back(Move{2, Player::Breaker, Edge(Rational(50), Rational(51))});
    Report rep = verify_pairing(bad);
    CHECK(!rep.ok());
    CHECK(rep.text().find("turn 2") != std::string::npos);

    Trace wrong_header = r.trace;
    wrong_header.header.breaker_id = "random:1";
    CHECK(!verify_pairing(wrong_header).ok());
}

TEST_CASE("pair disjointness over ten thousand pairs") {
    CHECK(pair_disjointness(10000).ok());
}

TEST_CASE("extract_clique on the opening state yields the one-vertex certificate") {
    Context ctx;
    GameState s;
    s.apply(Player::Maker, opening_move(s));
    CliqueCertificate cert = extract_clique(s, ctx, 8, 1);
    CHECK(cert.achieved_m() == 1);
    CHECK(cert.steps[0].vertex_index == 1);
    CHECK(cert.steps[0].vertex_value == Rational(0));
    CHECK(!cert.steps[0].class_label.has_value());
    CHECK(check_certificate(cert, s, ctx).ok());
}

TEST_CASE("extract_clique recovers a scripted triangle; brute force agrees") {
    Context ctx;
    const ClassId c_mid = class_enum(BigInt(3)); // label -1
    const ClassId c0 = class_enum(BigInt(1));    // label 0
    const ClassId c_hi = class_enum(BigInt(2));  // label 1
    GameState s;
    int junk = 0;
    s.apply(Player::Maker, opening_move(s));
    breaker_junk(s, junk);

    // Three c0 vertices first-connected to v1; A1 becomes u_2.
    std::vector<Rational> A;
    for (int k = 1; k <= 3; ++k) {
        A.push_back(ctx.iso.class_member(c0, k));
        s.apply(Player::Maker, Edge(Rational(0), A.back()));
        breaker_junk(s, junk);
    }
    // Seven vertices of class c_mid whose records read (v1, A1).
    std::vector<Rational> B;
    for (int k = 1; k <= 7; ++k) {
        B.push_back(ctx.iso.class_member(c_mid, k));
        s.apply(Player::Maker, Edge(Rational(0), B.back()));
        breaker_junk(s, junk);
        s.apply(Player::Maker, Edge(A[0], B.back()));
        breaker_junk(s, junk);
    }
    // Three grandchildren with records (v1, A1, B1) spread over the three
    // gap regions: c_mid itself, c0, and above c0.
    for (const ClassId& cls : {c_mid, c0, c_hi}) {
        Rational g = ctx.iso.class_member(cls, 20);
        s.apply(Player::Maker, Edge(Rational(0), g));
        breaker_junk(s, junk);
        s.apply(Player::Maker, Edge(A[0], g));
        breaker_junk(s, junk);
        s.apply(Player::Maker, Edge(B[0], g));
        breaker_junk(s, junk);
    }

    CliqueCertificate cert = extract_clique(s, ctx, 8, 1);
    REQUIRE(cert.achieved_m() == 3);
    CHECK(cert.steps[1].vertex_value == A[0]);
    CHECK(cert.steps[2].vertex_value == B[0]);
    // Condition (a): the extracted vertices form a Maker triangle.
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            CHECK(s.maker_adjacent(cert.steps[i].vertex_index, cert.steps[j].vertex_index));
    CHECK(check_certificate(cert, s, ctx).ok());
    CHECK(brute_force_max_ordered_clique(s) >= 3);

    // Monotone in the threshold direction: a looser threshold cannot lose
    // the triangle on this state.
    CHECK(extract_clique(s, ctx, 8, 1).achieved_m() >= 3);
}

TEST_CASE("certificates round trip through text and survive re-checking") {
    Context ctx;
    QStrategy maker(ctx);
    RandomBreaker breaker(6);
    RunResult r = run_game(maker, breaker, 2000, 6, kDefaultOccBudget);
    GameState s = replay(r.trace);
    CliqueCertificate cert = extract_clique(s, ctx, 8, 3);
    REQUIRE(cert.achieved_m() >= 1);
    CHECK(check_certificate(cert, s, ctx).ok());

    CliqueCertificate parsed = CliqueCertificate::parse(cert.serialize());
    CHECK(parsed.serialize() == cert.serialize());
    CHECK(check_certificate(parsed, s, ctx).ok());

    // Appended to a trace file, both parts still parse.
    const std::string combined = r.trace.serialize() + cert.serialize();
    CHECK(Trace::parse(combined).moves.size() == r.trace.moves.size());
    CHECK(CliqueCertificate::parse(combined).serialize() == cert.serialize());
}

TEST_CASE("single-field certificate corruption is always rejected") {
    Context ctx;
    QStrategy maker(ctx);
    RandomBreaker breaker(8);
    RunResult r = run_game(maker, breaker, 2000, 8, kDefaultOccBudget);
    GameState s = replay(r.trace);
    CliqueCertificate cert = extract_clique(s, ctx, 8, 3);
    REQUIRE(cert.achieved_m() >= 2);
    REQUIRE(check_certificate(cert, s, ctx).ok());

    std::size_t mutations = 0;
    auto expect_reject = [&](CliqueCertificate mutated) {
        ++mutations;
        CHECK(!check_certificate(mutated, s, ctx).ok());
    };
    for (std::size_t step = 0; step < cert.achieved_m(); ++step) {
        {
            CliqueCertificate m = cert;
            m.steps[step].vertex_index += 1;
            expect_reject(std::move(m));
        }
        {
            CliqueCertificate m = cert;
            m.steps[step].vertex_value = m.steps[step].vertex_value + Rational(1, 7);
            expect_reject(std::move(m));
        }
        {
            CliqueCertificate m = cert;
            m.steps[step].class_label =
                m.steps[step].class_label ? *m.steps[step].class_label + Rational(1)
                                          : Rational(5);
            expect_reject(std::move(m));
        }
        {
            CliqueCertificate m = cert;
            m.steps[step].gap_index += 1;
            if (step > 0) expect_reject(std::move(m)); // gap unused on step 1
        }
        {
            CliqueCertificate m = cert;
            m.steps[step].reservoir_size += 1;
            expect_reject(std::move(m));
        }
        if (!cert.steps[step].class_counts.empty()) {
            CliqueCertificate m = cert;
            m.steps[step].class_counts[0].second += 1;
            expect_reject(std::move(m));
        }
    }
    CHECK(mutations >= 10);
}

TEST_CASE("index colouring rule instances") {
    CHECK(index_colouring(1, 2) == Colour::Blue);
    CHECK(index_colouring(1, 3) == Colour::Red);
    CHECK_THROWS_AS(index_colouring(2, 2), std::invalid_argument);
    for (std::uint64_t t = 0; t < 100; ++t) {
        const std::uint64_t i = 1 + (t * 37) % 200, j = 1 + (t * 91 + 13) % 200;
        if (i == j) continue;
        CHECK(index_colouring(i, j) == index_colouring(j, i));
    }
}

TEST_CASE("mono clique prefix equals LIS / LDS and brute force") {
    CHECK(max_mono_clique_prefix(1, Colour::Blue) == 1);
    CHECK(max_mono_clique_prefix(1, Colour::Red) == 1);
    CHECK(max_mono_clique_prefix(3, Colour::Blue) == 2); // values 0, 1, -1
    CHECK(max_mono_clique_prefix(3, Colour::Red) == 2);  // 0, -1

    // Longest-increasing / strictly-decreasing subsequence oracle.
    auto lis = [](std::size_t n, bool increasing) {
        std::vector<Rational> v;
        for (std::size_t i = 1; i <= n; ++i) v.push_back(enum_q(BigInt(i)));
        std::vector<std::size_t> dp(n, 1);
        std::size_t best = 1;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < j; ++i) {
                const bool ok = increasing ? v[i] < v[j] : v[i] > v[j];
                if (ok) dp[j] = std::max(dp[j], dp[i] + 1);
                best = std::max(best, dp[j]);
            }
        return best;
    };
    for (std::size_t n = 1; n <= 15; ++n) {
        CHECK(max_mono_clique_prefix(n, Colour::Blue) == lis(n, true));
        CHECK(max_mono_clique_prefix(n, Colour::Red) == lis(n, false));
    }

    // Exhaustive subset oracle for n <= 12.
    for (std::size_t n = 1; n <= 12; ++n) {
        std::size_t best_blue = 0, best_red = 0;
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            bool blue_ok = true, red_ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                if (!(mask & (1u << i))) continue;
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (!(mask & (1u << j))) continue;
                    if (index_colouring(i + 1, j + 1) == Colour::Blue) red_ok = false;
                    else blue_ok = false;
                }
            }
            const std::size_t size = __builtin_popcount(mask);
            if (blue_ok) best_blue = std::max(best_blue, size);
            if (red_ok) best_red = std::max(best_red, size);
        }
        REQUIRE(max_mono_clique_prefix(n, Colour::Blue) == best_blue);
        REQUIRE(max_mono_clique_prefix(n, Colour::Red) == best_red);
    }
}

TEST_CASE("mono_dense_subset: three built-in oracles") {
    Context ctx;

    SUBCASE("all blue lands in case 1 with one class") {
        ColouringOracle oracle = all_blue_oracle();
        DenseSubsetResult res = mono_dense_subset(oracle, 5, 64, ctx);
        REQUIRE(res.tag == DenseSubsetResult::Case::BlueClass);
        REQUIRE(res.elements.size() == 5);
        std::set<Rational> labels(res.class_labels.begin(), res.class_labels.end());
        CHECK(labels.size() == 1);
        for (const Rational& e : res.elements)
            CHECK(ctx.iso.class_of(e).label == *labels.begin());
    }

    SUBCASE("all red lands in case 2 with distinct classes") {
        ColouringOracle oracle = all_red_oracle();
        DenseSubsetResult res = mono_dense_subset(oracle, 5, 64, ctx);
        REQUIRE(res.tag == DenseSubsetResult::Case::RedSelection);
        REQUIRE(res.elements.size() == 5);
        std::set<Rational> labels(res.class_labels.begin(), res.class_labels.end());
        CHECK(labels.size() == 5);
    }

    SUBCASE("denominator parity is red-selectable and monochromatic") {
        ColouringOracle oracle = denominator_parity_oracle();
        DenseSubsetResult res = mono_dense_subset(oracle, 4, 64, ctx);
        REQUIRE(res.tag == DenseSubsetResult::Case::RedSelection);
        REQUIRE(res.elements.size() == 4);
        std::set<Rational> labels(res.class_labels.begin(), res.class_labels.end());
        CHECK(labels.size() == 4);
        for (std::size_t i = 0; i < res.elements.size(); ++i) {
            CHECK(res.elements[i].denominator() % 2 != 0); // monochromatic red
            CHECK(ctx.iso.class_of(res.elements[i]).label == res.class_labels[i]);
        }
    }

    SUBCASE("count 8: chosen labels realize betweenness through class_between") {
        ColouringOracle oracle = all_red_oracle();
        DenseSubsetResult res = mono_dense_subset(oracle, 8, 64, ctx);
        REQUIRE(res.tag == DenseSubsetResult::Case::RedSelection);
        REQUIRE(res.class_labels.size() == 8);
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) {
                if (!(res.class_labels[i] < res.class_labels[j])) continue;
                ClassId lo{res.class_labels[i]}, hi{res.class_labels[j]};
                ClassId mid = class_between(lo, hi);
                CHECK(class_compare(lo, mid) < 0);
                CHECK(class_compare(mid, hi) < 0);
            }
    }

    SUBCASE("exhausted oracle budget is inconclusive") {
        ColouringOracle oracle = denominator_parity_oracle();
        oracle.budget = 2;
        DenseSubsetResult res = mono_dense_subset(oracle, 5, 64, ctx);
        CHECK(res.tag == DenseSubsetResult::Case::Inconclusive);
        CHECK(res.elements.empty());
    }

    SUBCASE("count above the per-class budget is rejected") {
        ColouringOracle oracle = all_blue_oracle();
        CHECK_THROWS_AS(mono_dense_subset(oracle, 10, 5, ctx), std::invalid_argument);
    }
}
