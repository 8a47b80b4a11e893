#include "kq/game.hpp"

#include <doctest.h>

using namespace kq;

namespace {

Edge edge(long long a, long long b) { return Edge(Rational(a), Rational(b)); }
Edge edge(const Rational& a, const Rational& b) { return Edge(a, b); }

} // namespace

TEST_CASE("edge canonical orientation") {
    Edge e(Rational(3, 2), Rational(1, 2));
    CHECK(e.a == Rational(1, 2));
    CHECK(e.b == Rational(3, 2));
    CHECK_THROWS_AS(Edge(Rational(1), Rational(1)), std::invalid_argument);
}

TEST_CASE("opening move bookkeeping") {
    GameState s;
    s.apply(Player::Maker, edge(0, 1));
    CHECK(s.maker_vertex_count() == 2);
    CHECK(s.vertex(1) == Rational(0));
    CHECK(s.vertex(2) == Rational(1));
    CHECK(s.record(2).older == std::vector<std::uint32_t>{1});
    CHECK(s.turn() == 1);
    CHECK(s.to_move() == Player::Breaker);
}

TEST_CASE("already claimed and out-of-turn moves abort") {
    GameState s;
    s.apply(Player::Maker, edge(0, 1));
    CHECK_THROWS_AS(s.apply(Player::Breaker, edge(0, 1)), GameError);
    CHECK_THROWS_AS(s.apply(Player::Maker, edge(2, 3)), GameError);
    s.apply(Player::Breaker, edge(2, 3));
    CHECK(s.turn() == 2);
}

TEST_CASE("fresh vertex check counts both players") {
    GameState s;
    CHECK(s.fresh(Rational(7, 3)));
    s.apply(Player::Maker, edge(0, 1));
    CHECK(!s.fresh(Rational(0)));
    CHECK(!s.fresh(Rational(1)));
    s.apply(Player::Breaker, edge(2, 3));
    CHECK(!s.fresh(Rational(3)));
    CHECK(s.fresh(Rational(5)));
}

TEST_CASE("records and freezing across a scripted game") {
    GameState s;
    s.apply(Player::Maker, edge(0, 1));       // v1=0 v2=1
    s.apply(Player::Breaker, edge(50, 51));
    s.apply(Player::Maker, edge(Rational(0), Rational(1, 2))); // fresh v3=1/2; freezes v1,v2
    s.apply(Player::Breaker, edge(50, 52));
    s.apply(Player::Maker, edge(Rational(1), Rational(1, 2))); // both old: record of v3 grows
    s.apply(Player::Breaker, edge(50, 53));
    s.apply(Player::Maker, edge(Rational(0), Rational(1, 3))); // fresh v4=1/3; freezes v3

    CHECK(s.maker_vertex_count() == 4);
    CHECK(s.vertex(3) == Rational(1, 2));
    CHECK(s.record(2).frozen_len == 1);
    CHECK(s.record(3).older == std::vector<std::uint32_t>{1, 2});
    CHECK(s.record(3).frozen_len == 2);
    CHECK(!s.record(4).frozen_len.has_value());
    CHECK(s.record(4).older == std::vector<std::uint32_t>{1});
    CHECK(s.maker_adjacent(1, 3));
    CHECK(s.maker_adjacent(2, 3));
    CHECK(!s.maker_adjacent(1, 2) == false);

    // Vertex list unchanged by an old-old move; record of the younger grew.
    GameState t;
    t.apply(Player::Maker, edge(0, 1));
    t.apply(Player::Breaker, edge(50, 51));
    t.apply(Player::Maker, edge(Rational(0), Rational(1, 2)));
    t.apply(Player::Breaker, edge(50, 52));
    const auto before = t.vertex_list();
    t.apply(Player::Maker, edge(Rational(1), Rational(1, 2)));
    CHECK(t.vertex_list() == before);
}

TEST_CASE("breaker-touched vertex entering G_M does not freeze") {
    GameState s;
    s.apply(Player::Maker, edge(0, 1));
    s.apply(Player::Breaker, edge(7, 8));
    // 7 is Breaker-touched, so it is not fresh; connecting it to 0 must not
    // freeze v_2's record.
    s.apply(Player::Maker, edge(0, 7));
    CHECK(s.maker_vertex_count() == 3);
    CHECK(s.vertex(3) == Rational(7));
    CHECK(!s.record(2).frozen_len.has_value());
}

TEST_CASE("fresh endpoint appended last when both endpoints are new") {
    GameState s;
    s.apply(Player::Maker, edge(0, 1));
    s.apply(Player::Breaker, edge(9, 10));
    // 9 is touched (not fresh), 4 is fresh; Maker claims {4, 9}: 9 first.
    s.apply(Player::Maker, edge(4, 9));
    CHECK(s.vertex(3) == Rational(9));
    CHECK(s.vertex(4) == Rational(4));
    // The younger endpoint (4) records the older (9).
    CHECK(s.record(4).older == std::vector<std::uint32_t>{3});
}

TEST_CASE("trace serialization round trip and replay equality") {
    GameState s;
    Trace trace;
    trace.header.maker_id = "scripted";
    trace.header.breaker_id = "scripted";
    trace.header.turns = 4;
    trace.header.seed = 0;
    trace.header.occ_budget = 0;
    trace.header.digest = config_digest("scripted", "scripted", 4, 0, 0);
    trace.header.counters = {{"maker.fresh_moves", 2}};
    auto play = [&](Player p, Edge e) {
        s.apply(p, e);
        trace.moves.push_back(Move{s.turn(), p, e});
    };
    play(Player::Maker, edge(0, 1));
    play(Player::Breaker, edge(Rational(1, 2), Rational(5)));
    play(Player::Maker, edge(Rational(0), Rational(1, 3)));
    play(Player::Breaker, edge(Rational(-1), Rational(5)));

    const std::string text = trace.serialize();
    Trace parsed = Trace::parse(text);
    CHECK(parsed.header.maker_id == "scripted");
    CHECK(parsed.header.counters == trace.header.counters);
    CHECK(parsed.serialize() == text);

    GameState replayed = replay(parsed);
    CHECK(replayed.turn() == s.turn());
    CHECK(replayed.vertex_list() == s.vertex_list());
    for (std::uint32_t v = 1; v <= s.maker_vertex_count(); ++v) {
        CHECK(replayed.record(v).older == s.record(v).older);
        CHECK(replayed.record(v).frozen_len == s.record(v).frozen_len);
    }

    // Trailing certificate sections are ignored.
    Trace with_tail = Trace::parse(text + "certificate v1\nthreshold=1 m-max=1 steps=0\n");
    CHECK(with_tail.moves.size() == 4);
}

TEST_CASE("tampered traces fail to replay") {
    const std::string good =
        "kq-trace v1 maker=x breaker=y turns=2 seed=0 occ-budget=0 digest=0\n"
        "1 M 0/1 1/1\n"
        "2 B 0/1 1/1\n";
    Trace t = Trace::parse(good);
    CHECK_THROWS_AS(replay(t), GameError);

    CHECK_THROWS_AS(Trace::parse("garbage\n"), std::invalid_argument);
    CHECK_THROWS_AS(
        Trace::parse("kq-trace v1 maker=x breaker=y turns=1 seed=0 occ-budget=0 digest=0\n"
                     "1 X 0/1 1/1\n"),
        std::invalid_argument);
    CHECK_THROWS_AS(
        Trace::parse("kq-trace v1 maker=x breaker=y turns=1 seed=0 occ-budget=0 digest=0\n"
                     "2 M 0/1 1/1\n"),
        std::invalid_argument);
}

TEST_CASE("run_game aborts with a diagnostic naming the offender") {
    struct BadStrategy : Strategy {
        std::string id() const override { return "bad"; }
        Edge choose(const GameState&) override { return Edge(Rational(0), Rational(1)); }
    };
    BadStrategy maker, breaker; // breaker will repeat maker's edge
    RunResult r = run_game(maker, breaker, 4, 0, 0);
    REQUIRE(r.abort_diagnostic.has_value());
    CHECK(r.abort_diagnostic->find("breaker") != std::string::npos);
    CHECK(r.trace.moves.size() == 1);
}
