#pragma once

#include "kq/rational.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kq {

enum class Player { Maker, Breaker };

inline char player_tag(Player p) { return p == Player::Maker ? 'M' : 'B'; }

// Unordered board edge, stored with the smaller endpoint first.
struct Edge {
    Rational a;
    Rational b;

    Edge(Rational x, Rational y) {
        if (x == y) throw std::invalid_argument("Edge: endpoints must be distinct");
        if (y < x) std::swap(x, y);
        a = std::move(x);
        b = std::move(y);
    }

    bool operator==(const Edge& o) const { return a == o.a && b == o.b; }
    bool operator!=(const Edge& o) const { return !(*this == o); }
    bool operator<(const Edge& o) const {
        if (a != o.a) return a < o.a;
        return b < o.b;
    }

    std::string str() const { return a.str() + " " + b.str(); }
};

struct EdgeHash {
    std::size_t operator()(const Edge& e) const {
        std::size_t h = hash_value(e.a);
        boost::hash_combine(h, hash_value(e.b));
        return h;
    }
};

struct Move {
    std::uint64_t turn = 0; // 1-based
    Player player = Player::Maker;
    Edge edge;
};

// Ordered record of a vertex's Maker neighbours that entered G_M before it,
// in edge-claim order (entries are vertex-addition indices). frozen_len is
// set when the next fresh vertex enters G_M after the owner.
struct ConnectionRecord {
    std::vector<std::uint32_t> older;
    std::optional<std::uint32_t> frozen_len;

    // The record S_v: the frozen prefix once frozen, the full list before.
    std::size_t effective_len() const {
        return frozen_len ? std::min<std::size_t>(*frozen_len, older.size()) : older.size();
    }
};

class GameError : public std::runtime_error {
public:
    GameError(std::string msg, std::uint64_t turn)
        : std::runtime_error(std::move(msg)), turn(turn) {}
    std::uint64_t turn;
};

// Board state plus Maker bookkeeping. The engine owns all mutation;
// strategies are pure decision functions over the state.
class GameState {
public:
    std::uint64_t turn() const { return moves_.size(); }
    Player to_move() const { return turn() % 2 == 0 ? Player::Maker : Player::Breaker; }

    std::optional<Player> owner(const Edge& e) const {
        auto it = ownership_.find(e);
        if (it == ownership_.end()) return std::nullopt;
        return it->second;
    }
    bool claimed(const Edge& e) const { return ownership_.count(e) != 0; }

    // Fresh vertex: incident with no claimed edge of either player.
    bool fresh(const Rational& r) const {
        return !vertex_index_.count(r) && !breaker_touched_.count(r);
    }

    // Applies a move or throws GameError (already claimed / out of turn).
    // Maker moves update the vertex-addition list (fresh endpoint appended
    // last when both endpoints are new, ties by ascending value), extend the
    // younger endpoint's connection record, and freeze the records of all
    // previously added vertices whenever a fresh vertex enters G_M.
    void apply(Player p, const Edge& e);

    const std::vector<Move>& moves() const { return moves_; }
    const std::vector<Rational>& vertex_list() const { return vertices_; }

    // 1-based vertex-addition index, or 0 when not in V(G_M).
    std::uint32_t vertex_index(const Rational& r) const {
        auto it = vertex_index_.find(r);
        return it == vertex_index_.end() ? 0 : it->second;
    }
    const Rational& vertex(std::uint32_t index) const { return vertices_.at(index - 1); }

    const ConnectionRecord& record(std::uint32_t index) const { return records_.at(index - 1); }
    const std::vector<std::uint32_t>& maker_neighbours(std::uint32_t index) const {
        return maker_adj_.at(index - 1);
    }
    bool maker_adjacent(std::uint32_t i, std::uint32_t j) const {
        return maker_edges_.count(pack(i, j)) != 0;
    }

    std::uint32_t maker_vertex_count() const { return vertices_.size(); }
    const std::optional<Edge>& last_maker_edge() const { return last_maker_edge_; }

    // Every vertex incident with any claimed edge, in value order.
    const std::set<Rational>& touched_vertices() const { return touched_; }

private:
    static std::uint64_t pack(std::uint32_t i, std::uint32_t j) {
        if (i > j) std::swap(i, j);
        return (static_cast<std::uint64_t>(i) << 32) | j;
    }

    std::unordered_map<Edge, Player, EdgeHash> ownership_;
    std::vector<Move> moves_;

    std::vector<Rational> vertices_; // addition order
    std::unordered_map<Rational, std::uint32_t, RationalHash> vertex_index_;
    std::vector<ConnectionRecord> records_;
    std::vector<std::vector<std::uint32_t>> maker_adj_; // claim order
    std::unordered_set<std::uint64_t> maker_edges_;     // packed index pairs
    std::vector<std::uint32_t> unfrozen_;

    std::unordered_set<Rational, RationalHash> breaker_touched_;
    std::set<Rational> touched_;
    std::optional<Edge> last_maker_edge_;
};

struct TraceHeader {
    std::string maker_id;
    std::string breaker_id;
    std::uint64_t turns = 0;
    std::uint64_t seed = 0;
    std::uint64_t occ_budget = 0;
    std::string digest;
    std::vector<std::pair<std::string, std::uint64_t>> counters;

    std::string line() const;
    static TraceHeader parse(const std::string& line);
};

// Line-oriented, bit-exact across platforms: one header line, then one line
// per move: "<turn> <M|B> <num/den> <num/den>" with endpoints ascending.
struct Trace {
    TraceHeader header;
    std::vector<Move> moves;

    std::string serialize() const;
    // Ignores a trailing certificate section (first token not a number).
    static Trace parse(const std::string& text);
};

// Strategy interface: a pure decision function over the state plus private,
// state-derived memo. id() goes into trace headers; counters() reports
// fallback activations and similar diagnostics.
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual std::string id() const = 0;
    virtual Edge choose(const GameState& state) = 0;
    virtual std::vector<std::pair<std::string, std::uint64_t>> counters() const { return {}; }
};

struct RunResult {
    Trace trace;
    GameState final_state;
    std::optional<std::string> abort_diagnostic; // illegal strategy move
};

std::string config_digest(const std::string& maker_id, const std::string& breaker_id,
                          std::uint64_t turns, std::uint64_t seed, std::uint64_t occ_budget);

// Alternating play starting with Maker; deterministic given (strategies,
// turns, seed). An illegal strategy move aborts with the trace so far and a
// diagnostic naming the offender.
RunResult run_game(Strategy& maker, Strategy& breaker, std::uint64_t turns, std::uint64_t seed,
                   std::uint64_t occ_budget);

// Replays a trace move by move; fails exactly like apply() on illegal steps.
GameState replay(const Trace& trace);

} // namespace kq
