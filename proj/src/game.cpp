#include "kq/game.hpp"

#include <algorithm>
#include <sstream>

namespace kq {

void GameState::apply(Player p, const Edge& e) {
    const std::uint64_t t = turn() + 1;
    if (to_move() != p)
        throw GameError(std::string("out-of-turn move by ") + player_tag(p) +
                            " at turn " + std::to_string(t),
                        t);
    if (claimed(e))
        throw GameError("edge " + e.str() + " already claimed at turn " + std::to_string(t), t);

    if (p == Player::Maker) {
        const bool a_new = vertex_index_.count(e.a) == 0;
        const bool b_new = vertex_index_.count(e.b) == 0;
        const bool a_fresh = a_new && fresh(e.a);
        const bool b_fresh = b_new && fresh(e.b);

        // A fresh vertex entering G_M freezes every unfrozen older record.
        if (a_fresh || b_fresh) {
            for (std::uint32_t id : unfrozen_)
                records_[id - 1].frozen_len = records_[id - 1].older.size();
            unfrozen_.clear();
        }

        auto add_vertex = [&](const Rational& v) {
            vertices_.push_back(v);
            vertex_index_.emplace(v, static_cast<std::uint32_t>(vertices_.size()));
            records_.emplace_back();
            maker_adj_.emplace_back();
            unfrozen_.push_back(static_cast<std::uint32_t>(vertices_.size()));
        };
        if (a_new && b_new) {
            // Fresh endpoint appended last; ties by ascending value.
            const Rational& first = (a_fresh == b_fresh) ? e.a : (b_fresh ? e.a : e.b);
            const Rational& second = (&first == &e.a) ? e.b : e.a;
            add_vertex(first);
            add_vertex(second);
        } else if (a_new) {
            add_vertex(e.a);
        } else if (b_new) {
            add_vertex(e.b);
        }

        std::uint32_t ia = vertex_index_.at(e.a);
        std::uint32_t ib = vertex_index_.at(e.b);
        std::uint32_t older = std::min(ia, ib), younger = std::max(ia, ib);
        records_[younger - 1].older.push_back(older);
        maker_adj_[ia - 1].push_back(ib);
        maker_adj_[ib - 1].push_back(ia);
        maker_edges_.insert(pack(ia, ib));
        last_maker_edge_ = e;
    } else {
        breaker_touched_.insert(e.a);
        breaker_touched_.insert(e.b);
    }

    touched_.insert(e.a);
    touched_.insert(e.b);
    ownership_.emplace(e, p);
    moves_.push_back(Move{t, p, e});
}

std::string TraceHeader::line() const {
    std::ostringstream os;
    os << "kq-trace v1 maker=" << maker_id << " breaker=" << breaker_id << " turns=" << turns
       << " seed=" << seed << " occ-budget=" << occ_budget << " digest=" << digest;
    for (const auto& [k, v] : counters) os << " c:" << k << "=" << v;
    return os.str();
}

TraceHeader TraceHeader::parse(const std::string& line) {
    std::istringstream is(line);
    std::string magic, version;
    is >> magic >> version;
    if (magic != "kq-trace" || version != "v1")
        throw std::invalid_argument("trace: bad header magic");
    TraceHeader h;
    std::string token;
    while (is >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("trace: malformed header token '" + token + "'");
        std::string key = token.substr(0, eq);
        std::string value = token.substr(eq + 1);
        if (key == "maker") h.maker_id = value;
        else if (key == "breaker") h.breaker_id = value;
        else if (key == "turns") h.turns = std::stoull(value);
        else if (key == "seed") h.seed = std::stoull(value);
        else if (key == "occ-budget") h.occ_budget = std::stoull(value);
        else if (key == "digest") h.digest = value;
        else if (key.rfind("c:", 0) == 0)
            h.counters.emplace_back(key.substr(2), std::stoull(value));
        else
            throw std::invalid_argument("trace: unknown header key '" + key + "'");
    }
    return h;
}

std::string Trace::serialize() const {
    std::ostringstream os;
    os << header.line() << "\n";
    for (const Move& m : moves)
        os << m.turn << " " << player_tag(m.player) << " " << m.edge.a.str() << " "
           << m.edge.b.str() << "\n";
    return os.str();
}

Trace Trace::parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("trace: empty input");
    Trace t;
    t.header = TraceHeader::parse(line);
    std::uint64_t expected_turn = 1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string turn_tok;
        ls >> turn_tok;
        if (turn_tok.empty() || !std::isdigit(static_cast<unsigned char>(turn_tok[0])))
            break; // trailing certificate or report section
        std::string who, ra, rb;
        if (!(ls >> who >> ra >> rb) || (who != "M" && who != "B"))
            throw std::invalid_argument("trace: malformed move line '" + line + "'");
        std::uint64_t turn = std::stoull(turn_tok);
        if (turn != expected_turn)
            throw std::invalid_argument("trace: unexpected turn number " + turn_tok);
        ++expected_turn;
        t.moves.push_back(Move{turn, who == "M" ? Player::Maker : Player::Breaker,
                               Edge(Rational::parse(ra), Rational::parse(rb))});
    }
    return t;
}

std::string config_digest(const std::string& maker_id, const std::string& breaker_id,
                          std::uint64_t turns, std::uint64_t seed, std::uint64_t occ_budget) {
    // FNV-1a over the canonical config string; the constructions tag pins the
    // frozen enumerations (Calkin-Wilf, shell pairing, weight-lex words).
    std::string s = maker_id + "|" + breaker_id + "|" + std::to_string(turns) + "|" +
                    std::to_string(seed) + "|" + std::to_string(occ_budget) +
                    "|cw1-shell1-wordwl1";
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

RunResult run_game(Strategy& maker, Strategy& breaker, std::uint64_t turns, std::uint64_t seed,
                   std::uint64_t occ_budget) {
    if (turns < 1) throw std::invalid_argument("run_game: turns must be >= 1");
    RunResult result;
    result.trace.header.maker_id = maker.id();
    result.trace.header.breaker_id = breaker.id();
    result.trace.header.turns = turns;
    result.trace.header.seed = seed;
    result.trace.header.occ_budget = occ_budget;
    result.trace.header.digest = config_digest(maker.id(), breaker.id(), turns, seed, occ_budget);

    GameState& state = result.final_state;
    for (std::uint64_t t = 1; t <= turns; ++t) {
        Strategy& mover = (t % 2 == 1) ? maker : breaker;
        const Player p = (t % 2 == 1) ? Player::Maker : Player::Breaker;
        try {
            Edge e = mover.choose(state);
            state.apply(p, e);
            result.trace.moves.push_back(Move{t, p, e});
        } catch (const std::exception& ex) {
            result.abort_diagnostic = std::string(p == Player::Maker ? "maker" : "breaker") +
                                      " strategy '" + mover.id() + "' failed at turn " +
                                      std::to_string(t) + ": " + ex.what();
            break;
        }
    }
    for (const auto& c : maker.counters())
        result.trace.header.counters.emplace_back("maker." + c.first, c.second);
    for (const auto& c : breaker.counters())
        result.trace.header.counters.emplace_back("breaker." + c.first, c.second);
    return result;
}

GameState replay(const Trace& trace) {
    GameState state;
    for (const Move& m : trace.moves) {
        if (m.turn != state.turn() + 1)
            throw GameError("replay: move numbering broken at turn " + std::to_string(m.turn),
                            m.turn);
        state.apply(m.player, m.edge);
    }
    return state;
}

} // namespace kq
