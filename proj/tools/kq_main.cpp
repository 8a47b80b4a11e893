#include "kq/analysis.hpp"
#include "kq/breaker_strategies.hpp"
#include "kq/context.hpp"
#include "kq/maker_strategy.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::unique_ptr<kq::Strategy> make_breaker(const std::string& id, std::uint64_t run_seed,
                                           kq::Context& ctx, std::uint64_t occ_budget) {
    if (id == "pairing") return std::make_unique<kq::PairingBreaker>();
    if (id == "blocking") return std::make_unique<kq::BlockingBreaker>(ctx, occ_budget);
    if (id == "random") return std::make_unique<kq::RandomBreaker>(run_seed);
    if (id.rfind("random:", 0) == 0)
        return std::make_unique<kq::RandomBreaker>(std::stoull(id.substr(7)));
    return nullptr;
}

int cmd_play(const std::string& maker_id, const std::string& breaker_id, std::uint64_t turns,
             std::uint64_t seed, std::uint64_t occ_budget, const std::string& out,
             std::uint64_t dump_stream) {
    kq::Context ctx;
    if (dump_stream > 0) {
        for (std::uint64_t i = 1; i <= dump_stream; ++i)
            std::cout << ctx.stream.at(i) << (i == dump_stream ? "\n" : " ");
    }
    if (maker_id != "q-strategy") {
        std::cerr << "unknown maker strategy '" << maker_id << "'\n";
        return kExitUsage;
    }
    auto breaker = make_breaker(breaker_id, seed, ctx, occ_budget);
    if (!breaker) {
        std::cerr << "unknown breaker strategy '" << breaker_id << "'\n";
        return kExitUsage;
    }
    kq::QStrategy maker(ctx, occ_budget);
    kq::RunResult result = kq::run_game(maker, *breaker, turns, seed, occ_budget);
    if (!out.empty()) write_file(out, result.trace.serialize());
    if (result.abort_diagnostic) {
        std::cerr << *result.abort_diagnostic << "\n";
        return kExitFailure;
    }
    std::cout << "played " << result.trace.moves.size() << " turns, "
              << result.final_state.maker_vertex_count() << " maker vertices\n";
    return kExitOk;
}

int cmd_verify(const std::string& in, const std::vector<std::string>& checks,
               std::uint64_t bound) {
    const std::string text = read_file(in);
    kq::Trace trace = kq::Trace::parse(text);
    bool all_ok = true;
    kq::Context ctx;
    for (const std::string& check : checks) {
        kq::Report rep;
        if (check == "legality") {
            rep = kq::verify_trace(trace);
        } else if (check == "maker") {
            rep = kq::verify_maker_strategy(trace, ctx);
        } else if (check == "pairing") {
            rep = kq::verify_pairing(trace);
        } else if (check == "disjointness") {
            rep = kq::pair_disjointness(bound);
        } else if (check == "certificate") {
            kq::CliqueCertificate cert = kq::CliqueCertificate::parse(text);
            kq::Report maker_rep = kq::verify_maker_strategy(trace, ctx); // warms the memo
            if (!maker_rep.ok()) rep = maker_rep;
            else rep = kq::check_certificate(cert, kq::replay(trace), ctx);
        } else {
            std::cerr << "unknown check '" << check << "'\n";
            return kExitUsage;
        }
        std::cout << "[" << check << "] " << rep.text();
        all_ok = all_ok && rep.ok();
    }
    return all_ok ? kExitOk : kExitFailure;
}

int cmd_extract(const std::string& in, std::uint64_t m_max, std::uint64_t threshold,
                const std::string& cert_out, bool append) {
    const std::string text = read_file(in);
    kq::Trace trace = kq::Trace::parse(text);
    if (trace.header.maker_id != "q-strategy") {
        std::cerr << "extract requires a q-strategy trace\n";
        return kExitUsage;
    }
    kq::Context ctx;
    kq::Report rep = kq::verify_maker_strategy(trace, ctx); // warms class memo
    if (!rep.ok()) {
        std::cout << rep.text();
        return kExitFailure;
    }
    kq::GameState state = kq::replay(trace);
    kq::CliqueCertificate cert = kq::extract_clique(state, ctx, m_max, threshold);
    kq::Report check = kq::check_certificate(cert, state, ctx);
    std::cout << "m=" << cert.achieved_m() << "\n" << check.text();
    if (append)
        write_file(in, text + cert.serialize());
    else if (!cert_out.empty())
        write_file(cert_out, cert.serialize());
    return check.ok() && cert.achieved_m() >= 1 ? kExitOk : kExitFailure;
}

int cmd_ramsey(std::uint64_t prefix, const std::string& dense_oracle, std::uint64_t count,
               std::uint64_t budget) {
    if (prefix > 0) {
        const std::size_t blue = kq::max_mono_clique_prefix(prefix, kq::Colour::Blue);
        const std::size_t red = kq::max_mono_clique_prefix(prefix, kq::Colour::Red);
        std::cout << "blue=" << blue << " red=" << red << "\n";
        return kExitOk;
    }
    kq::ColouringOracle oracle;
    if (dense_oracle == "all-blue") oracle = kq::all_blue_oracle();
    else if (dense_oracle == "all-red") oracle = kq::all_red_oracle();
    else if (dense_oracle == "denominator-parity") oracle = kq::denominator_parity_oracle();
    else {
        std::cerr << "unknown oracle '" << dense_oracle << "'\n";
        return kExitUsage;
    }
    kq::Context ctx;
    kq::DenseSubsetResult res = kq::mono_dense_subset(oracle, count, budget, ctx);
    switch (res.tag) {
        case kq::DenseSubsetResult::Case::BlueClass: std::cout << "case 1 (blue class)\n"; break;
        case kq::DenseSubsetResult::Case::RedSelection: std::cout << "case 2 (red selection)\n"; break;
        case kq::DenseSubsetResult::Case::Inconclusive:
            std::cout << "inconclusive: " << res.note << "\n";
            return kExitFailure;
    }
    for (std::size_t i = 0; i < res.elements.size(); ++i)
        std::cout << res.elements[i].str() << " (class " << res.class_labels[i].str() << ")\n";
    return kExitOk;
}

int cmd_iso(const std::string& forward, const std::string& backward,
            const std::string& class_of) {
    kq::Context ctx;
    if (!forward.empty()) {
        std::istringstream is(forward);
        std::string a, b;
        if (!(is >> a >> b)) {
            std::cerr << "--forward needs \"a b\"\n";
            return kExitUsage;
        }
        std::cout << ctx.iso.forward(kq::Rational::parse(a), kq::Rational::parse(b)).str()
                  << "\n";
    }
    if (!backward.empty()) {
        kq::LexPair p = ctx.iso.backward(kq::Rational::parse(backward));
        std::cout << p.first.str() << " " << p.second.str() << "\n";
    }
    if (!class_of.empty())
        std::cout << ctx.iso.class_of(kq::Rational::parse(class_of)).label.str() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maker-Breaker games on the complete graph over the rationals"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::string maker_id = "q-strategy", breaker_id = "random", out;
    std::uint64_t turns = 0, seed = 0, occ_budget = kq::kDefaultOccBudget, dump_stream = 0;
    auto* play = app.add_subcommand("play", "run a game and write the trace");
    play->add_option("--maker", maker_id, "maker strategy id");
    play->add_option("--breaker", breaker_id, "breaker strategy id");
    play->add_option("--turns", turns, "number of turns")->required()->check(CLI::PositiveNumber);
    play->add_option("--seed", seed, "run seed (the only entropy source)");
    play->add_option("--occ-budget", occ_budget, "occurrence search budget (stream positions)");
    play->add_option("--out", out, "trace output path");
    play->add_option("--dump-stream", dump_stream, "print a steering-sequence prefix");

    std::string in;
    std::vector<std::string> checks;
    std::uint64_t bound = 10000;
    auto* verify = app.add_subcommand("verify", "run verifiers against a trace");
    verify->add_option("--in", in, "trace path")->required();
    verify->add_option("--checks", checks, "comma list: legality,maker,pairing,disjointness,certificate")
        ->required()
        ->delimiter(',');
    verify->add_option("--bound", bound, "pair count for the disjointness check");

    std::uint64_t m_max = 8, threshold = 3;
    std::string cert_out;
    bool append = false;
    auto* extract = app.add_subcommand("extract", "extract a clique certificate from a trace");
    extract->add_option("--in", in, "trace path")->required();
    extract->add_option("--m-max", m_max, "maximum clique size to attempt");
    extract->add_option("--threshold", threshold, "finite surrogate for 'infinitely many'");
    extract->add_option("--cert-out", cert_out, "certificate output path");
    extract->add_flag("--append", append, "append the certificate to the trace file");

    std::uint64_t prefix = 0, count = 5, budget = 64;
    std::string dense_oracle;
    auto* ramsey = app.add_subcommand("ramsey", "index-colouring maxima and dense subsets");
    ramsey->add_option("--prefix", prefix, "report mono clique maxima for e_1..e_n");
    ramsey->add_option("--dense-subset", dense_oracle,
                       "oracle: all-blue | all-red | denominator-parity");
    ramsey->add_option("--count", count, "elements to extract");
    ramsey->add_option("--budget", budget, "per-class scan budget");

    std::string fwd, bwd, cls;
    auto* iso = app.add_subcommand("iso", "inspect the back-and-forth isomorphism");
    iso->add_option("--forward", fwd, "pair \"a b\" to map");
    iso->add_option("--backward", bwd, "rational in (0,1) to invert");
    iso->add_option("--class-of", cls, "rational in (0,1) to classify");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitUsage : kExitOk;
    }

    try {
        if (play->parsed())
            return cmd_play(maker_id, breaker_id, turns, seed, occ_budget, out, dump_stream);
        if (verify->parsed()) return cmd_verify(in, checks, bound);
        if (extract->parsed()) return cmd_extract(in, m_max, threshold, cert_out, append);
        if (ramsey->parsed()) return cmd_ramsey(prefix, dense_oracle, count, budget);
        if (iso->parsed()) return cmd_iso(fwd, bwd, cls);
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
