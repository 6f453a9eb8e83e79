#ifndef POSETMC_COMMANDS_HPP
#define POSETMC_COMMANDS_HPP

// The subcommands behind the posetmc tool, written against streams so they
// can be tested in-process. Each returns the process exit code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "posetmc/checker.hpp"
#include "posetmc/evaluate.hpp"
#include "posetmc/formula.hpp"
#include "posetmc/interval.hpp"
#include "posetmc/io.hpp"
#include "posetmc/poset.hpp"
#include "posetmc/typegraph.hpp"

namespace posetmc {

enum ExitCode : int { exit_true = 0, exit_false = 1, exit_error = 2, exit_divergence = 3 };

enum class Engine { naive, local, both };

inline Engine parse_engine(const std::string& name) {
    if (name == "naive") return Engine::naive;
    if (name == "local") return Engine::local;
    if (name == "both") return Engine::both;
    throw std::invalid_argument("unknown engine '" + name + "' (naive, local, both)");
}

inline const char* to_string(Engine e) {
    switch (e) {
    case Engine::naive: return "naive";
    case Engine::local: return "local";
    case Engine::both: return "both";
    }
    return "?";
}

struct RunConfig {
    Engine engine = Engine::local;
    bool json = false;
    bool first_move_optimization = true;
    bool oracle = false;
    bool dump = false;
    std::uint64_t seed = 1;
    std::size_t size_cap = default_size_cap;
    std::size_t oracle_limit = 14;
    int rank = 0;
    std::optional<std::string> inline_formula;  // used instead of the formula file when set

    CheckOptions check_options() const {
        CheckOptions o;
        o.first_move_optimization = first_move_optimization;
        o.size_cap = size_cap;
        return o;
    }
};

namespace detail {

inline Formula load_sentence(const std::string& formula_path, const RunConfig& cfg) {
    return parse_sentence(cfg.inline_formula ? *cfg.inline_formula : read_file(formula_path));
}

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

inline void print_result(std::ostream& out, const char* engine, const CheckResult& r, bool with_stats) {
    out << "verdict: " << (r.verdict ? "true" : "false") << '\n';
    out << "engine: " << engine << '\n';
    out << "positions: " << r.positions << '\n';
    if (with_stats) {
        out << "max ball: " << r.max_ball << '\n';
        out << "types per rank:";
        for (auto c : r.type_counts_per_rank) out << ' ' << c;
        out << '\n';
    }
    out << "millis: " << r.millis << '\n';
}

inline CheckResult naive_result(const NaiveResult& r, double ms) {
    CheckResult c;
    c.verdict = r.verdict;
    c.positions = r.positions;
    c.millis = ms;
    return c;
}

/// Runs the configured engine(s); returns an exit code and writes a report.
template <class Naive, class Local>
int run_engines(std::size_t n, const RunConfig& cfg, Engine engine, Naive&& naive, Local&& local,
                std::ostream& out, std::ostream& err) {
    if (engine == Engine::both && n > cfg.oracle_limit) {
        err << "error: instance has " << n << " elements, above the oracle limit " << cfg.oracle_limit
            << " for the naive engine\n";
        return exit_error;
    }
    std::optional<CheckResult> a, b;
    if (engine != Engine::local) a = naive();
    if (engine != Engine::naive) b = local();
    if (a && b && a->verdict != b->verdict) {
        err << "divergence: naive says " << (a->verdict ? "true" : "false") << ", local says "
            << (b->verdict ? "true" : "false") << '\n';
        return exit_divergence;
    }
    const CheckResult& shown = b ? *b : *a;
    if (cfg.json) {
        json j = result_to_json(shown);
        j["engine"] = to_string(engine);
        if (a && b) j["naivePositions"] = a->positions;
        out << j.dump() << '\n';
    } else {
        if (a) print_result(out, "naive", *a, false);
        if (b) print_result(out, "local", *b, true);
    }
    return shown.verdict ? exit_true : exit_false;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        err << "error: formula: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return exit_error;
}

} // namespace detail

inline int cmd_check(const std::string& poset_path, const std::string& formula_path, const RunConfig& cfg,
                     std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const Poset p = load_poset(poset_path);
        const Formula f = detail::load_sentence(formula_path, cfg);
        require_poset_vocabulary(f);
        return detail::run_engines(
            p.size(), cfg, cfg.engine,
            [&] {
                const auto start = std::chrono::steady_clock::now();
                NaiveResult r = evaluate_naive(PosetStructure(p), f);
                return detail::naive_result(r, detail::elapsed_ms(start));
            },
            [&] { return check_local(p, f, cfg.check_options()); }, out, err);
    });
}

inline int cmd_width(const std::string& poset_path, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const Poset p = load_poset(poset_path);
        const auto& chains = p.chain_partition().chains;
        if (cfg.json) {
            out << json{{"width", p.width()}, {"chains", chains}}.dump() << '\n';
        } else {
            out << "width " << p.width() << '\n';
            for (std::size_t j = 0; j < chains.size(); ++j) {
                out << "chain " << j << ':';
                for (Element e : chains[j]) out << ' ' << e;
                out << '\n';
            }
        }
        return exit_true;
    });
}

inline int cmd_types(const std::string& poset_path, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        if (cfg.rank < 0) throw std::invalid_argument("rank must be non-negative");
        const Poset p = load_poset(poset_path);
        TypeRegistry registry;
        const auto digraphs = build_up_to(p, cfg.rank, registry, cfg.size_cap);
        std::vector<std::size_t> counts;
        for (const auto& d : digraphs) counts.push_back(type_set(d).size());
        if (cfg.json) {
            json j{{"typeCountsPerRank", counts}};
            if (cfg.dump) {
                std::string text;
                for (const auto& d : digraphs) text += dump(d);
                j["dump"] = text;
            }
            out << j.dump() << '\n';
        } else {
            for (std::size_t s = 0; s < counts.size(); ++s) out << "rank " << s << ": " << counts[s] << " types\n";
            if (cfg.dump)
                for (const auto& d : digraphs) out << dump(d);
        }
        return exit_true;
    });
}

inline int cmd_interval_check(const std::string& interval_path, const std::string& formula_path,
                              const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const IntervalInstance inst = load_intervals(interval_path);
        const Formula f = detail::load_sentence(formula_path, cfg);
        require_graph_vocabulary(f);
        const Engine engine = cfg.oracle ? Engine::both : cfg.engine;
        return detail::run_engines(
            inst.size(), cfg, engine,
            [&] {
                const auto start = std::chrono::steady_clock::now();
                NaiveResult r = evaluate_naive(GraphStructure(inst.size(), inst.edges()), f);
                return detail::naive_result(r, detail::elapsed_ms(start));
            },
            [&] { return check_interval_detailed(inst, f, cfg.check_options()); }, out, err);
    });
}

struct GenParams {
    std::string kind = "poset";  // poset | interval
    std::size_t n = 10;
    std::size_t width = 2;
    std::size_t colors = 1;
    std::size_t k = 1;
    double density = 0.25;
};

inline int cmd_gen(const GenParams& params, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        if (params.kind == "poset") {
            if (params.width == 0 || params.width > params.n)
                throw std::invalid_argument("width must be between 1 and n");
            if (params.density < 0.0 || params.density > 1.0)
                throw std::invalid_argument("density must lie in [0, 1]");
            out << poset_to_json(random_poset(params.n, params.width, params.colors, cfg.seed, params.density)).dump()
                << '\n';
        } else if (params.kind == "interval") {
            if (params.k == 0) throw std::invalid_argument("k must be at least 1");
            out << intervals_to_json(random_interval_instance(params.n, params.k, cfg.seed)).dump() << '\n';
        } else {
            throw std::invalid_argument("unknown instance kind '" + params.kind + "' (poset, interval)");
        }
        return exit_true;
    });
}

/// Least-squares slope of log(y) against log(x).
inline double fit_exponent(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("need at least two points to fit");
    double mx = 0, my = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += std::log(xs[i]) / n;
        my += std::log(std::max(ys[i], 1e-9)) / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = std::log(xs[i]) - mx;
        sxy += dx * (std::log(std::max(ys[i], 1e-9)) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

/// Monochromatic chain 0 < 1 < ... < n-1.
inline Poset chain_poset(std::size_t n) {
    std::vector<std::pair<Element, Element>> covers;
    for (std::size_t i = 1; i < n; ++i) covers.emplace_back(static_cast<Element>(i - 1), static_cast<Element>(i));
    return Poset::from_relation(n, covers, {}, RelationMode::cover);
}

struct BenchParams {
    std::string family = "chain";  // chain | random
    std::vector<std::size_t> sizes{100, 200, 400, 800};
    std::size_t width = 2;  // random family
    int repeats = 3;
};

struct BenchRow {
    std::size_t n;
    double millis;  // best of the repeats
    std::uint64_t positions;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    double exponent = 0.0;
};

inline Poset bench_instance(const BenchParams& params, std::size_t n, std::uint64_t seed) {
    if (params.family == "chain") return chain_poset(n);
    if (params.family == "random") return random_poset(n, std::min(params.width, n), 1, seed);
    throw std::invalid_argument("unknown family '" + params.family + "' (chain, random)");
}

/// Times one engine across the sizes; the poset is built outside the timed
/// region.
inline BenchReport run_bench(const BenchParams& params, const Formula& f, Engine engine, const CheckOptions& options,
                             std::uint64_t seed) {
    if (engine == Engine::both) throw std::invalid_argument("bench runs one engine at a time");
    if (params.sizes.size() < 2) throw std::invalid_argument("bench needs at least two sizes");
    require_sentence(f);
    require_poset_vocabulary(f);
    BenchReport report;
    std::vector<double> xs, ys;
    for (std::size_t n : params.sizes) {
        const Poset p = bench_instance(params, n, seed);
        BenchRow row{n, std::numeric_limits<double>::infinity(), 0};
        for (int rep = 0; rep < std::max(1, params.repeats); ++rep) {
            const auto start = std::chrono::steady_clock::now();
            if (engine == Engine::local) {
                row.positions = check_local(p, f, options).positions;
            } else {
                row.positions = evaluate_naive(PosetStructure(p), f).positions;
            }
            row.millis = std::min(row.millis, detail::elapsed_ms(start));
        }
        report.rows.push_back(row);
        xs.push_back(static_cast<double>(n));
        ys.push_back(row.millis);
    }
    report.exponent = fit_exponent(xs, ys);
    return report;
}

inline int cmd_bench(const BenchParams& params, const std::string& formula_path, const RunConfig& cfg,
                     std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const Formula f = detail::load_sentence(formula_path, cfg);
        const BenchReport report = run_bench(params, f, cfg.engine, cfg.check_options(), cfg.seed);
        if (cfg.json) {
            json rows = json::array();
            for (const auto& r : report.rows) rows.push_back({{"n", r.n}, {"millis", r.millis}, {"positions", r.positions}});
            out << json{{"family", params.family}, {"engine", to_string(cfg.engine)}, {"rows", rows},
                        {"exponent", report.exponent}}
                       .dump()
                << '\n';
        } else {
            out << "n\tmillis\tpositions\n";
            for (const auto& r : report.rows) out << r.n << '\t' << r.millis << '\t' << r.positions << '\n';
            out << "exponent " << report.exponent << '\n';
        }
        return exit_true;
    });
}

} // namespace posetmc

#endif // POSETMC_COMMANDS_HPP
