// posetmc: first-order model checking on colored posets of bounded width.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "posetmc/commands.hpp"

namespace {

struct Shared {
    std::string engine = "local";
    std::string formula;
    bool no_first_move_opt = false;
};

void add_shared(CLI::App* cmd, posetmc::RunConfig& cfg, Shared& s) {
    cmd->add_option("--engine", s.engine, "naive, local or both")
        ->check(CLI::IsMember({"naive", "local", "both"}));
    cmd->add_flag("--json", cfg.json, "machine-readable output");
    cmd->add_option("--seed", cfg.seed, "random seed");
    cmd->add_option("--size-cap", cfg.size_cap, "largest neighborhood built before giving up");
    cmd->add_flag("--no-first-move-opt", s.no_first_move_opt, "let unrestricted moves range over every element");
    cmd->add_option("--oracle-limit", cfg.oracle_limit, "largest instance the naive engine accepts in both mode");
    cmd->add_option("-e,--formula", s.formula, "formula text, instead of a formula file");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"First-order model checking on colored posets of bounded width"};
    app.require_subcommand(1);

    posetmc::RunConfig cfg;
    Shared shared;
    std::string input, formula_file;

    auto* check = app.add_subcommand("check", "decide whether a poset satisfies a sentence");
    check->add_option("poset", input, "poset JSON file")->required();
    check->add_option("formula-file", formula_file, "formula file");
    add_shared(check, cfg, shared);

    auto* width = app.add_subcommand("width", "print the width and a minimum chain partition");
    width->add_option("poset", input, "poset JSON file")->required();
    width->add_flag("--json", cfg.json, "machine-readable output");

    auto* types = app.add_subcommand("types", "count element types per rank");
    types->add_option("poset", input, "poset JSON file")->required();
    types->add_option("--rank", cfg.rank, "highest rank to build")->check(CLI::NonNegativeNumber);
    types->add_flag("--dump", cfg.dump, "print the digraphs");
    types->add_flag("--json", cfg.json, "machine-readable output");
    types->add_option("--size-cap", cfg.size_cap, "largest neighborhood built before giving up");

    auto* interval = app.add_subcommand("interval-check", "decide a graph sentence on an interval instance");
    interval->add_option("intervals", input, "interval JSON file")->required();
    interval->add_option("formula-file", formula_file, "formula file");
    interval->add_flag("--oracle", cfg.oracle, "cross-check against direct evaluation on the graph");
    add_shared(interval, cfg, shared);

    posetmc::GenParams gen_params;
    auto* gen = app.add_subcommand("gen", "write a random instance to standard output");
    gen->add_option("kind", gen_params.kind, "poset or interval")->required();
    gen->add_option("--n", gen_params.n, "number of elements or intervals");
    gen->add_option("--width", gen_params.width, "target width (poset)");
    gen->add_option("--colors", gen_params.colors, "number of colors (poset)");
    gen->add_option("--density", gen_params.density, "cross-chain relation density (poset)");
    gen->add_option("--k", gen_params.k, "number of proper families (interval)");
    gen->add_option("--seed", cfg.seed, "random seed");

    posetmc::BenchParams bench_params;
    auto* bench = app.add_subcommand("bench", "time an engine across instance sizes");
    bench->add_option("formula-file", formula_file, "formula file");
    bench->add_option("--family", bench_params.family, "chain or random");
    bench->add_option("--sizes", bench_params.sizes, "instance sizes")->delimiter(',');
    bench->add_option("--width", bench_params.width, "width of the random family");
    bench->add_option("--repeats", bench_params.repeats, "timed runs per size, best kept");
    add_shared(bench, cfg, shared);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage errors share the exit code of every other error
        return app.exit(e) == 0 ? 0 : posetmc::exit_error;
    }

    cfg.engine = posetmc::parse_engine(shared.engine);
    cfg.first_move_optimization = !shared.no_first_move_opt;
    if (!shared.formula.empty()) cfg.inline_formula = shared.formula;
    const bool needs_formula = check->parsed() || interval->parsed() || bench->parsed();
    if (needs_formula && formula_file.empty() && !cfg.inline_formula) {
        std::cerr << "error: give a formula file or --formula\n";
        return posetmc::exit_error;
    }

    if (check->parsed()) return posetmc::cmd_check(input, formula_file, cfg, std::cout, std::cerr);
    if (width->parsed()) return posetmc::cmd_width(input, cfg, std::cout, std::cerr);
    if (types->parsed()) return posetmc::cmd_types(input, cfg, std::cout, std::cerr);
    if (interval->parsed()) return posetmc::cmd_interval_check(input, formula_file, cfg, std::cout, std::cerr);
    if (gen->parsed()) return posetmc::cmd_gen(gen_params, cfg, std::cout, std::cerr);
    return posetmc::cmd_bench(bench_params, formula_file, cfg, std::cout, std::cerr);
}
