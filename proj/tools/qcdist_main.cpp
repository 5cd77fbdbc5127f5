#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qcdist/report.hpp"
#include "qcdist/tfc.hpp"

using namespace qcdist;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_parse = 2;
constexpr int exit_validation = 3;
constexpr int exit_config = 4;
constexpr int exit_backend = 5;
constexpr int exit_timeout = 6;
constexpr int exit_internal = 7;

int run_solve(RunConfig config, const std::string& alloc_spec,
              const std::string& strategy, const std::string& swap_refine,
              const std::string& json_path, bool show_table) {
    if (alloc_spec.rfind("explicit:", 0) == 0) {
        config.policy = AllocPolicy::explicit_file;
        config.allocation_file = alloc_spec.substr(9);
        if (config.allocation_file.empty())
            throw std::invalid_argument("explicit allocation needs a file path");
    } else {
        config.policy = alloc_policy_from_string(alloc_spec);
    }
    config.strategy = search_kind_from_string(strategy);
    config.swap_refine = swap_refine_from_string(swap_refine);

    SolutionReport report = run(config);
    if (show_table) std::cout << render_table(report);
    if (!json_path.empty()) {
        if (json_path == "-")
            std::cout << to_json(report);
        else
            write_text_file(json_path, to_json(report));
    }
    return exit_ok;
}

/// SAT-solver convention: `s` verdict line, `v` model lines, exit 10 on
/// satisfiable and 20 on unsatisfiable. That shape lets this subcommand act
/// as its own external backend.
int run_sat(const std::string& path, std::uint64_t seed, double time_limit) {
    CnfFormula formula = parse_dimacs(read_text_file(path));
    SatResult result = solve(formula, SolveConfig{seed, time_limit});
    if (!result.sat()) {
        std::cout << "s UNSATISFIABLE\n";
        return 20;
    }
    std::cout << "s SATISFIABLE\n";
    std::cout << "v";
    int on_line = 0;
    for (int v = 1; v <= formula.variable_count(); ++v) {
        if (on_line == 20) {
            std::cout << "\nv";
            on_line = 0;
        }
        std::cout << ' ' << (result.model[v] ? v : -v);
        ++on_line;
    }
    std::cout << " 0\n";
    return 10;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Distributes a reversible circuit's qubits over capacity-limited "
        "machines, minimizing teleportations by bounded SAT search."};
    app.require_subcommand(1);

    RunConfig config;
    std::string alloc_spec = "in-order";
    std::string strategy = "binary";
    std::string swap_refine = "auto";
    std::string json_path;
    bool show_table = true;

    CLI::App* solve_cmd =
        app.add_subcommand("solve", "Optimize a .tfc circuit over a network");
    solve_cmd->add_option("input", config.input_path, ".tfc circuit file")
        ->required();
    solve_cmd->add_option("-m,--machines", config.machines, "machine count")
        ->required();
    solve_cmd
        ->add_option("-c,--capacity", config.capacities,
                     "uniform capacity, or one value per machine")
        ->required();
    solve_cmd->add_option("--alloc", alloc_spec,
                          "initial allocation: in-order | random | "
                          "explicit:FILE (default in-order)");
    solve_cmd->add_option("--seed", config.alloc_seed,
                          "seed for --alloc random");
    solve_cmd->add_option("-w,--window", config.window_size,
                          "layers per subproblem (default 10)");
    solve_cmd->add_option("--strategy", strategy,
                          "threshold search: linear | binary | history "
                          "(default binary)");
    solve_cmd->add_option("--history", config.history_length,
                          "history length for --strategy history (default 10)");
    solve_cmd->add_flag("--balance", config.balance,
                        "also minimize cumulative machine vacancy");
    solve_cmd->add_option("--cost-matrix", config.cost_matrix_path,
                          "heterogeneous link costs; also minimizes weighted "
                          "teleport cost");
    solve_cmd->add_option("--swap-refine", swap_refine,
                          "maximize pairwise exchanges at the optimum: off | "
                          "on | auto (default auto)");
    solve_cmd->add_option("--backend", config.external_solver,
                          "external SAT solver command (default: embedded)");
    solve_cmd->add_option("--solver-seed", config.solver_seed,
                          "embedded solver branching seed (0 = deterministic "
                          "without randomness)");
    solve_cmd->add_option("--time-limit", config.time_limit_seconds,
                          "wall-clock budget in seconds for the whole run");
    solve_cmd->add_option("--emit-cnf", config.emit_cnf_dir,
                          "directory for DIMACS instances and variable maps");
    solve_cmd->add_option("--emit-alloy", config.emit_alloy_path,
                          "write the relational model of the solved instance "
                          "here");
    solve_cmd->add_option("--json", json_path,
                          "write the JSON report here ('-' for stdout)");
    solve_cmd->add_flag("--table,!--no-table", show_table,
                        "print the per-state table (default on)");

    std::string dimacs_path;
    std::uint64_t sat_seed = 0;
    double sat_limit = 0.0;
    CLI::App* sat_cmd = app.add_subcommand("sat", "Decide a DIMACS CNF file");
    sat_cmd->add_option("input", dimacs_path, "DIMACS CNF file")->required();
    sat_cmd->add_option("--solver-seed", sat_seed, "branching seed");
    sat_cmd->add_option("--time-limit", sat_limit, "seconds, 0 = unlimited");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (*solve_cmd)
            return run_solve(config, alloc_spec, strategy, swap_refine,
                             json_path, show_table);
        return run_sat(dimacs_path, sat_seed, sat_limit);
    } catch (const TfcError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return exit_parse;
    } catch (const FileError& e) {
        std::cerr << "file error: " << e.what() << "\n";
        return exit_parse;
    } catch (const ValidationFailure& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return exit_validation;
    } catch (const AllocationError& e) {
        std::cerr << "allocation error: " << e.what() << "\n";
        return exit_validation;
    } catch (const SearchInfeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return exit_validation;
    } catch (const SolveTimeout& e) {
        std::cerr << "timeout: " << e.what() << "\n";
        return exit_timeout;
    } catch (const BackendFailure& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return exit_backend;
    } catch (const OutputUnparsable& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return exit_backend;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_internal;
    }
}
