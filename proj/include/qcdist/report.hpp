#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcdist/strategies.hpp"

namespace qcdist {

/// Circuit/network compatibility check failed; carries the diagnostics.
struct ValidationFailure : std::runtime_error {
    explicit ValidationFailure(const std::string& what)
        : std::runtime_error(what) {}
};

/// A file could not be opened for reading or writing.
struct FileError : std::runtime_error {
    explicit FileError(const std::string& what) : std::runtime_error(what) {}
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

enum class AllocPolicy { in_order, random_seeded, explicit_file };

std::string to_string(AllocPolicy policy);
std::string to_string(SearchKind kind);
std::string to_string(SwapRefine refine);
AllocPolicy alloc_policy_from_string(const std::string& s);
SearchKind search_kind_from_string(const std::string& s);
SwapRefine swap_refine_from_string(const std::string& s);

/// Everything one optimization run depends on. `capacities` may hold one
/// value (applied to every machine) or one value per machine.
struct RunConfig {
    std::string input_path;
    int machines = 2;
    std::vector<int> capacities;
    AllocPolicy policy = AllocPolicy::in_order;
    std::uint64_t alloc_seed = 0;
    std::string allocation_file;
    int window_size = 10;
    SearchKind strategy = SearchKind::binary;
    int history_length = 10;
    bool balance = false;
    std::string cost_matrix_path;
    SwapRefine swap_refine = SwapRefine::automatic;
    std::string external_solver;  // empty: embedded backend
    std::uint64_t solver_seed = 0;
    double time_limit_seconds = 0.0;
    std::string emit_cnf_dir;
    std::string emit_alloy_path;

    bool operator==(const RunConfig&) const = default;
};

struct SubproblemSummary {
    int layer_begin = 0;
    int layer_end = 0;
    int t_star = 0;
    std::optional<int> e_star;
    std::optional<int> w_star;
    int probes = 0;

    bool operator==(const SubproblemSummary&) const = default;
};

struct Timing {
    double parse_seconds = 0.0;
    double solve_seconds = 0.0;
    double total_seconds = 0.0;

    bool operator==(const Timing&) const = default;
};

struct SolutionReport {
    int schema_version = 1;
    RunConfig config;
    int qubit_count = 0;
    int layer_count = 0;
    int gate_count = 0;
    std::vector<std::string> qubit_names;
    std::string prng_note;
    Solution solution;
    std::vector<SubproblemSummary> subproblems;
    Timing timing;

    bool operator==(const SolutionReport& o) const;
};

/// Full pipeline: parse the circuit, drop unary gates, pack layers, build
/// the network and initial allocation, optimize, account. Throws the
/// originating module's exception on any failure.
SolutionReport run(const RunConfig& config);

/// Fixed-width table, one row per state: 1-based state index, teleported
/// qubits entering the state (swap-adjusted, annotated `(swap)` when a
/// pairwise exchange was grouped), and each machine's qubits.
std::string render_table(const SolutionReport& report);

std::string to_json(const SolutionReport& report);
SolutionReport report_from_json(const std::string& text);

}  // namespace qcdist
