#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcdist/cnf.hpp"

namespace qcdist {

struct SolverStats {
    std::uint64_t decisions = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t propagations = 0;
    double seconds = 0.0;
};

enum class SatStatus { satisfiable, unsatisfiable };

struct SatResult {
    SatStatus status = SatStatus::unsatisfiable;
    /// Indexed by variable id (entry 0 unused); empty when unsatisfiable.
    std::vector<bool> model;
    SolverStats stats;

    bool sat() const { return status == SatStatus::satisfiable; }
};

/// Wall-clock budget exhausted before a verdict was reached. Distinct from
/// an UNSAT answer.
struct SolveTimeout : std::runtime_error {
    explicit SolveTimeout(const std::string& what) : std::runtime_error(what) {}
};

/// External solver process failed to start or exited abnormally; `detail`
/// carries captured stderr when available.
struct BackendFailure : std::runtime_error {
    explicit BackendFailure(const std::string& what) : std::runtime_error(what) {}
};

/// External solver produced output that does not follow the DIMACS
/// `s`/`v` line convention.
struct OutputUnparsable : std::runtime_error {
    explicit OutputUnparsable(const std::string& what) : std::runtime_error(what) {}
};

struct SolveConfig {
    /// Branching seed. 0 disables randomized decisions entirely; any fixed
    /// value yields bit-reproducible runs.
    std::uint64_t seed = 0;
    /// 0 means no limit.
    double time_limit_seconds = 0.0;
};

/// Decides `formula` with the embedded CDCL solver (two-watched literals,
/// activity-driven branching, Luby restarts, first-UIP clause learning).
/// A SAT model is checked against every clause before it is returned.
SatResult solve(const CnfFormula& formula, const SolveConfig& config = {});

/// Runs `solver_command <dimacs_path>` and parses the standard
/// `s SATISFIABLE` / `s UNSATISFIABLE` answer with `v` model lines.
/// When `verify_against` is given, a SAT model is checked against it.
SatResult solve_external(const std::string& dimacs_path,
                         const std::string& solver_command,
                         const CnfFormula* verify_against = nullptr);

}  // namespace qcdist
