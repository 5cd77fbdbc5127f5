#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "qcdist/circuit.hpp"
#include "qcdist/encoder.hpp"
#include "qcdist/network.hpp"

namespace qcdist {

/// Instance is beyond the exhaustive-search guard (k^n <= 100000 and
/// layer count <= 30).
struct OracleTooLarge : std::runtime_error {
    explicit OracleTooLarge(const std::string& what) : std::runtime_error(what) {}
};

/// Some layer admits no capacity-valid localizing allocation. Cannot happen
/// when validate() passed.
struct OracleInfeasible : std::runtime_error {
    explicit OracleInfeasible(const std::string& what)
        : std::runtime_error(what) {}
};

struct OracleResult {
    int min_moves = 0;
    AssignmentSequence witness;
};

/// Exact minimum of total moved qubits, by layered shortest path over all
/// capacity-valid allocations (edge weight = Hamming distance between
/// placements). The witness is the lexicographically smallest optimal
/// sequence, chosen greedily from the back so golden files stay stable.
OracleResult oracle_minimum(const CircuitGraph& circuit, const NetworkSpec& net,
                            const Allocation& initial);

/// Exact decision form: true iff some sequence satisfies all supplied
/// bounds at once. Tracks (moves, vacancy, cost) vectors per state with
/// Pareto pruning; vacancy counts states 1..L, cost uses the network
/// matrix or unit cost.
bool oracle_feasible(const CircuitGraph& circuit, const NetworkSpec& net,
                     const Allocation& initial, int teleport_bound,
                     std::optional<int> vacancy_bound = std::nullopt,
                     std::optional<int> cost_bound = std::nullopt);

}  // namespace qcdist
