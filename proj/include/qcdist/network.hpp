#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcdist/circuit.hpp"

namespace qcdist {

/// The machine network: per-machine qubit capacities and, for heterogeneous
/// links, a (possibly asymmetric) teleport-cost matrix with zero diagonal.
/// Topology is fully connected; absent cost matrix means unit cost per move.
struct NetworkSpec {
    int machine_count = 0;
    std::vector<int> capacities;
    std::optional<std::vector<std::vector<int>>> cost_matrix;

    bool homogeneous() const;

    bool operator==(const NetworkSpec&) const = default;
};

/// Throws std::invalid_argument when the network is self-inconsistent
/// (capacity list size, non-positive capacities, malformed cost matrix).
void check_network(const NetworkSpec& net);

/// Total qubit-to-machine map; placement[q] is q's machine.
struct Allocation {
    std::vector<int> placement;

    bool operator==(const Allocation&) const = default;
};

struct ValidationResult {
    bool ok = true;
    std::vector<std::string> problems;
};

/// A network can host a circuit iff total capacity covers every qubit and
/// some machine is large enough for the widest gate. Violations come back as
/// diagnostics, not exceptions.
ValidationResult validate(const NetworkSpec& net, const CircuitGraph& circuit);

/// Fills machine 0 to capacity, then machine 1, and so on.
Allocation allocate_in_order(const NetworkSpec& net, int qubit_count);

/// Capacity-respecting random placement: the capacity-expanded slot list is
/// shuffled by a Fisher-Yates pass over an mt19937_64 stream, then qubit i
/// takes slot i. Same seed, same allocation, on every platform.
Allocation allocate_random(const NetworkSpec& net, int qubit_count,
                           std::uint64_t seed);

enum class AllocationErrorCode { not_total, capacity_exceeded, duplicate_qubit };

struct AllocationError : std::runtime_error {
    AllocationErrorCode code;
    AllocationError(AllocationErrorCode code, const std::string& what)
        : std::runtime_error(what), code(code) {}
};

/// Builds an Allocation from explicit (qubit, machine) pairs; the pairs must
/// cover every qubit exactly once within capacity.
Allocation explicit_allocation(const std::vector<std::pair<int, int>>& pairs,
                               const NetworkSpec& net, int qubit_count);

/// True when `alloc` is total over `qubit_count` qubits and respects every
/// machine capacity.
bool allocation_valid(const Allocation& alloc, const NetworkSpec& net,
                      int qubit_count);

/// Number of qubits whose machine differs between the two allocations.
int moved_qubits(const Allocation& from, const Allocation& to);

/// Number of machines holding no qubit.
int vacant_machines(const Allocation& alloc, int machine_count);

/// Sum of per-qubit link costs for one transition.
long long transition_cost(const Allocation& from, const Allocation& to,
                          const std::vector<std::vector<int>>& cost_matrix);

/// The k-by-k matrix with zero diagonal and 1 everywhere else.
std::vector<std::vector<int>> unit_cost_matrix(int machine_count);

/// Cost matrix file: first line k, then k rows of k non-negative integers
/// (row = source machine); the diagonal must be zero.
std::vector<std::vector<int>> parse_cost_matrix(const std::string& text);

/// Allocation file: one `<qubit> <machine>` pair per line, 0-based indices;
/// `#` comments and blank lines ignored.
std::vector<std::pair<int, int>> parse_allocation_pairs(const std::string& text);

}  // namespace qcdist
