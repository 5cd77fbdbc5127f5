#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qcdist {

/// A gate reduced to its connectivity: the set of qubits it touches.
/// Operand indices are distinct and kept in ascending order.
struct Gate {
    std::vector<int> operands;

    int arity() const { return static_cast<int>(operands.size()); }

    bool operator==(const Gate&) const = default;
};

/// Builds a Gate from an arbitrary operand list, normalizing order.
/// Throws std::invalid_argument on duplicates or an empty list.
Gate make_gate(std::vector<int> operands);

struct Layer {
    int index = 0;
    std::vector<Gate> gates;

    bool operator==(const Layer&) const = default;
};

/// A circuit abstracted to its co-location requirements: an ordered list of
/// layers, each a set of gates over pairwise-disjoint qubits.
struct CircuitGraph {
    int qubit_count = 0;
    std::vector<Layer> layers;

    int layer_count() const { return static_cast<int>(layers.size()); }
    int max_arity() const;

    bool operator==(const CircuitGraph&) const = default;
};

/// Removes gates touching a single qubit; such gates never force a move.
/// Order of the surviving gates is preserved.
std::vector<Gate> drop_unary_gates(const std::vector<Gate>& gates);

/// Greedy as-soon-as-possible layering: each gate is placed into the earliest
/// layer where its operands are free, never overtaking a gate it shares a
/// qubit with. Requires every gate to have arity >= 2 (run drop_unary_gates
/// first).
CircuitGraph pack_layers(const std::vector<Gate>& gates, int qubit_count);

/// Returns the slice of `circuit` covering layers [begin, end), reindexed
/// from 0.
CircuitGraph slice_layers(const CircuitGraph& circuit, int begin, int end);

/// Chains a gate's operands in ascending order into a path of pairs:
/// (a1,a2),(a2,a3),...  Transitive connectivity of the path makes all
/// operands co-located exactly when each pair is.
std::vector<std::pair<int, int>> edge_chain(const Gate& g);

/// Debug rendering, one line per layer: `layer 0: (q1,q2)(q3,q4)`.
/// Qubit names are 1-based to match circuit-diagram conventions.
std::string dump_layers(const CircuitGraph& circuit);

}  // namespace qcdist
