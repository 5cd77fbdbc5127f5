#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcdist/circuit.hpp"
#include "qcdist/cnf.hpp"
#include "qcdist/network.hpp"

namespace qcdist {

/// One bounded feasibility question: can the window's gates all be made
/// local with at most `teleport_bound` moved qubits (and, when present, at
/// most `vacancy_bound` machine-empty states and `cost_bound` weighted
/// teleport cost) starting from `initial`?
struct DecisionInstance {
    CircuitGraph window;
    NetworkSpec net;
    Allocation initial;
    int teleport_bound = 0;
    std::optional<int> vacancy_bound;
    std::optional<int> cost_bound;
};

/// Assignments over the window: states[0] is the initial allocation and
/// states[i] (i >= 1) is in effect while window layer i-1 executes.
struct AssignmentSequence {
    std::vector<Allocation> states;

    bool operator==(const AssignmentSequence&) const = default;
};

/// Maps (state, qubit, machine) and (state, qubit) to CNF variable ids.
/// Placement variables occupy a contiguous block starting at 1 in a fixed
/// layout, so a model can be decoded knowing only the instance dimensions.
struct StateIndexing {
    int state_count = 0;  // includes state 0
    int qubit_count = 0;
    int machine_count = 0;
    int first_move_var = 0;     // 0 when absent
    int first_vacancy_var = 0;  // 0 when absent

    /// "qubit q sits on machine m in state i"; i in 0..state_count-1.
    int placement_var(int state, int qubit, int machine) const {
        return 1 + (state * qubit_count + qubit) * machine_count + machine;
    }
    /// "qubit q changed machine entering state i"; i in 1..state_count-1.
    int move_var(int state, int qubit) const {
        return first_move_var + (state - 1) * qubit_count + qubit;
    }
    /// "machine m holds no qubit in state i"; i in 1..state_count-1.
    int vacancy_var(int state, int machine) const {
        return first_vacancy_var + (state - 1) * machine_count + machine;
    }
};

struct EncodeResult {
    CnfFormula formula;
    StateIndexing vars;
};

/// A decoded model contradicts the exactly-one placement constraint;
/// only an encoder defect can cause this.
struct ModelInconsistent : std::logic_error {
    explicit ModelInconsistent(const std::string& what) : std::logic_error(what) {}
};

/// Instance violates its preconditions (network cannot host the circuit,
/// initial allocation invalid, empty window).
struct InstanceInvalid : std::invalid_argument {
    explicit InstanceInvalid(const std::string& what)
        : std::invalid_argument(what) {}
};

/// Compiles the instance to CNF. The formula is satisfiable exactly when a
/// state sequence exists meeting gate locality, machine capacities, and all
/// supplied bounds; any model decodes to one such sequence.
EncodeResult encode(const DecisionInstance& instance);

/// Reads the placement block of `model` back into an AssignmentSequence.
AssignmentSequence decode(const DecisionInstance& instance,
                          const std::vector<bool>& model);

/// Sidecar that lets external-solver models be interpreted: one
/// `i q m var_id` row per placement variable.
std::string emit_varmap(const StateIndexing& vars);

}  // namespace qcdist
