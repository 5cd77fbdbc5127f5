#pragma once

#include <optional>
#include <string>

#include "qcdist/circuit.hpp"
#include "qcdist/network.hpp"

namespace qcdist {

/// finalLayer bounds: teleports always, vacancy/cost when their relations
/// are wanted in the model.
struct AlloyBounds {
    int teleports = 0;
    std::optional<int> vacancy;
    std::optional<int> cost;
};

struct AlloyOptions {
    /// false: first atom carries layer 0's edges plus the initial
    /// allocation (the convention of the original relational models, layer
    /// count atoms). true: a dedicated edge-free initial atom precedes the
    /// layers (layer count + 1 atoms).
    bool shifted = false;
};

struct AlloyModelText {
    std::string text;
    int atom_count = 0;
    int int_bits = 0;
};

/// Renders the circuit/network-specific relational model: singleton qubit
/// and machine signatures, allocation and capacity facts, per-layer edges
/// from ascending chains, the transition predicate, and one run command.
/// Byte-stable for identical inputs.
AlloyModelText emit_model(const CircuitGraph& circuit, const NetworkSpec& net,
                          const Allocation& initial, const AlloyBounds& bounds,
                          const AlloyOptions& options = {});

}  // namespace qcdist
