#include "qcdist/circuit.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qcdist {

Gate make_gate(std::vector<int> operands) {
    if (operands.empty()) throw std::invalid_argument("gate with no operands");
    std::sort(operands.begin(), operands.end());
    if (std::adjacent_find(operands.begin(), operands.end()) != operands.end())
        throw std::invalid_argument("gate with repeated operand");
    if (operands.front() < 0)
        throw std::invalid_argument("negative qubit index");
    return Gate{std::move(operands)};
}

int CircuitGraph::max_arity() const {
    int widest = 0;
    for (const auto& layer : layers)
        for (const auto& gate : layer.gates) widest = std::max(widest, gate.arity());
    return widest;
}

std::vector<Gate> drop_unary_gates(const std::vector<Gate>& gates) {
    std::vector<Gate> kept;
    for (const auto& g : gates)
        if (g.arity() >= 2) kept.push_back(g);
    return kept;
}

CircuitGraph pack_layers(const std::vector<Gate>& gates, int qubit_count) {
    CircuitGraph circuit;
    circuit.qubit_count = qubit_count;
    // next_free[q] = first layer where qubit q is unoccupied. Placing a gate
    // at max(next_free) over its operands is exactly "earliest layer with no
    // operand clash, after every earlier gate sharing a qubit".
    std::vector<int> next_free(qubit_count, 0);
    for (const auto& g : gates) {
        if (g.arity() < 2) throw std::invalid_argument("unary gate not dropped");
        int at = 0;
        for (int q : g.operands) {
            if (q >= qubit_count) throw std::invalid_argument("operand out of range");
            at = std::max(at, next_free[q]);
        }
        if (at == circuit.layer_count())
            circuit.layers.push_back({at, {}});
        circuit.layers[at].gates.push_back(g);
        for (int q : g.operands) next_free[q] = at + 1;
    }
    return circuit;
}

CircuitGraph slice_layers(const CircuitGraph& circuit, int begin, int end) {
    if (begin < 0 || end > circuit.layer_count() || begin > end)
        throw std::out_of_range("layer slice out of range");
    CircuitGraph window;
    window.qubit_count = circuit.qubit_count;
    for (int i = begin; i < end; ++i) {
        Layer layer = circuit.layers[i];
        layer.index = i - begin;
        window.layers.push_back(std::move(layer));
    }
    return window;
}

std::vector<std::pair<int, int>> edge_chain(const Gate& g) {
    if (g.arity() < 2) throw std::invalid_argument("edge_chain needs arity >= 2");
    std::vector<std::pair<int, int>> chain;
    for (std::size_t i = 0; i + 1 < g.operands.size(); ++i)
        chain.emplace_back(g.operands[i], g.operands[i + 1]);
    return chain;
}

std::string dump_layers(const CircuitGraph& circuit) {
    std::ostringstream out;
    for (const auto& layer : circuit.layers) {
        out << "layer " << layer.index << ": ";
        for (const auto& gate : layer.gates) {
            out << "(";
            for (std::size_t i = 0; i < gate.operands.size(); ++i) {
                if (i) out << ",";
                out << "q" << gate.operands[i] + 1;
            }
            out << ")";
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace qcdist
