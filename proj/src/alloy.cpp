#include "qcdist/alloy.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qcdist {
namespace {

std::string qubit_name(int q) { return "q" + std::to_string(q + 1); }
std::string machine_name(int m) { return "M" + std::to_string(m + 1); }

std::string name_list(int count, const std::string& prefix) {
    std::ostringstream out;
    for (int i = 0; i < count; ++i) {
        if (i) out << ",";
        out << prefix << i + 1;
    }
    return out.str();
}

std::string layer_edges(const Layer& layer) {
    std::ostringstream out;
    bool first = true;
    for (const Gate& g : layer.gates)
        for (auto [a, b] : edge_chain(g)) {
            if (!first) out << "+";
            out << "(" << qubit_name(a) << "->" << qubit_name(b) << ")";
            first = false;
        }
    return out.str();
}

/// Smallest two's-complement width whose positive range clears `value`.
int bits_for(long long value) {
    int bits = 1;
    while ((1LL << (bits - 1)) <= value) ++bits;
    return bits;
}

}  // namespace

AlloyModelText emit_model(const CircuitGraph& circuit, const NetworkSpec& net,
                          const Allocation& initial, const AlloyBounds& bounds,
                          const AlloyOptions& options) {
    check_network(net);
    const int n = circuit.qubit_count;
    const int k = net.machine_count;
    const int L = circuit.layer_count();
    if (L == 0) throw std::invalid_argument("cannot emit a model with no layers");
    if (n > 100 || k > 50 || L > 1000)
        throw std::invalid_argument("too many atoms for singleton emission");
    if (!allocation_valid(initial, net, n))
        throw std::invalid_argument("initial allocation invalid");

    const bool balance = bounds.vacancy.has_value();
    const bool hetero = bounds.cost.has_value();
    const auto matrix =
        net.cost_matrix ? *net.cost_matrix : unit_cost_matrix(k);

    AlloyModelText model;
    model.atom_count = options.shifted ? L + 1 : L;

    long long counter_reach = bounds.teleports + n;
    if (balance) counter_reach = std::max(counter_reach,
                                          static_cast<long long>(*bounds.vacancy) + k);
    if (hetero) {
        int max_entry = 0;
        for (const auto& row : matrix)
            for (int v : row) max_entry = std::max(max_entry, v);
        counter_reach = std::max(
            counter_reach, *bounds.cost + static_cast<long long>(n) * max_entry);
    }
    model.int_bits = bits_for(counter_reach);

    std::ostringstream out;
    out << "module teleport\n";
    out << "open util/ordering[circGraph] as grph\n";
    out << "open util/integer\n\n";

    out << "abstract sig Qubit { }\n";
    out << "one sig " << name_list(n, "q") << " extends Qubit{}\n\n";

    if (hetero) {
        out << "abstract sig Machine {\n  costTo:Machine->Int }\n";
        out << "fact {\n costTo = ";
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                if (i || j) out << "+";
                if (j == 0 && i) out << "\n  ";
                out << "(" << machine_name(i) << " -> " << machine_name(j)
                    << " ->" << matrix[i][j] << ")";
            }
        out << " }\n";
    } else {
        out << "abstract sig Machine { }\n";
    }
    out << "one sig " << name_list(k, "M") << " extends Machine{}\n\n";

    out << "sig circGraph{\n";
    out << "  edges:Qubit->Qubit,\n";
    out << "  location:Qubit->Machine,\n";
    out << "  numTele:Int";
    if (balance) out << ",\n  emptyMachines:Int";
    if (hetero) out << ",\n  teleCost:Int";
    out << "\n}\n";

    out << "// Each qubit must be on exactly one machine.\n";
    out << "fact qubitAlloc {\n";
    out << "  all q:Qubit,c:circGraph|#c.location[q] =1}\n";
    if (net.homogeneous()) {
        out << "// Capacity of each machine is at most "
            << net.capacities[0] << " qubits.\n";
        out << "fact mCap {\n";
        out << " all c:circGraph,m:Machine| #(c.location).m < "
            << net.capacities[0] + 1 << "}\n\n";
    } else {
        out << "// Per-machine qubit capacities.\n";
        out << "fact mCap {\n";
        for (int m = 0; m < k; ++m)
            out << " all c:circGraph| #(c.location)." << machine_name(m)
                << " < " << net.capacities[m] + 1 << "\n";
        out << "}\n\n";
    }

    out << "fact CircuitGraph {\n";
    out << "  let c0=grph/first|\n";
    std::string init_counters = "(c0.numTele=0)";
    if (balance) init_counters += " &&(c0.emptyMachines=0)";
    if (hetero) init_counters += " &&(c0.teleCost=0)";
    if (options.shifted) {
        out << "  no c0.edges&&" << init_counters << " &&\n";
    } else {
        out << "  c0.edges=" << layer_edges(circuit.layers[0]) << "&&"
            << init_counters << " &&\n";
    }
    out << "  c0.location=";
    for (int q = 0; q < n; ++q) {
        if (q) out << "+";
        out << "(" << qubit_name(q) << "->"
            << machine_name(initial.placement[q]) << ")";
    }
    const int first_chained = options.shifted ? 0 : 1;
    for (int j = first_chained; j < L; ++j) {
        int atom = options.shifted ? j + 1 : j;
        out << " &&\n  let c" << atom << "=c" << atom - 1 << ".next|c" << atom
            << ".edges=" << layer_edges(circuit.layers[j]);
    }
    out << " }\n\n";

    out << "pred teleport[loc:Qubit->Machine,\n";
    out << "  r:Qubit->Qubit,uloc:Qubit->Machine,\n";
    out << "  tele:Int,utele:Int";
    if (balance) out << ",\n  emptyMachines:Int,uEmptyMachines:Int";
    if (hetero) out << ",\n  totCost:Int,uTotCost:Int";
    out << "] {\n";
    out << " all disj q0,q1:Qubit|\n";
    out << "   ((q0->q1 in r)) implies q0.uloc=q1.uloc\n";
    out << " utele=plus[tele,#(uloc-loc)]";
    if (balance)
        out << "\n uEmptyMachines=plus[emptyMachines,#(Machine-Qubit.uloc)]";
    if (hetero)
        out << "\n uTotCost=plus[totCost,sum q:Qubit|((q.loc).costTo)[q.uloc]]";
    out << "}\n\n";

    out << "fact layerTransition {\n";
    out << "  all c:circGraph,uc:grph/next[c] {\n";
    out << "  teleport[c.location,uc.edges,uc.location,c.numTele,uc.numTele";
    if (balance) out << ",\n    c.emptyMachines,uc.emptyMachines";
    if (hetero) out << ",\n    c.teleCost,uc.teleCost";
    out << "] }}\n\n";

    if (!balance && !hetero) {
        out << "pred finalLayer {lte[grph/last.numTele, " << bounds.teleports
            << "] }\n\n";
    } else {
        out << "pred finalLayer {\n";
        out << "  lte[grph/last.numTele," << bounds.teleports << "]\n";
        if (balance)
            out << "  lte[grph/last.emptyMachines," << *bounds.vacancy << "]\n";
        if (hetero) out << "  lte[grph/last.teleCost," << *bounds.cost << "]\n";
        out << "}\n\n";
    }

    out << "run finalLayer for " << model.atom_count << " circGraph, "
        << model.int_bits << " Int\n";
    model.text = out.str();
    return model;
}

}  // namespace qcdist
