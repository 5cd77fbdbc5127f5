#include "qcdist/network.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace qcdist {

bool NetworkSpec::homogeneous() const {
    return std::adjacent_find(capacities.begin(), capacities.end(),
                              std::not_equal_to<>()) == capacities.end();
}

void check_network(const NetworkSpec& net) {
    if (net.machine_count < 1)
        throw std::invalid_argument("need at least one machine");
    if (static_cast<int>(net.capacities.size()) != net.machine_count)
        throw std::invalid_argument("capacity list length != machine count");
    for (int c : net.capacities)
        if (c < 1) throw std::invalid_argument("machine capacity must be positive");
    if (net.cost_matrix) {
        const auto& m = *net.cost_matrix;
        if (static_cast<int>(m.size()) != net.machine_count)
            throw std::invalid_argument("cost matrix row count != machine count");
        for (int i = 0; i < net.machine_count; ++i) {
            if (static_cast<int>(m[i].size()) != net.machine_count)
                throw std::invalid_argument("cost matrix is not square");
            if (m[i][i] != 0)
                throw std::invalid_argument("cost matrix diagonal must be zero");
            for (int v : m[i])
                if (v < 0) throw std::invalid_argument("negative teleport cost");
        }
    }
}

ValidationResult validate(const NetworkSpec& net, const CircuitGraph& circuit) {
    check_network(net);
    ValidationResult result;
    long long total =
        std::accumulate(net.capacities.begin(), net.capacities.end(), 0LL);
    if (total < circuit.qubit_count) {
        result.ok = false;
        result.problems.push_back(
            "total capacity " + std::to_string(total) + " cannot hold " +
            std::to_string(circuit.qubit_count) + " qubits");
    }
    int widest = circuit.max_arity();
    int largest = *std::max_element(net.capacities.begin(), net.capacities.end());
    if (widest > largest) {
        result.ok = false;
        result.problems.push_back(
            "widest gate touches " + std::to_string(widest) +
            " qubits but the largest machine holds " + std::to_string(largest));
    }
    return result;
}

Allocation allocate_in_order(const NetworkSpec& net, int qubit_count) {
    check_network(net);
    Allocation alloc;
    alloc.placement.reserve(qubit_count);
    int machine = 0, used = 0;
    for (int q = 0; q < qubit_count; ++q) {
        while (machine < net.machine_count && used >= net.capacities[machine]) {
            ++machine;
            used = 0;
        }
        if (machine >= net.machine_count)
            throw std::invalid_argument("network too small for qubit count");
        alloc.placement.push_back(machine);
        ++used;
    }
    return alloc;
}

Allocation allocate_random(const NetworkSpec& net, int qubit_count,
                           std::uint64_t seed) {
    check_network(net);
    std::vector<int> slots;
    for (int m = 0; m < net.machine_count; ++m)
        slots.insert(slots.end(), net.capacities[m], m);
    if (static_cast<int>(slots.size()) < qubit_count)
        throw std::invalid_argument("network too small for qubit count");
    // Hand-rolled Fisher-Yates: std::shuffle's draw sequence is
    // implementation-defined, and seeds must reproduce across platforms.
    std::mt19937_64 rng(seed);
    for (std::size_t i = slots.size() - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(slots[i], slots[j]);
    }
    Allocation alloc;
    alloc.placement.assign(slots.begin(), slots.begin() + qubit_count);
    return alloc;
}

Allocation explicit_allocation(const std::vector<std::pair<int, int>>& pairs,
                               const NetworkSpec& net, int qubit_count) {
    check_network(net);
    Allocation alloc;
    alloc.placement.assign(qubit_count, -1);
    std::vector<int> load(net.machine_count, 0);
    for (auto [q, m] : pairs) {
        if (q < 0 || q >= qubit_count)
            throw AllocationError(AllocationErrorCode::not_total,
                                  "qubit index " + std::to_string(q) +
                                      " out of range");
        if (m < 0 || m >= net.machine_count)
            throw AllocationError(AllocationErrorCode::capacity_exceeded,
                                  "machine index " + std::to_string(m) +
                                      " out of range");
        if (alloc.placement[q] != -1)
            throw AllocationError(AllocationErrorCode::duplicate_qubit,
                                  "qubit " + std::to_string(q) +
                                      " assigned twice");
        if (++load[m] > net.capacities[m])
            throw AllocationError(AllocationErrorCode::capacity_exceeded,
                                  "machine " + std::to_string(m) +
                                      " over capacity");
        alloc.placement[q] = m;
    }
    for (int q = 0; q < qubit_count; ++q)
        if (alloc.placement[q] == -1)
            throw AllocationError(AllocationErrorCode::not_total,
                                  "qubit " + std::to_string(q) + " unassigned");
    return alloc;
}

bool allocation_valid(const Allocation& alloc, const NetworkSpec& net,
                      int qubit_count) {
    if (static_cast<int>(alloc.placement.size()) != qubit_count) return false;
    std::vector<int> load(net.machine_count, 0);
    for (int m : alloc.placement) {
        if (m < 0 || m >= net.machine_count) return false;
        if (++load[m] > net.capacities[m]) return false;
    }
    return true;
}

int moved_qubits(const Allocation& from, const Allocation& to) {
    int moved = 0;
    for (std::size_t q = 0; q < from.placement.size(); ++q)
        if (from.placement[q] != to.placement[q]) ++moved;
    return moved;
}

int vacant_machines(const Allocation& alloc, int machine_count) {
    std::vector<char> used(machine_count, 0);
    for (int m : alloc.placement) used[m] = 1;
    int vacant = 0;
    for (char u : used)
        if (!u) ++vacant;
    return vacant;
}

long long transition_cost(const Allocation& from, const Allocation& to,
                          const std::vector<std::vector<int>>& cost_matrix) {
    long long total = 0;
    for (std::size_t q = 0; q < from.placement.size(); ++q)
        total += cost_matrix[from.placement[q]][to.placement[q]];
    return total;
}

std::vector<std::vector<int>> unit_cost_matrix(int machine_count) {
    std::vector<std::vector<int>> m(machine_count,
                                    std::vector<int>(machine_count, 1));
    for (int i = 0; i < machine_count; ++i) m[i][i] = 0;
    return m;
}

std::vector<std::vector<int>> parse_cost_matrix(const std::string& text) {
    std::istringstream in(text);
    int k = 0;
    if (!(in >> k) || k < 1)
        throw std::invalid_argument("cost matrix: missing machine count");
    std::vector<std::vector<int>> matrix(k, std::vector<int>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (!(in >> matrix[i][j]))
                throw std::invalid_argument("cost matrix: expected " +
                                            std::to_string(k * k) + " entries");
    for (int i = 0; i < k; ++i) {
        if (matrix[i][i] != 0)
            throw std::invalid_argument("cost matrix: diagonal must be zero");
        for (int j = 0; j < k; ++j)
            if (matrix[i][j] < 0)
                throw std::invalid_argument("cost matrix: negative entry");
    }
    return matrix;
}

std::vector<std::pair<int, int>> parse_allocation_pairs(const std::string& text) {
    std::vector<std::pair<int, int>> pairs;
    std::istringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream in(line);
        int q, m;
        if (in >> q) {
            if (!(in >> m))
                throw std::invalid_argument("allocation line " +
                                            std::to_string(line_no) +
                                            ": expected `<qubit> <machine>`");
            pairs.emplace_back(q, m);
        }
    }
    return pairs;
}

}  // namespace qcdist
