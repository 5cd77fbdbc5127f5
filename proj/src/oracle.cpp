#include "qcdist/oracle.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>

namespace qcdist {
namespace {

constexpr long long kMaxStates = 100000;
constexpr int kMaxLayers = 30;

void check_guard(const CircuitGraph& circuit, const NetworkSpec& net) {
    check_network(net);
    long long states = 1;
    for (int q = 0; q < circuit.qubit_count; ++q) {
        states *= net.machine_count;
        if (states > kMaxStates)
            throw OracleTooLarge("k^n exceeds the exhaustive-search guard");
    }
    if (circuit.layer_count() > kMaxLayers)
        throw OracleTooLarge("layer count exceeds the exhaustive-search guard");
}

/// All capacity-valid placements, in lexicographic order.
std::vector<std::vector<int>> enumerate_allocations(const NetworkSpec& net,
                                                    int qubit_count) {
    std::vector<std::vector<int>> out;
    std::vector<int> placement(qubit_count, 0);
    std::vector<int> load(net.machine_count, 0);
    for (;;) {
        bool fits = true;
        std::fill(load.begin(), load.end(), 0);
        for (int m : placement)
            if (++load[m] > net.capacities[m]) {
                fits = false;
                break;
            }
        if (fits) out.push_back(placement);
        int q = qubit_count - 1;
        while (q >= 0 && placement[q] == net.machine_count - 1) placement[q--] = 0;
        if (q < 0) break;
        ++placement[q];
    }
    return out;
}

bool localizes(const std::vector<int>& placement, const Layer& layer) {
    for (const Gate& g : layer.gates) {
        int host = placement[g.operands.front()];
        for (int q : g.operands)
            if (placement[q] != host) return false;
    }
    return true;
}

int hamming(const std::vector<int>& a, const std::vector<int>& b) {
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++d;
    return d;
}

}  // namespace

OracleResult oracle_minimum(const CircuitGraph& circuit, const NetworkSpec& net,
                            const Allocation& initial) {
    check_guard(circuit, net);
    const int L = circuit.layer_count();
    OracleResult result;
    if (L == 0) {
        result.witness.states = {initial};
        return result;
    }

    auto all = enumerate_allocations(net, circuit.qubit_count);
    // candidates[j] = indices into `all` that localize layer j.
    std::vector<std::vector<int>> candidates(L);
    for (int j = 0; j < L; ++j) {
        for (int a = 0; a < static_cast<int>(all.size()); ++a)
            if (localizes(all[a], circuit.layers[j])) candidates[j].push_back(a);
        if (candidates[j].empty())
            throw OracleInfeasible("no allocation localizes layer " +
                                   std::to_string(j));
    }

    // dist[a] = cheapest move total reaching allocation `all[a]` at the
    // current layer; parent[j][a] tracks the predecessor for the witness.
    std::vector<int> dist(all.size(), INT_MAX);
    std::vector<std::vector<int>> parent(L);
    std::vector<int> prev_states;

    for (int j = 0; j < L; ++j) {
        std::vector<int> next_dist(all.size(), INT_MAX);
        parent[j].assign(all.size(), -1);
        if (j == 0) {
            for (int a : candidates[0]) {
                next_dist[a] = hamming(initial.placement, all[a]);
                parent[0][a] = -1;
            }
        } else {
            for (int a : candidates[j])
                for (int p : prev_states) {
                    if (dist[p] == INT_MAX) continue;
                    int cost = dist[p] + hamming(all[p], all[a]);
                    // Ties go to the smaller predecessor placement, which is
                    // the smaller index: `all` is in lexicographic order.
                    if (cost < next_dist[a] ||
                        (cost == next_dist[a] && p < parent[j][a])) {
                        next_dist[a] = cost;
                        parent[j][a] = p;
                    }
                }
        }
        dist.swap(next_dist);
        prev_states = candidates[j];
    }

    int best = -1;
    for (int a : candidates[L - 1])
        if (dist[a] != INT_MAX && (best == -1 || dist[a] < dist[best])) best = a;
    if (best == -1) throw OracleInfeasible("no reachable final allocation");
    result.min_moves = dist[best];

    std::vector<int> chain(L);
    for (int j = L - 1, a = best; j >= 0; --j) {
        chain[j] = a;
        a = parent[j][a];
    }
    result.witness.states.push_back(initial);
    for (int j = 0; j < L; ++j)
        result.witness.states.push_back(Allocation{all[chain[j]]});
    return result;
}

bool oracle_feasible(const CircuitGraph& circuit, const NetworkSpec& net,
                     const Allocation& initial, int teleport_bound,
                     std::optional<int> vacancy_bound,
                     std::optional<int> cost_bound) {
    check_guard(circuit, net);
    const int L = circuit.layer_count();
    if (L == 0) return teleport_bound >= 0;

    const auto matrix = net.cost_matrix ? *net.cost_matrix
                                        : unit_cost_matrix(net.machine_count);
    const long long vac_cap = vacancy_bound ? *vacancy_bound : LLONG_MAX;
    const long long cost_cap = cost_bound ? *cost_bound : LLONG_MAX;

    struct Vec {
        long long moves, vac, cost;
        bool dominates(const Vec& o) const {
            return moves <= o.moves && vac <= o.vac && cost <= o.cost;
        }
    };

    auto all = enumerate_allocations(net, circuit.qubit_count);
    auto insert_pareto = [](std::vector<Vec>& set, Vec v) {
        for (const Vec& o : set)
            if (o.dominates(v)) return;
        std::erase_if(set, [&](const Vec& o) { return v.dominates(o); });
        set.push_back(v);
    };

    // fronts[a] = Pareto-minimal (moves, vacancy, cost) vectors reaching
    // allocation a at the current layer, already filtered by the bounds.
    std::vector<std::vector<Vec>> fronts(all.size());
    std::vector<int> live;

    for (int j = 0; j < L; ++j) {
        std::vector<std::vector<Vec>> next(all.size());
        std::vector<int> next_live;
        for (int a = 0; a < static_cast<int>(all.size()); ++a) {
            if (!localizes(all[a], circuit.layers[j])) continue;
            auto extend = [&](const std::vector<int>& from, const Vec& base) {
                Vec v{base.moves + hamming(from, all[a]),
                      base.vac + vacant_machines(Allocation{all[a]},
                                                 net.machine_count),
                      base.cost};
                for (std::size_t q = 0; q < from.size(); ++q)
                    v.cost += matrix[from[q]][all[a][q]];
                if (v.moves > teleport_bound || v.vac > vac_cap ||
                    v.cost > cost_cap)
                    return;
                insert_pareto(next[a], v);
            };
            if (j == 0) {
                extend(initial.placement, Vec{0, 0, 0});
            } else {
                for (int p : live)
                    for (const Vec& base : fronts[p]) extend(all[p], base);
            }
            if (!next[a].empty()) next_live.push_back(a);
        }
        if (next_live.empty()) return false;
        fronts.swap(next);
        live.swap(next_live);
    }
    return true;
}

}  // namespace qcdist
