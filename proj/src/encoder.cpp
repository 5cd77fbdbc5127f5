#include "qcdist/encoder.hpp"

#include <sstream>

namespace qcdist {
namespace {

void require_valid(const DecisionInstance& inst) {
    check_network(inst.net);
    if (inst.window.layer_count() == 0)
        throw InstanceInvalid("window has no layers");
    auto verdict = validate(inst.net, inst.window);
    if (!verdict.ok) throw InstanceInvalid(verdict.problems.front());
    if (!allocation_valid(inst.initial, inst.net, inst.window.qubit_count))
        throw InstanceInvalid("initial allocation is not capacity-valid");
    if (inst.teleport_bound < 0) throw InstanceInvalid("negative teleport bound");
    if (inst.vacancy_bound && *inst.vacancy_bound < 0)
        throw InstanceInvalid("negative vacancy bound");
    if (inst.cost_bound && *inst.cost_bound < 0)
        throw InstanceInvalid("negative cost bound");
}

void add_pairwise_at_most_one(CnfFormula& f, const std::vector<int>& vars) {
    for (std::size_t a = 0; a < vars.size(); ++a)
        for (std::size_t b = a + 1; b < vars.size(); ++b)
            f.add_clause({-vars[a], -vars[b]});
}

}  // namespace

EncodeResult encode(const DecisionInstance& inst) {
    require_valid(inst);
    const int n = inst.window.qubit_count;
    const int k = inst.net.machine_count;
    const int S = inst.window.layer_count();

    EncodeResult result;
    CnfFormula& f = result.formula;
    StateIndexing& vars = result.vars;
    vars.state_count = S + 1;
    vars.qubit_count = n;
    vars.machine_count = k;

    int first_x = f.new_vars((S + 1) * n * k);
    f.annotate("placement", first_x, f.variable_count());
    auto x = [&](int i, int q, int m) { return vars.placement_var(i, q, m); };

    // Each qubit sits on exactly one machine in every state.
    std::vector<int> row(k);
    for (int i = 0; i <= S; ++i)
        for (int q = 0; q < n; ++q) {
            for (int m = 0; m < k; ++m) row[m] = x(i, q, m);
            f.add_clause(row);
            add_pairwise_at_most_one(f, row);
        }

    // State 0 is the given initial allocation.
    for (int q = 0; q < n; ++q)
        f.add_clause({x(0, q, inst.initial.placement[q])});

    // Machine capacities, per state past the pinned initial one.
    for (int i = 1; i <= S; ++i)
        for (int m = 0; m < k; ++m) {
            if (inst.net.capacities[m] >= n) continue;
            std::vector<int> on_m(n);
            for (int q = 0; q < n; ++q) on_m[q] = x(i, q, m);
            add_at_most(f, on_m, inst.net.capacities[m]);
        }

    // Gate locality: one host machine per gate, all operands on it. Only
    // machines big enough for the gate qualify (validate guarantees one).
    for (int j = 0; j < S; ++j) {
        const int i = j + 1;  // layer j executes in state j+1
        for (const Gate& g : inst.window.layers[j].gates) {
            std::vector<int> hosts;
            std::vector<int> host_vars;
            for (int m = 0; m < k; ++m)
                if (inst.net.capacities[m] >= g.arity()) {
                    hosts.push_back(m);
                    host_vars.push_back(f.new_var());
                }
            f.add_clause(host_vars);
            add_pairwise_at_most_one(f, host_vars);
            for (std::size_t h = 0; h < hosts.size(); ++h)
                for (int q : g.operands)
                    f.add_clause({-host_vars[h], x(i, q, hosts[h])});
        }
    }

    // Move indicators: mv(i,q) holds exactly when q changed machine.
    vars.first_move_var = f.new_vars(S * n);
    f.annotate("move", vars.first_move_var, f.variable_count());
    std::vector<int> move_lits;
    move_lits.reserve(static_cast<std::size_t>(S) * n);
    for (int i = 1; i <= S; ++i)
        for (int q = 0; q < n; ++q) {
            int mv = vars.move_var(i, q);
            move_lits.push_back(mv);
            for (int m = 0; m < k; ++m) {
                f.add_clause({mv, -x(i - 1, q, m), x(i, q, m)});
                f.add_clause({-mv, -x(i - 1, q, m), -x(i, q, m)});
            }
        }
    add_at_most(f, move_lits, inst.teleport_bound, "teleport-counter");

    if (inst.vacancy_bound) {
        vars.first_vacancy_var = f.new_vars(S * k);
        f.annotate("vacancy", vars.first_vacancy_var, f.variable_count());
        std::vector<int> vacancy_lits;
        vacancy_lits.reserve(static_cast<std::size_t>(S) * k);
        for (int i = 1; i <= S; ++i)
            for (int m = 0; m < k; ++m) {
                int z = vars.vacancy_var(i, m);
                vacancy_lits.push_back(z);
                std::vector<int> clause{z};
                for (int q = 0; q < n; ++q) {
                    clause.push_back(x(i, q, m));
                    f.add_clause({-z, -x(i, q, m)});
                }
                f.add_clause(clause);
            }
        add_at_most(f, vacancy_lits, *inst.vacancy_bound, "vacancy-counter");
    }

    if (inst.cost_bound) {
        const auto matrix =
            inst.net.cost_matrix ? *inst.net.cost_matrix : unit_cost_matrix(k);
        // Unary expansion: a move m -> m' feeds cost[m][m'] copies of one
        // indicator into the counter.
        std::vector<int> cost_lits;
        int first_w = f.variable_count() + 1;
        for (int i = 1; i <= S; ++i)
            for (int q = 0; q < n; ++q)
                for (int m = 0; m < k; ++m)
                    for (int m2 = 0; m2 < k; ++m2) {
                        if (m == m2 || matrix[m][m2] == 0) continue;
                        int w = f.new_var();
                        f.add_clause({-x(i - 1, q, m), -x(i, q, m2), w});
                        cost_lits.insert(cost_lits.end(), matrix[m][m2], w);
                    }
        if (f.variable_count() >= first_w)
            f.annotate("cost-unary", first_w, f.variable_count());
        add_at_most(f, cost_lits, *inst.cost_bound, "cost-counter");
    }

    return result;
}

AssignmentSequence decode(const DecisionInstance& inst,
                          const std::vector<bool>& model) {
    const int n = inst.window.qubit_count;
    const int k = inst.net.machine_count;
    const int S = inst.window.layer_count();
    StateIndexing vars{S + 1, n, k, 0, 0};
    if (static_cast<int>(model.size()) <= vars.placement_var(S, n - 1, k - 1))
        throw ModelInconsistent("model shorter than the placement block");

    AssignmentSequence seq;
    seq.states.resize(S + 1);
    for (int i = 0; i <= S; ++i) {
        auto& placement = seq.states[i].placement;
        placement.assign(n, -1);
        for (int q = 0; q < n; ++q) {
            for (int m = 0; m < k; ++m) {
                if (!model[vars.placement_var(i, q, m)]) continue;
                if (placement[q] != -1)
                    throw ModelInconsistent("qubit on two machines at state " +
                                            std::to_string(i));
                placement[q] = m;
            }
            if (placement[q] == -1)
                throw ModelInconsistent("qubit unplaced at state " +
                                        std::to_string(i));
        }
    }
    return seq;
}

std::string emit_varmap(const StateIndexing& vars) {
    std::ostringstream out;
    for (int i = 0; i < vars.state_count; ++i)
        for (int q = 0; q < vars.qubit_count; ++q)
            for (int m = 0; m < vars.machine_count; ++m)
                out << i << " " << q << " " << m << " "
                    << vars.placement_var(i, q, m) << "\n";
    return out.str();
}

}  // namespace qcdist
