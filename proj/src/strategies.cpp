#include "qcdist/strategies.hpp"

#include <algorithm>
#include <map>

namespace qcdist {
namespace {

int hard_cap(const CircuitGraph& window) {
    return window.qubit_count * window.layer_count();
}

DecisionInstance make_instance(const CircuitGraph& window,
                               const NetworkSpec& net,
                               const Allocation& initial, int teleports,
                               std::optional<int> vacancy = std::nullopt,
                               std::optional<int> cost = std::nullopt) {
    return DecisionInstance{window, net, initial, teleports, vacancy, cost};
}

std::optional<AssignmentSequence> probe(const DecisionInstance& inst,
                                        const SolveFn& solve) {
    EncodeResult enc = encode(inst);
    SatResult res = solve(enc.formula);
    if (!res.sat()) return std::nullopt;
    return decode(inst, res.model);
}

}  // namespace

SolveFn embedded_solver(SolveConfig config) {
    return [config](const CnfFormula& f) { return solve(f, config); };
}

SearchHistory::SearchHistory(int capacity) : capacity_(capacity) {
    if (capacity < 1) throw std::invalid_argument("history needs capacity >= 1");
}

void SearchHistory::push(int value) {
    values_.push_back(value);
    if (static_cast<int>(values_.size()) > capacity_) values_.pop_front();
}

int SearchHistory::min() const {
    if (values_.empty()) throw std::logic_error("empty history has no min");
    return *std::min_element(values_.begin(), values_.end());
}

int SearchHistory::max() const {
    if (values_.empty()) throw std::logic_error("empty history has no max");
    return *std::max_element(values_.begin(), values_.end());
}

std::vector<std::pair<int, int>> split_subproblems(const CircuitGraph& circuit,
                                                   int window_size) {
    if (window_size < 1) throw std::invalid_argument("window size must be >= 1");
    std::vector<std::pair<int, int>> ranges;
    for (int begin = 0; begin < circuit.layer_count(); begin += window_size)
        ranges.emplace_back(begin,
                            std::min(begin + window_size, circuit.layer_count()));
    return ranges;
}

SearchOutcome search_linear(const CircuitGraph& window, const NetworkSpec& net,
                            const Allocation& initial, const SolveFn& solve) {
    SearchOutcome out;
    for (int t = 0; t <= hard_cap(window); ++t) {
        ++out.probes;
        if (auto seq = probe(make_instance(window, net, initial, t), solve)) {
            out.t_star = t;
            out.seq = std::move(*seq);
            return out;
        }
    }
    throw SearchInfeasible("no teleport bound up to " +
                           std::to_string(hard_cap(window)) + " is satisfiable");
}

SearchOutcome search_binary(const CircuitGraph& window, const NetworkSpec& net,
                            const Allocation& initial, int lo, int hi,
                            const SolveFn& solve) {
    if (lo > hi) throw std::invalid_argument("binary search needs lo <= hi");
    SearchOutcome out;
    ++out.probes;
    auto best = probe(make_instance(window, net, initial, hi), solve);
    if (!best)
        throw RangeExcludesOptimum("unsatisfiable at the range top " +
                                   std::to_string(hi));
    while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        ++out.probes;
        if (auto seq = probe(make_instance(window, net, initial, mid), solve)) {
            hi = mid;
            best = std::move(seq);
        } else {
            lo = mid + 1;
        }
    }
    out.t_star = hi;
    out.seq = std::move(*best);
    return out;
}

SearchOutcome search_history_binary(const CircuitGraph& window,
                                    const NetworkSpec& net,
                                    const Allocation& initial,
                                    SearchHistory& history,
                                    const SolveFn& solve) {
    const int cap = hard_cap(window);
    SearchOutcome out;
    if (history.empty()) {
        try {
            out = search_binary(window, net, initial, 0, cap, solve);
        } catch (const RangeExcludesOptimum&) {
            throw SearchInfeasible("no teleport bound up to " +
                                   std::to_string(cap) + " is satisfiable");
        }
        history.push(out.t_star);
        return out;
    }
    int lo = std::clamp(history.min(), 0, cap);
    int hi = std::clamp(history.max(), lo, cap);
    try {
        out = search_binary(window, net, initial, lo, hi, solve);
    } catch (const RangeExcludesOptimum&) {
        // The whole seeded range is too low; everything <= hi is UNSAT.
        if (hi >= cap)
            throw SearchInfeasible("no teleport bound up to " +
                                   std::to_string(cap) + " is satisfiable");
        SearchOutcome expanded =
            search_binary(window, net, initial, hi + 1, cap, solve);
        expanded.probes += 1;  // the failed range-top probe
        history.push(expanded.t_star);
        return expanded;
    }
    if (out.t_star == lo && lo > 0) {
        // The seeded floor may sit above the true optimum; certify it.
        ++out.probes;
        if (auto seq =
                probe(make_instance(window, net, initial, lo - 1), solve)) {
            SearchOutcome below =
                search_binary(window, net, initial, 0, lo - 1, solve);
            below.probes += out.probes;
            out = std::move(below);
        }
    }
    history.push(out.t_star);
    return out;
}

namespace {

/// Lowers `hi` to the least satisfiable value, reusing a witness already
/// known to satisfy the bound at `hi`.
template <typename Probe>
void bisect_down(int lo, int& hi, AssignmentSequence& witness, int& probes,
                 const Probe& probe_at) {
    while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        ++probes;
        if (auto seq = probe_at(mid)) {
            hi = mid;
            witness = std::move(*seq);
        } else {
            lo = mid + 1;
        }
    }
}

}  // namespace

SearchOutcome lexicographic_refine(const CircuitGraph& window,
                                   const NetworkSpec& net,
                                   const Allocation& initial,
                                   SearchOutcome base, bool vacancy_on,
                                   bool cost_on, const SolveFn& solve) {
    const int S = window.layer_count();
    if (vacancy_on) {
        // Any T*-feasible sequence keeps vacancy at or below k*S, so the
        // range top needs no probe.
        int e_hi = net.machine_count * S;
        auto probe_at = [&](int e) {
            return probe(make_instance(window, net, initial, base.t_star, e),
                         solve);
        };
        bisect_down(0, e_hi, base.seq, base.probes, probe_at);
        base.e_star = e_hi;
    }
    if (cost_on) {
        const auto matrix = net.cost_matrix
                                ? *net.cost_matrix
                                : unit_cost_matrix(net.machine_count);
        int max_entry = 0;
        for (const auto& row : matrix)
            for (int v : row) max_entry = std::max(max_entry, v);
        // Each of the <= T* moves costs at most max_entry.
        int w_hi = max_entry * base.t_star;
        auto probe_at = [&](int w) {
            return probe(make_instance(window, net, initial, base.t_star,
                                       base.e_star, w),
                         solve);
        };
        bisect_down(0, w_hi, base.seq, base.probes, probe_at);
        base.w_star = w_hi;
    }
    return base;
}

SearchOutcome maximize_swaps(const CircuitGraph& window, const NetworkSpec& net,
                             const Allocation& initial, SearchOutcome base,
                             const SolveFn& solve) {
    if (base.t_star < 2) return base;
    const int n = window.qubit_count;
    const int S = window.layer_count();

    DecisionInstance inst = make_instance(window, net, initial, base.t_star,
                                          base.e_star, base.w_star);
    EncodeResult enc = encode(inst);
    CnfFormula& f = enc.formula;
    const StateIndexing& vars = enc.vars;

    // sp(i, a, b): qubits a and b trade machines entering state i. The pair
    // variable forces both to move and each to land on the other's old
    // machine; one qubit joins at most one pair per transition.
    std::vector<int> swap_vars;
    for (int i = 1; i <= S; ++i) {
        std::vector<std::vector<int>> by_qubit(n);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                int sp = f.new_var();
                swap_vars.push_back(sp);
                by_qubit[a].push_back(sp);
                by_qubit[b].push_back(sp);
                f.add_clause({-sp, vars.move_var(i, a)});
                f.add_clause({-sp, vars.move_var(i, b)});
                for (int m = 0; m < net.machine_count; ++m) {
                    f.add_clause({-sp, -vars.placement_var(i - 1, a, m),
                                  vars.placement_var(i, b, m)});
                    f.add_clause({-sp, -vars.placement_var(i - 1, b, m),
                                  vars.placement_var(i, a, m)});
                }
            }
        for (int q = 0; q < n; ++q)
            for (std::size_t a = 0; a < by_qubit[q].size(); ++a)
                for (std::size_t b = a + 1; b < by_qubit[q].size(); ++b)
                    f.add_clause({-by_qubit[q][a], -by_qubit[q][b]});
    }

    // Largest s with "at least s swap pairs" satisfiable; s = 0 is the
    // base solution itself.
    int lo = 0, hi = base.t_star / 2;
    while (lo < hi) {
        int mid = lo + (hi - lo + 1) / 2;
        CnfFormula probe_formula = f;
        add_at_least(probe_formula, swap_vars, mid);
        ++base.probes;
        SatResult res = solve(probe_formula);
        if (res.sat()) {
            lo = mid;
            base.seq = decode(inst, res.model);
        } else {
            hi = mid - 1;
        }
    }
    return base;
}

std::pair<int, int> count_swaps(const AssignmentSequence& seq) {
    int total_moves = 0;
    int swaps = 0;
    for (std::size_t t = 0; t + 1 < seq.states.size(); ++t) {
        std::map<std::pair<int, int>, int> direction;
        const auto& from = seq.states[t].placement;
        const auto& to = seq.states[t + 1].placement;
        for (std::size_t q = 0; q < from.size(); ++q)
            if (from[q] != to[q]) {
                ++direction[{from[q], to[q]}];
                ++total_moves;
            }
        for (const auto& [link, count] : direction) {
            if (link.first >= link.second) continue;
            auto reverse = direction.find({link.second, link.first});
            if (reverse != direction.end())
                swaps += std::min(count, reverse->second);
        }
    }
    return {swaps, total_moves - swaps};
}

Solution stitch(const std::vector<SearchOutcome>& fragments,
                const NetworkSpec& net, bool with_vacancy, bool with_cost) {
    if (fragments.empty()) throw std::invalid_argument("nothing to stitch");
    Solution sol;
    sol.assignments.states.push_back(fragments.front().seq.states.front());
    for (std::size_t i = 0; i < fragments.size(); ++i) {
        const auto& states = fragments[i].seq.states;
        if (states.empty()) throw SeamMismatch("fragment with no states");
        if (!(states.front() == sol.assignments.states.back()))
            throw SeamMismatch("fragment " + std::to_string(i) +
                               " does not start at its predecessor's end");
        sol.assignments.states.insert(sol.assignments.states.end(),
                                      states.begin() + 1, states.end());
    }

    const auto& states = sol.assignments.states;
    for (std::size_t t = 0; t + 1 < states.size(); ++t) {
        int moved = moved_qubits(states[t], states[t + 1]);
        sol.moves_per_transition.push_back(moved);
        sol.num_tele += moved;
    }
    auto [swap_count, adjusted] = count_swaps(sol.assignments);
    sol.swap_count = swap_count;
    sol.adjusted_tele = adjusted;

    if (with_vacancy) {
        long long total = 0;
        for (std::size_t i = 1; i < states.size(); ++i)
            total += vacant_machines(states[i], net.machine_count);
        sol.vacancy_total = total;
    }
    if (with_cost) {
        const auto matrix = net.cost_matrix
                                ? *net.cost_matrix
                                : unit_cost_matrix(net.machine_count);
        long long total = 0;
        for (std::size_t t = 0; t + 1 < states.size(); ++t)
            total += transition_cost(states[t], states[t + 1], matrix);
        sol.weighted_cost = total;
    }
    return sol;
}

std::vector<std::string> verify_solution(const CircuitGraph& circuit,
                                         const NetworkSpec& net,
                                         const Allocation& initial,
                                         const Solution& solution) {
    std::vector<std::string> problems;
    const auto& states = solution.assignments.states;
    if (static_cast<int>(states.size()) != circuit.layer_count() + 1) {
        problems.push_back("state count != layer count + 1");
        return problems;
    }
    if (!(states.front() == initial))
        problems.push_back("state 0 differs from the initial allocation");
    for (std::size_t i = 0; i < states.size(); ++i)
        if (!allocation_valid(states[i], net, circuit.qubit_count))
            problems.push_back("state " + std::to_string(i) +
                               " violates totality or capacity");
    for (int j = 0; j < circuit.layer_count(); ++j)
        for (const Gate& g : circuit.layers[j].gates) {
            const auto& placement = states[j + 1].placement;
            for (int q : g.operands)
                if (placement[q] != placement[g.operands.front()]) {
                    problems.push_back("gate in layer " + std::to_string(j) +
                                       " is not local in state " +
                                       std::to_string(j + 1));
                    break;
                }
        }
    if (static_cast<int>(solution.moves_per_transition.size()) !=
        circuit.layer_count()) {
        problems.push_back("per-transition move list has wrong length");
    } else {
        int total = 0;
        for (int j = 0; j < circuit.layer_count(); ++j) {
            int moved = moved_qubits(states[j], states[j + 1]);
            total += moved;
            if (solution.moves_per_transition[j] != moved)
                problems.push_back("transition " + std::to_string(j) +
                                   " move count mismatch");
        }
        if (solution.num_tele != total)
            problems.push_back("num_tele does not equal the move total");
    }
    auto [swap_count, adjusted] = count_swaps(solution.assignments);
    if (solution.swap_count != swap_count || solution.adjusted_tele != adjusted)
        problems.push_back("swap accounting mismatch");
    if (solution.vacancy_total) {
        long long total = 0;
        for (std::size_t i = 1; i < states.size(); ++i)
            total += vacant_machines(states[i], net.machine_count);
        if (*solution.vacancy_total != total)
            problems.push_back("vacancy total mismatch");
    }
    if (solution.weighted_cost) {
        const auto matrix = net.cost_matrix
                                ? *net.cost_matrix
                                : unit_cost_matrix(net.machine_count);
        long long total = 0;
        for (std::size_t t = 0; t + 1 < states.size(); ++t)
            total += transition_cost(states[t], states[t + 1], matrix);
        if (*solution.weighted_cost != total)
            problems.push_back("weighted cost mismatch");
    }
    return problems;
}

OptimizeResult optimize(const CircuitGraph& circuit, const NetworkSpec& net,
                        const Allocation& initial, const StrategyConfig& config,
                        const SolveFn& solve) {
    const bool with_cost = net.cost_matrix.has_value();
    OptimizeResult result;
    if (circuit.layer_count() == 0) {
        result.solution.assignments.states = {initial};
        if (config.balance) result.solution.vacancy_total = 0;
        if (with_cost) result.solution.weighted_cost = 0;
        return result;
    }

    SearchHistory history(config.history_length);
    Allocation current = initial;
    for (auto [begin, end] : split_subproblems(circuit, config.window_size)) {
        CircuitGraph window = slice_layers(circuit, begin, end);
        SearchOutcome outcome;
        switch (config.kind) {
            case SearchKind::linear:
                outcome = search_linear(window, net, current, solve);
                break;
            case SearchKind::binary:
                try {
                    outcome = search_binary(window, net, current, 0,
                                            hard_cap(window), solve);
                } catch (const RangeExcludesOptimum&) {
                    throw SearchInfeasible(
                        "window starting at layer " + std::to_string(begin) +
                        " is unsatisfiable at every teleport bound");
                }
                break;
            case SearchKind::history:
                outcome = search_history_binary(window, net, current, history,
                                                solve);
                break;
        }
        if (config.balance || with_cost)
            outcome = lexicographic_refine(window, net, current,
                                           std::move(outcome), config.balance,
                                           with_cost, solve);
        bool refine_swaps =
            config.swap_refine == SwapRefine::on ||
            (config.swap_refine == SwapRefine::automatic &&
             circuit.qubit_count <= 12 && window.layer_count() <= 24);
        if (refine_swaps)
            outcome = maximize_swaps(window, net, current, std::move(outcome),
                                     solve);
        current = outcome.seq.states.back();
        result.fragments.push_back(std::move(outcome));
    }
    result.solution =
        stitch(result.fragments, net, config.balance, with_cost);
    return result;
}

}  // namespace qcdist
