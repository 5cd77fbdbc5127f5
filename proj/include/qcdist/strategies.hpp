#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcdist/circuit.hpp"
#include "qcdist/encoder.hpp"
#include "qcdist/network.hpp"
#include "qcdist/solver.hpp"

namespace qcdist {

/// Pluggable SAT backend used by every threshold probe.
using SolveFn = std::function<SatResult(const CnfFormula&)>;

/// Backend running the in-process solver with the given configuration.
SolveFn embedded_solver(SolveConfig config = {});

/// Ring buffer of the last few subproblem optima; its min/max seed the
/// starting range of history-driven binary search.
class SearchHistory {
public:
    explicit SearchHistory(int capacity = 10);

    void push(int value);
    bool empty() const { return values_.empty(); }
    int min() const;
    int max() const;
    int capacity() const { return capacity_; }

private:
    int capacity_;
    std::deque<int> values_;
};

/// One window at its optimum: minimal teleport bound, optional refined
/// vacancy/cost bounds, probe count, and the decoded state sequence
/// (window layer count + 1 states, the first inherited from upstream).
struct SearchOutcome {
    int t_star = 0;
    std::optional<int> e_star;
    std::optional<int> w_star;
    int probes = 0;
    AssignmentSequence seq;
};

/// No teleport bound up to the hard cap (qubit count x window layers) is
/// satisfiable; the window itself admits no valid placement.
struct SearchInfeasible : std::runtime_error {
    explicit SearchInfeasible(const std::string& what)
        : std::runtime_error(what) {}
};

/// Binary search found the top of its range unsatisfiable; the optimum
/// lies above it and the caller must expand.
struct RangeExcludesOptimum : std::runtime_error {
    explicit RangeExcludesOptimum(const std::string& what)
        : std::runtime_error(what) {}
};

/// Consecutive fragments disagree at their shared state; orchestration bug.
struct SeamMismatch : std::logic_error {
    explicit SeamMismatch(const std::string& what) : std::logic_error(what) {}
};

/// Ceiling-division split of the circuit's layers into contiguous
/// [begin, end) windows.
std::vector<std::pair<int, int>> split_subproblems(const CircuitGraph& circuit,
                                                   int window_size);

/// Probes T = 0, 1, 2, ... until satisfiable.
SearchOutcome search_linear(const CircuitGraph& window, const NetworkSpec& net,
                            const Allocation& initial, const SolveFn& solve);

/// Bisects [lo, hi] assuming UNSAT below lo; throws RangeExcludesOptimum
/// when hi itself is unsatisfiable.
SearchOutcome search_binary(const CircuitGraph& window, const NetworkSpec& net,
                            const Allocation& initial, int lo, int hi,
                            const SolveFn& solve);

/// Bisects inside [min(history), max(history)], expanding to the full range
/// when the seeded range misses, and certifying T*-1 UNSAT when the result
/// lands on the seeded lower edge. Pushes the optimum into the history.
SearchOutcome search_history_binary(const CircuitGraph& window,
                                    const NetworkSpec& net,
                                    const Allocation& initial,
                                    SearchHistory& history,
                                    const SolveFn& solve);

/// With the teleport bound pinned at base.t_star, minimizes the cumulative
/// vacancy total (when vacancy_on), then the weighted teleport cost (when
/// cost_on), in that order.
SearchOutcome lexicographic_refine(const CircuitGraph& window,
                                   const NetworkSpec& net,
                                   const Allocation& initial,
                                   SearchOutcome base, bool vacancy_on,
                                   bool cost_on, const SolveFn& solve);

/// Among solutions meeting base's pinned bounds, finds one maximizing the
/// number of pairwise exchanges, so the swap-adjusted teleport count
/// reported for the window is the lowest achievable at those bounds.
SearchOutcome maximize_swaps(const CircuitGraph& window, const NetworkSpec& net,
                             const Allocation& initial, SearchOutcome base,
                             const SolveFn& solve);

/// Per transition grouping: each unordered machine pair contributes
/// min(#movers one way, #movers the other way) swaps. Returns
/// (swap_count, total_moves - swap_count).
std::pair<int, int> count_swaps(const AssignmentSequence& seq);

/// Whole-circuit result with accounting.
struct Solution {
    AssignmentSequence assignments;
    std::vector<int> moves_per_transition;
    int num_tele = 0;
    int swap_count = 0;
    int adjusted_tele = 0;
    std::optional<long long> vacancy_total;
    std::optional<long long> weighted_cost;

    bool operator==(const Solution&) const = default;
};

/// Concatenates fragment sequences (each window's first state must equal
/// its predecessor's last) and recomputes all totals from the combined
/// sequence. Vacancy/cost totals are filled when requested.
Solution stitch(const std::vector<SearchOutcome>& fragments,
                const NetworkSpec& net, bool with_vacancy, bool with_cost);

/// Invariant audit for a finished solution; empty result means clean.
std::vector<std::string> verify_solution(const CircuitGraph& circuit,
                                         const NetworkSpec& net,
                                         const Allocation& initial,
                                         const Solution& solution);

enum class SearchKind { linear, binary, history };
enum class SwapRefine { off, on, automatic };

struct StrategyConfig {
    SearchKind kind = SearchKind::binary;
    int window_size = 10;
    int history_length = 10;
    bool balance = false;
    /// Swap maximization keeps the reported swap-adjusted count minimal at
    /// the optimal bounds; automatic enables it on desk-scale windows.
    SwapRefine swap_refine = SwapRefine::automatic;
};

struct OptimizeResult {
    Solution solution;
    std::vector<SearchOutcome> fragments;
};

/// Full pipeline over an already-layered circuit: window split, per-window
/// threshold search (strategy per config), lexicographic refinement
/// (vacancy when balance; cost when the network carries a cost matrix),
/// optional swap maximization, stitching.
OptimizeResult optimize(const CircuitGraph& circuit, const NetworkSpec& net,
                        const Allocation& initial, const StrategyConfig& config,
                        const SolveFn& solve);

}  // namespace qcdist
