#include "qcdist/solver.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <chrono>
#include <cstdio>
#include <sstream>

namespace qcdist {
namespace {

using Clock = std::chrono::steady_clock;

// Internal literal encoding: lit = 2*var + sign, var 0-based, sign 1 = negated.
inline int mk_lit(int var, bool neg) { return 2 * var + (neg ? 1 : 0); }
inline int lit_var(int lit) { return lit >> 1; }
inline int lit_neg(int lit) { return lit ^ 1; }

constexpr int kNoClause = -1;

struct Clause {
    double activity = 0.0;
    bool learnt = false;
    bool deleted = false;
    std::vector<int> lits;
};

struct Watcher {
    int cref;
    int blocker;
};

class Cdcl {
public:
    Cdcl(const CnfFormula& f, const SolveConfig& cfg)
        : nvars_(f.variable_count()), cfg_(cfg), rng_state_(cfg.seed) {
        assigns_.assign(nvars_, 0);
        level_.assign(nvars_, 0);
        reason_.assign(nvars_, kNoClause);
        activity_.assign(nvars_, 0.0);
        polarity_.assign(nvars_, 1);  // prefer false: encodings are mostly-off
        seen_.assign(nvars_, 0);
        heap_pos_.assign(nvars_, -1);
        watches_.assign(2 * static_cast<std::size_t>(nvars_), {});
        for (int v = 0; v < nvars_; ++v) heap_insert(v);

        std::vector<int> lits;
        for (const auto& clause : f.clauses()) {
            lits.clear();
            for (int ext : clause) {
                int var = (ext < 0 ? -ext : ext) - 1;
                lits.push_back(mk_lit(var, ext < 0));
            }
            if (!add_clause(lits, false)) {
                contradiction_ = true;
                return;
            }
        }
        max_learnts_ = std::max<std::size_t>(4000, clauses_.size() / 3);
    }

    SatStatus run(SolverStats& stats, Clock::time_point deadline, bool has_deadline) {
        auto started = Clock::now();
        SatStatus status = search(deadline, has_deadline);
        stats.decisions = decisions_;
        stats.conflicts = conflicts_;
        stats.propagations = propagations_;
        stats.seconds =
            std::chrono::duration<double>(Clock::now() - started).count();
        return status;
    }

    std::vector<bool> extract_model() const {
        std::vector<bool> model(nvars_ + 1, false);
        for (int v = 0; v < nvars_; ++v) model[v + 1] = assigns_[v] > 0;
        return model;
    }

private:
    // ---- clause storage ---------------------------------------------------

    // Returns false on an immediate top-level contradiction.
    bool add_clause(std::vector<int> lits, bool learnt) {
        if (!learnt) {
            std::sort(lits.begin(), lits.end());
            lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
            for (std::size_t i = 0; i + 1 < lits.size(); ++i)
                if (lits[i + 1] == lit_neg(lits[i])) return true;  // tautology
            // Drop literals already false at level 0; satisfied clause is skipped.
            std::vector<int> kept;
            for (int lit : lits) {
                int val = value(lit);
                if (val > 0 && level_[lit_var(lit)] == 0) return true;
                if (val < 0 && level_[lit_var(lit)] == 0) continue;
                kept.push_back(lit);
            }
            lits.swap(kept);
            if (lits.empty()) return false;
        }
        if (lits.size() == 1) {
            if (value(lits[0]) < 0) return false;
            if (value(lits[0]) == 0) enqueue(lits[0], kNoClause);
            return true;
        }
        int cref = static_cast<int>(clauses_.size());
        clauses_.push_back({0.0, learnt, false, std::move(lits)});
        if (learnt) learnt_refs_.push_back(cref);
        watch(cref);
        return true;
    }

    void watch(int cref) {
        const auto& lits = clauses_[cref].lits;
        watches_[lit_neg(lits[0])].push_back({cref, lits[1]});
        watches_[lit_neg(lits[1])].push_back({cref, lits[0]});
    }

    // ---- assignment -------------------------------------------------------

    int value(int lit) const {  // +1 true, -1 false, 0 unassigned
        int a = assigns_[lit_var(lit)];
        return (lit & 1) ? -a : a;
    }

    void enqueue(int lit, int from) {
        int v = lit_var(lit);
        assigns_[v] = (lit & 1) ? -1 : 1;
        level_[v] = decision_level();
        reason_[v] = from;
        trail_.push_back(lit);
    }

    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    void backtrack(int target_level) {
        if (decision_level() <= target_level) return;
        int bound = trail_lim_[target_level];
        for (int i = static_cast<int>(trail_.size()) - 1; i >= bound; --i) {
            int v = lit_var(trail_[i]);
            polarity_[v] = static_cast<char>(trail_[i] & 1);
            assigns_[v] = 0;
            reason_[v] = kNoClause;
            if (heap_pos_[v] < 0) heap_insert(v);
        }
        trail_.resize(bound);
        trail_lim_.resize(target_level);
        qhead_ = std::min(qhead_, trail_.size());
    }

    // ---- propagation ------------------------------------------------------

    int propagate() {
        while (qhead_ < trail_.size()) {
            int p = trail_[qhead_++];
            ++propagations_;
            auto& ws = watches_[p];
            std::size_t keep = 0;
            for (std::size_t i = 0; i < ws.size(); ++i) {
                Watcher w = ws[i];
                if (value(w.blocker) > 0) {
                    ws[keep++] = w;
                    continue;
                }
                Clause& c = clauses_[w.cref];
                if (c.deleted) continue;
                auto& lits = c.lits;
                int false_lit = lit_neg(p);
                if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
                if (value(lits[0]) > 0) {
                    ws[keep++] = {w.cref, lits[0]};
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < lits.size(); ++k) {
                    if (value(lits[k]) >= 0) {
                        std::swap(lits[1], lits[k]);
                        watches_[lit_neg(lits[1])].push_back({w.cref, lits[0]});
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                // Unit or conflicting.
                ws[keep++] = {w.cref, lits[0]};
                if (value(lits[0]) < 0) {
                    for (std::size_t k = i + 1; k < ws.size(); ++k) ws[keep++] = ws[k];
                    ws.resize(keep);
                    qhead_ = trail_.size();
                    return w.cref;
                }
                enqueue(lits[0], w.cref);
            }
            ws.resize(keep);
        }
        return kNoClause;
    }

    // ---- conflict analysis (first UIP) -------------------------------------

    void analyze(int confl, std::vector<int>& learnt, int& out_level) {
        learnt.clear();
        learnt.push_back(0);  // placeholder for the asserting literal
        int path = 0;
        int p = -1;
        int index = static_cast<int>(trail_.size()) - 1;
        do {
            Clause& c = clauses_[confl];
            if (c.learnt) bump_clause(c);
            for (int q : c.lits) {
                if (q == p) continue;
                int v = lit_var(q);
                if (!seen_[v] && level_[v] > 0) {
                    seen_[v] = 1;
                    bump_var(v);
                    if (level_[v] >= decision_level())
                        ++path;
                    else
                        learnt.push_back(q);
                }
            }
            while (!seen_[lit_var(trail_[index])]) --index;
            p = trail_[index];
            confl = reason_[lit_var(p)];
            seen_[lit_var(p)] = 0;
            --index;
            --path;
        } while (path > 0);
        learnt[0] = lit_neg(p);

        // Cheap minimization: drop literals implied by another learnt literal's
        // reason being entirely inside the clause.
        out_level = 0;
        if (learnt.size() > 1) {
            std::size_t max_i = 1;
            for (std::size_t i = 2; i < learnt.size(); ++i)
                if (level_[lit_var(learnt[i])] > level_[lit_var(learnt[max_i])]) max_i = i;
            std::swap(learnt[1], learnt[max_i]);
            out_level = level_[lit_var(learnt[1])];
        }
        for (std::size_t i = 1; i < learnt.size(); ++i) seen_[lit_var(learnt[i])] = 0;
    }

    // ---- activity ----------------------------------------------------------

    void bump_var(int v) {
        activity_[v] += var_inc_;
        if (activity_[v] > 1e100) {
            for (double& a : activity_) a *= 1e-100;
            var_inc_ *= 1e-100;
        }
        if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
    }

    void bump_clause(Clause& c) {
        c.activity += cla_inc_;
        if (c.activity > 1e20) {
            for (int ref : learnt_refs_)
                if (!clauses_[ref].deleted) clauses_[ref].activity *= 1e-20;
            cla_inc_ *= 1e-20;
        }
    }

    void decay() {
        var_inc_ /= 0.95;
        cla_inc_ /= 0.999;
    }

    // ---- branching heap (max activity, ties by smaller index) --------------

    bool heap_less(int a, int b) const {
        return activity_[a] > activity_[b] ||
               (activity_[a] == activity_[b] && a < b);
    }

    void heap_insert(int v) {
        heap_pos_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        heap_up(heap_pos_[v]);
    }

    void heap_up(int i) {
        int v = heap_[i];
        while (i > 0) {
            int parent = (i - 1) / 2;
            if (!heap_less(v, heap_[parent])) break;
            heap_[i] = heap_[parent];
            heap_pos_[heap_[i]] = i;
            i = parent;
        }
        heap_[i] = v;
        heap_pos_[v] = i;
    }

    void heap_down(int i) {
        int v = heap_[i];
        int n = static_cast<int>(heap_.size());
        for (;;) {
            int child = 2 * i + 1;
            if (child >= n) break;
            if (child + 1 < n && heap_less(heap_[child + 1], heap_[child])) ++child;
            if (!heap_less(heap_[child], v)) break;
            heap_[i] = heap_[child];
            heap_pos_[heap_[i]] = i;
            i = child;
        }
        heap_[i] = v;
        heap_pos_[v] = i;
    }

    int heap_pop() {
        int v = heap_[0];
        heap_pos_[v] = -1;
        heap_[0] = heap_.back();
        heap_.pop_back();
        if (!heap_.empty()) {
            heap_pos_[heap_[0]] = 0;
            heap_down(0);
        }
        return v;
    }

    // ---- learnt clause reduction -------------------------------------------

    void reduce_db() {
        std::vector<int> live;
        for (int ref : learnt_refs_)
            if (!clauses_[ref].deleted) live.push_back(ref);
        std::sort(live.begin(), live.end(), [&](int a, int b) {
            return clauses_[a].activity < clauses_[b].activity;
        });
        std::size_t target = live.size() / 2;
        std::size_t removed = 0;
        for (int ref : live) {
            if (removed >= target) break;
            Clause& c = clauses_[ref];
            if (c.lits.size() <= 2 || is_reason(ref)) continue;
            c.deleted = true;
            ++removed;
        }
        learnt_refs_.erase(std::remove_if(learnt_refs_.begin(), learnt_refs_.end(),
                                          [&](int r) { return clauses_[r].deleted; }),
                           learnt_refs_.end());
        rebuild_watches();
    }

    bool is_reason(int cref) const {
        const Clause& c = clauses_[cref];
        int v = lit_var(c.lits[0]);
        return assigns_[v] != 0 && reason_[v] == cref && value(c.lits[0]) > 0;
    }

    void rebuild_watches() {
        for (auto& ws : watches_) ws.clear();
        for (int cref = 0; cref < static_cast<int>(clauses_.size()); ++cref)
            if (!clauses_[cref].deleted) watch(cref);
    }

    // ---- search ------------------------------------------------------------

    static std::uint64_t luby(std::uint64_t i) {
        // Value at 0-based position i of the sequence 1,1,2,1,1,2,4,...
        std::uint64_t size = 1, seq = 0;
        while (size < i + 1) {
            ++seq;
            size = 2 * size + 1;
        }
        while (size - 1 != i) {
            size = (size - 1) / 2;
            --seq;
            i %= size;
        }
        return 1ull << seq;
    }

    std::uint64_t next_random() {
        std::uint64_t x = rng_state_;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        rng_state_ = x;
        return x;
    }

    int pick_branch_var() {
        if (cfg_.seed != 0 && !heap_.empty() && next_random() % 64 == 0) {
            int v = static_cast<int>(next_random() % heap_.size());
            if (assigns_[heap_[v]] == 0) return heap_[v];
        }
        while (!heap_.empty()) {
            int v = heap_pop();
            if (assigns_[v] == 0) return v;
        }
        return -1;
    }

    SatStatus search(Clock::time_point deadline, bool has_deadline) {
        if (contradiction_) return SatStatus::unsatisfiable;
        std::uint64_t restart_count = 0;
        std::uint64_t conflicts_until_restart = 100 * luby(restart_count);
        std::uint64_t since_restart = 0;
        std::vector<int> learnt;
        int check_tick = 0;

        for (;;) {
            if (has_deadline && ++check_tick >= 256) {
                check_tick = 0;
                if (Clock::now() > deadline)
                    throw SolveTimeout("solver exceeded time limit");
            }
            int confl = propagate();
            if (confl != kNoClause) {
                ++conflicts_;
                ++since_restart;
                if (decision_level() == 0) return SatStatus::unsatisfiable;
                int back_level = 0;
                analyze(confl, learnt, back_level);
                backtrack(back_level);
                if (learnt.size() == 1) {
                    enqueue(learnt[0], kNoClause);
                } else {
                    int cref = static_cast<int>(clauses_.size());
                    clauses_.push_back({cla_inc_, true, false, learnt});
                    learnt_refs_.push_back(cref);
                    watch(cref);
                    enqueue(learnt[0], cref);
                }
                decay();
            } else {
                if (since_restart >= conflicts_until_restart) {
                    since_restart = 0;
                    conflicts_until_restart = 100 * luby(++restart_count);
                    max_learnts_ = static_cast<std::size_t>(max_learnts_ * 1.05) + 16;
                    backtrack(0);
                    continue;
                }
                if (learnt_refs_.size() >= max_learnts_) reduce_db();
                int v = pick_branch_var();
                if (v < 0) return SatStatus::satisfiable;
                ++decisions_;
                trail_lim_.push_back(static_cast<int>(trail_.size()));
                enqueue(mk_lit(v, polarity_[v] != 0), kNoClause);
            }
        }
    }

    int nvars_;
    SolveConfig cfg_;
    bool contradiction_ = false;

    std::vector<Clause> clauses_;
    std::vector<int> learnt_refs_;
    std::vector<std::vector<Watcher>> watches_;

    std::vector<signed char> assigns_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<int> trail_;
    std::vector<int> trail_lim_;
    std::size_t qhead_ = 0;

    std::vector<double> activity_;
    double var_inc_ = 1.0;
    double cla_inc_ = 1.0;
    std::vector<int> heap_;
    std::vector<int> heap_pos_;
    std::vector<char> polarity_;
    std::vector<char> seen_;

    std::uint64_t rng_state_;
    std::uint64_t decisions_ = 0;
    std::uint64_t conflicts_ = 0;
    std::uint64_t propagations_ = 0;
    std::size_t max_learnts_ = 4000;
};

}  // namespace

SatResult solve(const CnfFormula& formula, const SolveConfig& config) {
    Cdcl solver(formula, config);
    SatResult result;
    bool has_deadline = config.time_limit_seconds > 0.0;
    auto deadline = Clock::now() +
                    std::chrono::duration_cast<Clock::duration>(
                        std::chrono::duration<double>(config.time_limit_seconds));
    result.status = solver.run(result.stats, deadline, has_deadline);
    if (result.status == SatStatus::satisfiable) {
        result.model = solver.extract_model();
        if (!formula.evaluate(result.model))
            throw std::logic_error("solver returned a model that fails verification");
    }
    return result;
}

SatResult solve_external(const std::string& dimacs_path,
                         const std::string& solver_command,
                         const CnfFormula* verify_against) {
    std::string stderr_path = dimacs_path + ".stderr";
    std::string command =
        solver_command + " " + dimacs_path + " 2>" + stderr_path;
    auto started = Clock::now();
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) throw BackendFailure("failed to launch: " + solver_command);
    std::string output;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, got);
    int rc = pclose(pipe);

    auto read_file = [](const std::string& path) {
        std::string text;
        if (FILE* fp = fopen(path.c_str(), "r")) {
            char chunk[4096];
            std::size_t n;
            while ((n = fread(chunk, 1, sizeof(chunk), fp)) > 0) text.append(chunk, n);
            fclose(fp);
        }
        return text;
    };

    SatResult result;
    result.stats.seconds = std::chrono::duration<double>(Clock::now() - started).count();
    bool saw_status = false;
    std::vector<int> model_lits;
    std::istringstream lines(output);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind("s ", 0) == 0) {
            if (line.find("UNSATISFIABLE") != std::string::npos) {
                result.status = SatStatus::unsatisfiable;
                saw_status = true;
            } else if (line.find("SATISFIABLE") != std::string::npos) {
                result.status = SatStatus::satisfiable;
                saw_status = true;
            }
        } else if (line.rfind("v ", 0) == 0 || line == "v") {
            std::istringstream ls(line.substr(1));
            int lit;
            while (ls >> lit)
                if (lit != 0) model_lits.push_back(lit);
        }
    }
    if (!saw_status) {
        std::string err = read_file(stderr_path);
        std::remove(stderr_path.c_str());
        if (rc != 0 && output.empty())
            throw BackendFailure("external solver failed (" + solver_command +
                                 "): " + err);
        throw OutputUnparsable("no `s` status line in external solver output");
    }
    std::remove(stderr_path.c_str());
    if (result.sat()) {
        int max_var = 0;
        for (int lit : model_lits) max_var = std::max(max_var, lit < 0 ? -lit : lit);
        if (verify_against) max_var = std::max(max_var, verify_against->variable_count());
        result.model.assign(max_var + 1, false);
        for (int lit : model_lits)
            if (lit > 0)
                result.model[lit] = true;
        if (verify_against && !verify_against->evaluate(result.model))
            throw OutputUnparsable("external model does not satisfy the formula");
    }
    return result;
}

}  // namespace qcdist
