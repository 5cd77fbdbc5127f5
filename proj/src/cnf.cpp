#include "qcdist/cnf.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace qcdist {

int CnfFormula::new_vars(int count) {
    if (count <= 0) throw std::invalid_argument("new_vars: count must be positive");
    int first = variable_count_ + 1;
    variable_count_ += count;
    return first;
}

void CnfFormula::add_clause(std::vector<int> lits) {
    if (lits.empty()) throw std::invalid_argument("add_clause: empty clause");
    for (int lit : lits) {
        int var = lit < 0 ? -lit : lit;
        if (var == 0 || var > variable_count_)
            throw std::invalid_argument("add_clause: literal out of range");
    }
    clauses_.push_back(std::move(lits));
}

void CnfFormula::add_clause(std::initializer_list<int> lits) {
    add_clause(std::vector<int>(lits));
}

void CnfFormula::annotate(const std::string& name, int first, int last) {
    annotations_[name] = {first, last};
}

bool CnfFormula::evaluate(const std::vector<bool>& model) const {
    for (const auto& clause : clauses_) {
        bool sat = false;
        for (int lit : clause) {
            int var = lit < 0 ? -lit : lit;
            if (static_cast<std::size_t>(var) >= model.size()) return false;
            if (model[var] == (lit > 0)) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

void add_at_most(CnfFormula& f, std::span<const int> lits, int bound,
                 const std::string& group) {
    if (bound < 0) throw std::invalid_argument("add_at_most: negative bound");
    const int n = static_cast<int>(lits.size());
    if (bound >= n) return;
    if (bound == 0) {
        for (int lit : lits) f.add_clause({-lit});
        return;
    }
    // Sequential counter registers r(i,j): after seeing lits[0..i], at least
    // j+1 of them are true. i ranges over 0..n-2, j over 0..bound-1.
    const int first = f.new_vars((n - 1) * bound);
    auto reg = [&](int i, int j) { return first + i * bound + j; };

    f.add_clause({-lits[0], reg(0, 0)});
    for (int j = 1; j < bound; ++j) f.add_clause({-reg(0, j)});
    for (int i = 1; i < n - 1; ++i) {
        f.add_clause({-lits[i], reg(i, 0)});
        f.add_clause({-reg(i - 1, 0), reg(i, 0)});
        for (int j = 1; j < bound; ++j) {
            f.add_clause({-lits[i], -reg(i - 1, j - 1), reg(i, j)});
            f.add_clause({-reg(i - 1, j), reg(i, j)});
        }
        f.add_clause({-lits[i], -reg(i - 1, bound - 1)});
    }
    f.add_clause({-lits[n - 1], -reg(n - 2, bound - 1)});
    if (!group.empty()) f.annotate(group, first, first + (n - 1) * bound - 1);
}

void add_at_least(CnfFormula& f, std::span<const int> lits, int bound,
                  const std::string& group) {
    const int n = static_cast<int>(lits.size());
    if (bound <= 0) return;
    if (bound > n)
        throw std::invalid_argument("add_at_least: bound exceeds literal count");
    if (bound == n) {
        for (int lit : lits) f.add_clause({lit});
        return;
    }
    std::vector<int> negated(lits.size());
    for (std::size_t i = 0; i < lits.size(); ++i) negated[i] = -lits[i];
    add_at_most(f, negated, n - bound, group);
}

std::string emit_dimacs(const CnfFormula& f) {
    std::string out;
    out.reserve(f.clause_count() * 12 + 64);
    char buf[32];
    for (const auto& [name, range] : f.annotations()) {
        out += "c group ";
        out += name;
        std::snprintf(buf, sizeof(buf), " %d %d\n", range.first, range.second);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "p cnf %d %zu\n", f.variable_count(),
                  f.clause_count());
    out += buf;
    for (const auto& clause : f.clauses()) {
        for (int lit : clause) {
            std::snprintf(buf, sizeof(buf), "%d ", lit);
            out += buf;
        }
        out += "0\n";
    }
    return out;
}

CnfFormula parse_dimacs(const std::string& text) {
    CnfFormula f;
    std::istringstream in(text);
    std::string line;
    long declared_vars = -1;
    std::vector<int> clause;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == 'c') {
            std::istringstream ls(line);
            std::string c, kw, name;
            int first = 0, last = 0;
            if (ls >> c >> kw >> name >> first >> last && kw == "group")
                f.annotate(name, first, last);
            continue;
        }
        if (line[0] == 'p') {
            std::istringstream ls(line);
            std::string p, fmt;
            long nclauses = 0;
            if (!(ls >> p >> fmt >> declared_vars >> nclauses) || fmt != "cnf")
                throw std::runtime_error("parse_dimacs: malformed problem line");
            while (f.variable_count() < declared_vars) f.new_var();
            continue;
        }
        std::istringstream ls(line);
        int lit = 0;
        while (ls >> lit) {
            if (lit == 0) {
                if (!clause.empty()) {
                    f.add_clause(clause);
                    clause.clear();
                }
            } else {
                int var = lit < 0 ? -lit : lit;
                while (f.variable_count() < var) f.new_var();
                clause.push_back(lit);
            }
        }
    }
    if (!clause.empty()) f.add_clause(clause);
    return f;
}

}  // namespace qcdist
