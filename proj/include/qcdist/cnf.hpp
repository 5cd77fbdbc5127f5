#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcdist {

/// Propositional formula in CNF. Literals follow the DIMACS convention:
/// variables are positive integers starting at 1, a negative literal is the
/// negation of its variable. A formula never holds an empty clause; code that
/// derives a contradiction must express it as opposing unit clauses.
class CnfFormula {
public:
    int variable_count() const { return variable_count_; }
    std::size_t clause_count() const { return clauses_.size(); }

    /// Allocates one fresh variable and returns its id.
    int new_var() { return ++variable_count_; }

    /// Allocates `count` consecutive variables, returning the first id.
    int new_vars(int count);

    void add_clause(std::vector<int> lits);
    void add_clause(std::initializer_list<int> lits);

    const std::vector<std::vector<int>>& clauses() const { return clauses_; }

    /// Records that [first, last] is a named block of variables. Groups are
    /// emitted as `c group` comments in DIMACS output so external models can
    /// be interpreted.
    void annotate(const std::string& name, int first, int last);
    const std::map<std::string, std::pair<int, int>>& annotations() const {
        return annotations_;
    }

    /// True when `model` (indexed by variable id, entry 0 ignored) satisfies
    /// every clause.
    bool evaluate(const std::vector<bool>& model) const;

private:
    int variable_count_ = 0;
    std::vector<std::vector<int>> clauses_;
    std::map<std::string, std::pair<int, int>> annotations_;
};

/// Constrains at most `bound` of `lits` to be true, using the sequential
/// (unary running sum) counter. A literal occurring twice counts twice.
void add_at_most(CnfFormula& f, std::span<const int> lits, int bound,
                 const std::string& group = {});

/// Constrains at least `bound` of `lits` to be true (counter over negations).
void add_at_least(CnfFormula& f, std::span<const int> lits, int bound,
                  const std::string& group = {});

std::string emit_dimacs(const CnfFormula& f);

/// Parses DIMACS text produced by emit_dimacs or any conforming tool.
/// Comment lines are skipped; `c group` annotations are restored.
CnfFormula parse_dimacs(const std::string& text);

}  // namespace qcdist
