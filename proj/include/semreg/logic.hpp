#pragma once

#include <memory>
#include <string>
#include <vector>

#include "semreg/error.hpp"

namespace semreg {

struct Formula;
using FormulaPtr = std::unique_ptr<Formula>;

// Propositional formula over named task predicates. Var nodes carry both the
// task name and its index in the declared task list.
struct Formula {
    enum class Kind { Var, Not, And, Or, Implies };

    Kind kind;
    int var = -1;       // Kind::Var only
    std::string name;   // Kind::Var only
    FormulaPtr lhs;     // operand of Not; left operand otherwise
    FormulaPtr rhs;     // right operand of And/Or/Implies

    static FormulaPtr make_var(std::string name, int index);
    static FormulaPtr make_not(FormulaPtr f);
    static FormulaPtr make_and(FormulaPtr a, FormulaPtr b);
    static FormulaPtr make_or(FormulaPtr a, FormulaPtr b);
    static FormulaPtr make_implies(FormulaPtr a, FormulaPtr b);

    FormulaPtr clone() const;
    int max_var() const;
};

// One disjunction of a CNF, stored as the sets of asserted and negated task
// indices. Both vectors are sorted ascending and disjoint; at least one of
// them is nonempty.
struct CnfClause {
    std::vector<int> positive;
    std::vector<int> negated;

    bool operator==(const CnfClause&) const = default;
    bool mentions(int task) const;
    int max_task() const;
};

// A weighted conjunction of CNF clauses over a fixed task table.
struct ClauseSet {
    std::vector<CnfClause> clauses;
    std::vector<double> weights;      // one per clause, >= 0
    std::vector<std::string> tasks;   // index -> task name

    bool empty() const { return clauses.empty(); }
    int max_task_index() const;
    void validate() const;
};

// Grammar: identifiers [a-zA-Z_][a-zA-Z0-9_]*, '!' not, '&' and, '|' or,
// '->' implies (right-associative, lowest precedence), parentheses, '#'
// comments. Every identifier must appear in `tasks`.
FormulaPtr parse_formula(const std::string& text, const std::vector<std::string>& tasks);

// Equivalent CNF of f under classical semantics. Implication elimination,
// negation push-down and distribution; no auxiliary variables. Tautological
// disjunctions are dropped, duplicate literals merged, clauses and literals
// sorted by task index, duplicate clauses removed. A tautology yields an
// empty list.
std::vector<CnfClause> to_cnf(const Formula& f);

// Classical two-valued evaluation. `assignment` must cover every variable of
// f (index < assignment.size()).
bool eval_boolean(const Formula& f, const std::vector<bool>& assignment);

// Clause files: one formula per line, '#' starts a comment, blank lines are
// skipped. An optional "weight=<float>:" prefix sets the weight of every
// clause produced by that line (default 1).
ClauseSet parse_clause_text(const std::string& text, const std::vector<std::string>& tasks);
ClauseSet parse_clause_file(const std::string& path, const std::vector<std::string>& tasks);

FormulaPtr clause_to_formula(const CnfClause& c, const std::vector<std::string>& tasks);
std::string to_string(const Formula& f);
std::string to_string(const CnfClause& c, const std::vector<std::string>& tasks);

}  // namespace semreg
