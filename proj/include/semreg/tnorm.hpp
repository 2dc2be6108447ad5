#pragma once

#include <span>
#include <vector>

#include "semreg/logic.hpp"

namespace semreg {

// Piecewise-linear squash sigma(y) = min(1, max(y, 0)). The derivative uses
// the subgradient 0 at the kinks y = 0 and y = 1, so saturated outputs stop
// receiving constraint pressure.
double squash(double y);
double squash_derivative(double y);

// Product t-norm penalty of one CNF disjunction at raw task outputs f:
//
//   prod_{i in N} sigma(f_i) * prod_{j in P} (1 - sigma(f_j))
//
// i.e. 1 minus the t-norm truth value of the disjunction. Null exactly when
// some asserted literal is fully true or some negated literal is fully
// false. Factors are accumulated in ascending task-index order.
double clause_penalty(const CnfClause& c, std::span<const double> f);

// Analytic gradient of clause_penalty with respect to each f_k: for k in N
//   sigma'(f_k) * prod_{i in N\{k}} sigma(f_i) * prod_{j in P} (1 - sigma(f_j))
// and the negated analogue for k in P; zero for tasks not in the clause.
std::vector<double> clause_penalty_grad(const CnfClause& c, std::span<const double> f);

// Accumulating form used in the objective inner loop: adds scale * gradient
// into out (length >= number of tasks). Returns the penalty value.
double clause_penalty_grad_into(const CnfClause& c, std::span<const double> f, double scale,
                                std::span<double> out);

// Recursive product t-norm evaluation of a formula: AND = x*y,
// OR = x + y - x*y, NOT = 1 - x, A -> B as !A | B. Inputs must lie in [0,1].
double tnorm_truth_value(const Formula& f, const std::vector<double>& a);

}  // namespace semreg
