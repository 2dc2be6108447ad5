#include "semreg/tnorm.hpp"

#include <cmath>
#include <string>

namespace semreg {

namespace {

void check_finite(double y) {
    if (!std::isfinite(y))
        raise(ErrorCode::invalid, "non-finite input to squash");
}

// Validates that every task referenced by the clause has a finite entry.
void check_clause_inputs(const CnfClause& c, std::span<const double> f) {
    int t = static_cast<int>(f.size());
    if (c.max_task() >= t)
        raise(ErrorCode::invalid, "clause references task index " +
                                      std::to_string(c.max_task()) + " but output vector has " +
                                      std::to_string(t) + " entries");
    for (int i : c.negated) check_finite(f[i]);
    for (int j : c.positive) check_finite(f[j]);
}

}  // namespace

double squash(double y) {
    check_finite(y);
    return std::min(1.0, std::max(y, 0.0));
}

double squash_derivative(double y) {
    check_finite(y);
    return (y > 0.0 && y < 1.0) ? 1.0 : 0.0;
}

double clause_penalty(const CnfClause& c, std::span<const double> f) {
    check_clause_inputs(c, f);
    double p = 1.0;
    for (int i : c.negated) p *= squash(f[i]);
    for (int j : c.positive) p *= 1.0 - squash(f[j]);
    return p;
}

double clause_penalty_grad_into(const CnfClause& c, std::span<const double> f, double scale,
                                std::span<double> out) {
    check_clause_inputs(c, f);
    double p = 1.0;
    for (int i : c.negated) p *= squash(f[i]);
    for (int j : c.positive) p *= 1.0 - squash(f[j]);
    if (scale != 0.0) {
        for (int k : c.negated) {
            double g = squash_derivative(f[k]);
            if (g == 0.0) continue;
            for (int i : c.negated)
                if (i != k) g *= squash(f[i]);
            for (int j : c.positive) g *= 1.0 - squash(f[j]);
            out[k] += scale * g;
        }
        for (int k : c.positive) {
            double g = -squash_derivative(f[k]);
            if (g == 0.0) continue;
            for (int i : c.negated) g *= squash(f[i]);
            for (int j : c.positive)
                if (j != k) g *= 1.0 - squash(f[j]);
            out[k] += scale * g;
        }
    }
    return p;
}

std::vector<double> clause_penalty_grad(const CnfClause& c, std::span<const double> f) {
    std::vector<double> grad(f.size(), 0.0);
    clause_penalty_grad_into(c, f, 1.0, grad);
    return grad;
}

double tnorm_truth_value(const Formula& f, const std::vector<double>& a) {
    switch (f.kind) {
        case Formula::Kind::Var: {
            if (f.var < 0 || f.var >= static_cast<int>(a.size()))
                raise(ErrorCode::invalid, "missing value for variable '" + f.name + "'");
            double v = a[f.var];
            if (!std::isfinite(v) || v < 0.0 || v > 1.0)
                raise(ErrorCode::invalid, "t-norm input for '" + f.name + "' outside [0,1]");
            return v;
        }
        case Formula::Kind::Not:
            return 1.0 - tnorm_truth_value(*f.lhs, a);
        case Formula::Kind::And:
            return tnorm_truth_value(*f.lhs, a) * tnorm_truth_value(*f.rhs, a);
        case Formula::Kind::Or: {
            double x = tnorm_truth_value(*f.lhs, a);
            double y = tnorm_truth_value(*f.rhs, a);
            return x + y - x * y;
        }
        case Formula::Kind::Implies: {
            double x = 1.0 - tnorm_truth_value(*f.lhs, a);
            double y = tnorm_truth_value(*f.rhs, a);
            return x + y - x * y;
        }
    }
    raise(ErrorCode::internal, "bad formula node");
}

}  // namespace semreg
