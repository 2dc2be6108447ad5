#pragma once

#include <Eigen/Dense>

#include "semreg/dataset.hpp"
#include "semreg/logic.hpp"

namespace semreg {

enum class LossKind { squared, hinge };

// Weights of the three objective terms. The paper reuses one symbol for the
// fitting and regularization weights; they are split here. lambda_v is a
// global multiplier on the per-clause weights of the ClauseSet and is what
// the stage schedule toggles.
struct ObjectiveConfig {
    LossKind loss = LossKind::squared;
    Eigen::VectorXd lambda_fit;  // per task, or a single broadcast entry; >= 0
    Eigen::VectorXd lambda_reg;  // per task, or a single broadcast entry; > 0
    double lambda_v = 1.0;
    bool preconditioned = true;

    ObjectiveConfig();
    static ObjectiveConfig uniform(double fit, double reg, double v);

    double fit_weight(int task) const;
    double reg_weight(int task) const;
    void validate(int num_tasks) const;
};

struct ObjectiveBreakdown {
    double fit = 0.0;         // supervised risk over the labeled sets
    double reg = 0.0;         // RKHS norms, w_k' K w_k
    double constraint = 0.0;  // clause penalties averaged over the sample set
    double total() const { return fit + reg + constraint; }
};

// Everything one optimization step needs, computed from a single pass:
// F = weights * gram, the term breakdown, and the bracketed term of the
// stationarity condition (the exact gradient is gram times the bracket).
struct ObjectiveEval {
    ObjectiveBreakdown parts;
    Eigen::MatrixXd bracket;  // T x |S|; empty unless requested
    double residual = 0.0;    // max_k ||bracket row k||_inf
};

ObjectiveEval eval_objective_full(const ObjectiveConfig& cfg, const Dataset& data,
                                  const ClauseSet& clauses, const Eigen::MatrixXd& gram,
                                  const Eigen::MatrixXd& weights, bool want_gradient);

ObjectiveBreakdown eval_objective(const ObjectiveConfig& cfg, const Dataset& data,
                                  const ClauseSet& clauses, const Eigen::MatrixXd& gram,
                                  const Eigen::MatrixXd& weights);

// Exact gradient (gram * bracket) or, when cfg.preconditioned, the bracket
// itself. Entries of the loss-derivative vector at unlabeled positions are
// masked to zero; tasks with no labels skip the fitting term entirely.
Eigen::MatrixXd grad_objective(const ObjectiveConfig& cfg, const Dataset& data,
                               const ClauseSet& clauses, const Eigen::MatrixXd& gram,
                               const Eigen::MatrixXd& weights);

// Convergence diagnostic: infinity norm of the bracketed term, which is null
// at stationary points when the Gram matrix is positive definite.
double stationarity_residual(const ObjectiveConfig& cfg, const Dataset& data,
                             const ClauseSet& clauses, const Eigen::MatrixXd& gram,
                             const Eigen::MatrixXd& weights);

// Constraint term restricted to points that carry at least one label,
// averaged over that subset; diagnostic for the stage-boundary coherence
// check.
double constraint_on_labeled(const ClauseSet& clauses, const Dataset& data,
                             const Eigen::MatrixXd& gram, const Eigen::MatrixXd& weights,
                             double lambda_v);

double loss_value(LossKind kind, double f, double y);
double loss_derivative(LossKind kind, double f, double y);

}  // namespace semreg
