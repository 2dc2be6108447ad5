#include "semreg/objective.hpp"

#include <cmath>
#include <string>

#include "semreg/tnorm.hpp"

namespace semreg {

ObjectiveConfig::ObjectiveConfig() {
    lambda_fit = Eigen::VectorXd::Constant(1, 1.0);
    lambda_reg = Eigen::VectorXd::Constant(1, 0.01);
}

ObjectiveConfig ObjectiveConfig::uniform(double fit, double reg, double v) {
    ObjectiveConfig cfg;
    cfg.lambda_fit = Eigen::VectorXd::Constant(1, fit);
    cfg.lambda_reg = Eigen::VectorXd::Constant(1, reg);
    cfg.lambda_v = v;
    return cfg;
}

double ObjectiveConfig::fit_weight(int task) const {
    return lambda_fit.size() == 1 ? lambda_fit[0] : lambda_fit[task];
}

double ObjectiveConfig::reg_weight(int task) const {
    return lambda_reg.size() == 1 ? lambda_reg[0] : lambda_reg[task];
}

void ObjectiveConfig::validate(int num_tasks) const {
    auto check_size = [&](const Eigen::VectorXd& v, const char* what) {
        if (v.size() != 1 && v.size() != num_tasks)
            raise(ErrorCode::invalid, std::string(what) + " must have 1 or num_tasks entries");
        if (!v.allFinite())
            raise(ErrorCode::invalid, std::string(what) + " must be finite");
    };
    check_size(lambda_fit, "lambda_fit");
    check_size(lambda_reg, "lambda_reg");
    if ((lambda_fit.array() < 0.0).any())
        raise(ErrorCode::invalid, "lambda_fit must be nonnegative");
    if ((lambda_reg.array() <= 0.0).any())
        raise(ErrorCode::invalid, "lambda_reg must be strictly positive");
    if (!std::isfinite(lambda_v) || lambda_v < 0.0)
        raise(ErrorCode::invalid, "lambda_v must be finite and nonnegative");
}

double loss_value(LossKind kind, double f, double y) {
    switch (kind) {
        case LossKind::squared: {
            double e = f - y;
            return e * e;
        }
        case LossKind::hinge: {
            // margin form on {0,1} targets; kink treated like the squash kinks
            double m = (2.0 * y - 1.0) * (2.0 * f - 1.0);
            return std::max(0.0, 1.0 - m);
        }
    }
    raise(ErrorCode::internal, "bad loss kind");
}

double loss_derivative(LossKind kind, double f, double y) {
    switch (kind) {
        case LossKind::squared:
            return 2.0 * (f - y);
        case LossKind::hinge: {
            double m = (2.0 * y - 1.0) * (2.0 * f - 1.0);
            return m < 1.0 ? -2.0 * (2.0 * y - 1.0) : 0.0;
        }
    }
    raise(ErrorCode::internal, "bad loss kind");
}

ObjectiveEval eval_objective_full(const ObjectiveConfig& cfg, const Dataset& data,
                                  const ClauseSet& clauses, const Eigen::MatrixXd& gram,
                                  const Eigen::MatrixXd& weights, bool want_gradient) {
    const int n = data.num_points();
    const int t = data.num_tasks();
    cfg.validate(t);
    clauses.validate();
    if (weights.rows() != t || weights.cols() != n)
        raise(ErrorCode::invalid, "weights must be shaped num_tasks x num_points");
    if (gram.rows() != n || gram.cols() != n)
        raise(ErrorCode::invalid, "gram matrix shape does not match the sample set");
    if (clauses.max_task_index() >= t)
        raise(ErrorCode::invalid, "clause set references a task the dataset does not declare");

    ObjectiveEval ev;
    // f_k(x_j) for every sample: row k of F
    Eigen::MatrixXd outputs = weights * gram;

    if (want_gradient) ev.bracket = Eigen::MatrixXd::Zero(t, n);

    // fitting term and its masked loss-derivative vector
    for (int k = 0; k < t; ++k) {
        double lam = cfg.fit_weight(k);
        std::vector<int> labeled = data.labeled_indices(k);
        if (labeled.empty() || lam == 0.0) continue;
        double inv_l = 1.0 / static_cast<double>(labeled.size());
        double sum = 0.0;
        for (int j : labeled) {
            double y = static_cast<double>(data.labels(k, j));
            sum += loss_value(cfg.loss, outputs(k, j), y);
            if (want_gradient)
                ev.bracket(k, j) += lam * inv_l * loss_derivative(cfg.loss, outputs(k, j), y);
        }
        ev.parts.fit += lam * inv_l * sum;
    }

    // regularization: lambda_reg_k * w_k' K w_k; K w_k is outputs row k
    for (int k = 0; k < t; ++k) {
        double lam = cfg.reg_weight(k);
        ev.parts.reg += lam * weights.row(k).dot(outputs.row(k));
    }
    if (want_gradient)
        for (int k = 0; k < t; ++k)
            ev.bracket.row(k) += 2.0 * cfg.reg_weight(k) * weights.row(k);

    // constraint term: (1/|S|) sum_h lambda_h sum_j penalty_h(f(x_j))
    if (!clauses.empty() && cfg.lambda_v != 0.0) {
        double inv_s = 1.0 / static_cast<double>(n);
        std::vector<double> f(t);
        std::vector<double> grad_col(t);
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < t; ++k) f[k] = outputs(k, j);
            double acc = 0.0;
            std::fill(grad_col.begin(), grad_col.end(), 0.0);
            for (size_t h = 0; h < clauses.clauses.size(); ++h) {
                double w = cfg.lambda_v * clauses.weights[h];
                if (w == 0.0) continue;
                double p = want_gradient
                               ? clause_penalty_grad_into(clauses.clauses[h], f, w * inv_s, grad_col)
                               : clause_penalty(clauses.clauses[h], f);
                acc += w * p;
            }
            ev.parts.constraint += inv_s * acc;
            if (want_gradient)
                for (int k = 0; k < t; ++k) ev.bracket(k, j) += grad_col[k];
        }
    }

    if (want_gradient)
        ev.residual = ev.bracket.size() == 0 ? 0.0 : ev.bracket.cwiseAbs().maxCoeff();
    return ev;
}

ObjectiveBreakdown eval_objective(const ObjectiveConfig& cfg, const Dataset& data,
                                  const ClauseSet& clauses, const Eigen::MatrixXd& gram,
                                  const Eigen::MatrixXd& weights) {
    return eval_objective_full(cfg, data, clauses, gram, weights, false).parts;
}

Eigen::MatrixXd grad_objective(const ObjectiveConfig& cfg, const Dataset& data,
                               const ClauseSet& clauses, const Eigen::MatrixXd& gram,
                               const Eigen::MatrixXd& weights) {
    ObjectiveEval ev = eval_objective_full(cfg, data, clauses, gram, weights, true);
    if (cfg.preconditioned) return ev.bracket;
    return ev.bracket * gram;  // gram is symmetric
}

double stationarity_residual(const ObjectiveConfig& cfg, const Dataset& data,
                             const ClauseSet& clauses, const Eigen::MatrixXd& gram,
                             const Eigen::MatrixXd& weights) {
    return eval_objective_full(cfg, data, clauses, gram, weights, true).residual;
}

double constraint_on_labeled(const ClauseSet& clauses, const Dataset& data,
                             const Eigen::MatrixXd& gram, const Eigen::MatrixXd& weights,
                             double lambda_v) {
    const int n = data.num_points();
    const int t = data.num_tasks();
    if (clauses.empty() || lambda_v == 0.0) return 0.0;
    Eigen::MatrixXd outputs = weights * gram;
    std::vector<double> f(t);
    double sum = 0.0;
    int count = 0;
    for (int j = 0; j < n; ++j) {
        bool labeled = false;
        for (int k = 0; k < t && !labeled; ++k) labeled = data.labels(k, j) >= 0;
        if (!labeled) continue;
        ++count;
        for (int k = 0; k < t; ++k) f[k] = outputs(k, j);
        for (size_t h = 0; h < clauses.clauses.size(); ++h)
            sum += lambda_v * clauses.weights[h] * clause_penalty(clauses.clauses[h], f);
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

}  // namespace semreg
