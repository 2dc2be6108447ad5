#include "semreg/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "semreg/dataset.hpp"
#include "semreg/kernel.hpp"

namespace semreg {

void TrainConfig::validate() const {
    kernel.validate();
    if (!(learning_rate > 0.0)) raise(ErrorCode::invalid, "learning_rate must be > 0");
    if (max_epochs_stage1 < 0 || max_epochs_stage2 < 0)
        raise(ErrorCode::invalid, "epoch caps must be nonnegative");
    if (!(rel_tolerance > 0.0)) raise(ErrorCode::invalid, "rel_tolerance must be > 0");
    if (patience < 1) raise(ErrorCode::invalid, "patience must be >= 1");
}

namespace {

class ProgressLog {
public:
    explicit ProgressLog(const std::string& path) {
        if (path.empty()) return;
        out_.open(path);
        if (!out_) raise(ErrorCode::io, "cannot write progress log '" + path + "'");
        out_ << "stage,epoch,fit,reg,constraint,objective,residual\n";
    }

    void row(const EpochRecord& r) {
        if (!out_.is_open()) return;
        out_ << r.stage << "," << r.epoch << "," << format_double(r.parts.fit) << ","
             << format_double(r.parts.reg) << "," << format_double(r.parts.constraint) << ","
             << format_double(r.parts.total()) << "," << format_double(r.residual) << "\n";
    }

private:
    std::ofstream out_;
};

struct StageOutcome {
    int epochs = 0;
    double final_residual = 0.0;
    double final_objective = 0.0;
};

// One stage of descent on `weights` in place. The step direction is the
// bracketed stationarity term (preconditioned mode) or gram times it.
StageOutcome run_stage(int stage, const TrainConfig& cfg, const ObjectiveConfig& obj,
                       const Dataset& data, const ClauseSet& clauses,
                       const Eigen::MatrixXd& gram, Eigen::MatrixXd& weights, int max_epochs,
                       TrainReport& report, ProgressLog& log) {
    StageOutcome out;
    ObjectiveEval ev = eval_objective_full(obj, data, clauses, gram, weights, true);
    double current = ev.parts.total();
    if (!std::isfinite(current))
        raise(ErrorCode::diverged, "objective is non-finite before stage " +
                                       std::to_string(stage) + " (epoch 0)");
    out.final_residual = ev.residual;
    out.final_objective = current;

    int calm_epochs = 0;
    for (int epoch = 0; epoch < max_epochs; ++epoch) {
        Eigen::MatrixXd direction =
            obj.preconditioned ? std::move(ev.bracket) : Eigen::MatrixXd(ev.bracket * gram);

        double rate = cfg.learning_rate;
        Eigen::MatrixXd trial;
        ObjectiveEval trial_ev;
        bool accepted = false;
        for (int half = 0; half < 64; ++half) {
            trial = weights - rate * direction;
            trial_ev = eval_objective_full(obj, data, clauses, gram, trial, true);
            double value = trial_ev.parts.total();
            if (!cfg.backtracking) {
                if (!std::isfinite(value))
                    raise(ErrorCode::diverged, "objective became non-finite at stage " +
                                                   std::to_string(stage) + ", epoch " +
                                                   std::to_string(epoch));
                accepted = true;
                break;
            }
            if (std::isfinite(value) && value <= current) {
                accepted = true;
                break;
            }
            rate *= 0.5;
        }
        if (!accepted) {
            if (!std::isfinite(trial_ev.parts.total()))
                raise(ErrorCode::diverged, "objective became non-finite at stage " +
                                               std::to_string(stage) + ", epoch " +
                                               std::to_string(epoch));
            break;  // no descent direction progress left at this precision
        }

        weights = std::move(trial);
        double value = trial_ev.parts.total();
        double decrease = current - value;
        double rel = decrease / std::max(std::abs(current), 1e-300);
        current = value;
        ev = std::move(trial_ev);

        ++out.epochs;
        out.final_residual = ev.residual;
        out.final_objective = current;
        EpochRecord rec{stage, epoch, ev.parts, ev.residual};
        report.history.push_back(rec);
        log.row(rec);

        if (cfg.backtracking) {
            calm_epochs = rel < cfg.rel_tolerance ? calm_epochs + 1 : 0;
            if (calm_epochs >= cfg.patience) break;
        } else if (std::abs(rel) < cfg.rel_tolerance) {
            calm_epochs += 1;
            if (calm_epochs >= cfg.patience) break;
        } else {
            calm_epochs = 0;
        }
    }
    return out;
}

std::pair<Model, TrainReport> run_training(const TrainConfig& cfg, const Dataset& data,
                                           const ClauseSet& clauses, bool two_stage) {
    cfg.validate();
    data.validate();
    clauses.validate();
    if (clauses.max_task_index() >= data.num_tasks())
        raise(ErrorCode::invalid, "clause set references a task the dataset does not declare");

    auto t0 = std::chrono::steady_clock::now();
    Eigen::MatrixXd gram = build_gram(cfg.kernel, data.points);
    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(data.num_tasks(), data.num_points());

    TrainReport report;
    ProgressLog log(cfg.progress_log_path);

    ObjectiveConfig supervised_only = cfg.objective;
    supervised_only.lambda_v = 0.0;

    report.constraint_labeled_initial =
        constraint_on_labeled(clauses, data, gram, weights, cfg.objective.lambda_v);

    StageOutcome last;
    if (two_stage) {
        last = run_stage(1, cfg, supervised_only, data, clauses, gram, weights,
                         cfg.max_epochs_stage1, report, log);
        report.epochs_stage1 = last.epochs;
        report.constraint_labeled_after_stage1 =
            constraint_on_labeled(clauses, data, gram, weights, cfg.objective.lambda_v);
        // With no clauses V is identically zero, so stage 2 would re-minimize
        // the objective stage 1 just converged on; keep the stage-1 weights.
        if (!clauses.clauses.empty()) {
            last = run_stage(2, cfg, cfg.objective, data, clauses, gram, weights,
                             cfg.max_epochs_stage2, report, log);
            report.epochs_stage2 = last.epochs;
        }
    } else {
        last = run_stage(1, cfg, cfg.objective, data, clauses, gram, weights,
                         cfg.max_epochs_stage1 + cfg.max_epochs_stage2, report, log);
        report.epochs_stage1 = last.epochs;
        report.constraint_labeled_after_stage1 =
            constraint_on_labeled(clauses, data, gram, weights, cfg.objective.lambda_v);
    }

    // Final diagnostics always against the full (constrained) objective.
    ObjectiveEval final_ev = eval_objective_full(cfg.objective, data, clauses, gram, weights, true);
    report.final_residual = final_ev.residual;
    report.final_objective = final_ev.parts.total();
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Model model;
    model.weights = std::move(weights);
    model.points = data.points;
    model.kernel = cfg.kernel;
    model.task_names = data.task_names;
    return {std::move(model), std::move(report)};
}

}  // namespace

std::pair<Model, TrainReport> train(const TrainConfig& cfg, const Dataset& data,
                                    const ClauseSet& clauses) {
    return run_training(cfg, data, clauses, true);
}

std::pair<Model, TrainReport> train_single_stage(const TrainConfig& cfg, const Dataset& data,
                                                 const ClauseSet& clauses) {
    return run_training(cfg, data, clauses, false);
}

}  // namespace semreg
