#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "semreg/model.hpp"
#include "semreg/objective.hpp"

namespace semreg {

struct TrainConfig {
    ObjectiveConfig objective;
    KernelConfig kernel;
    double learning_rate = 1.0;
    int max_epochs_stage1 = 5000;
    int max_epochs_stage2 = 5000;
    double rel_tolerance = 1e-6;  // stops after `patience` epochs below this
    int patience = 3;
    bool backtracking = true;  // halve the step on objective increase
    std::uint64_t seed = 0;    // recorded for provenance; the loop itself is deterministic
    std::string progress_log_path;  // per-epoch CSV when nonempty

    void validate() const;
};

struct EpochRecord {
    int stage = 0;
    int epoch = 0;
    ObjectiveBreakdown parts;
    double residual = 0.0;
};

struct TrainReport {
    std::vector<EpochRecord> history;
    int epochs_stage1 = 0;
    int epochs_stage2 = 0;
    double final_residual = 0.0;
    double final_objective = 0.0;
    // constraint term over the labeled points, before training and at the
    // stage boundary; coherent supervision should drive it down in stage 1
    double constraint_labeled_initial = 0.0;
    double constraint_labeled_after_stage1 = 0.0;
    double wall_seconds = 0.0;
};

// Two stages of full-batch gradient descent on the expansion weights:
// supervised-only fitting to convergence (clause weights zeroed), then the
// same loop with clause penalties enabled. Weights start at zero, so the
// initial model answers "false" everywhere.
std::pair<Model, TrainReport> train(const TrainConfig& cfg, const Dataset& data,
                                    const ClauseSet& clauses);

// Contrast baseline: one stage with clause penalties active from epoch 0,
// with the combined epoch budget of the two stages.
std::pair<Model, TrainReport> train_single_stage(const TrainConfig& cfg, const Dataset& data,
                                                 const ClauseSet& clauses);

}  // namespace semreg
