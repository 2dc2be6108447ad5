#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "semreg/config.hpp"
#include "semreg/datagen.hpp"
#include "semreg/model.hpp"
#include "semreg/trainer.hpp"

namespace semreg {

// Learner variants compared by the experiment grid. `plain` drops the clause
// term entirely; `plain_hierarchy` additionally propagates labels along the
// class chain before training (benchmark 1 only); `oracle` scores the exact
// membership rule and pins the top of the accuracy scale at 1.
enum class Variant {
    constrained_two_stage,
    constrained_single_stage,
    plain,
    plain_hierarchy,
    oracle,
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct ExperimentSpec {
    BenchmarkSpec bench;              // template; labeled/unlabeled/seed filled per cell
    std::vector<int> labeled_sizes;   // per-class labeled budgets (grid axis 1)
    std::vector<int> unlabeled_sizes; // unlabeled pool sizes (grid axis 2)
    int repetitions = 0;              // 0 = benchmark default (10 for 1, 6 for 2-3)
    std::vector<Variant> variants{Variant::constrained_two_stage, Variant::plain};
    TrainConfig train;
    int workers = 1;
    bool propagate_negatives = true;  // hierarchy-label variant switch

    int effective_repetitions() const;
    void validate() const;
};

// Spec text format is key-value; see parse_experiment_spec.
ExperimentSpec parse_experiment_spec(KeyValueFile& kv);
ExperimentSpec load_experiment_spec(const std::string& path);

// Shared config block (lambda_fit, lambda_reg, lambda_v, loss, sigma,
// learning_rate, epochs, tolerance, ...) used by the train subcommand and by
// experiment spec files.
TrainConfig parse_train_config(KeyValueFile& kv);

struct RunRecord {
    Variant variant{};
    int labeled = 0;
    int unlabeled = 0;
    int rep = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;           // failure note when !ok (training divergence)
    double accuracy = 0.0;       // macro average of per-task accuracies
    double exact_match = 0.0;    // all-tasks-correct fraction
    double final_objective = 0.0;
    int epochs = 0;
};

struct TTest {
    double t = 0.0;
    double p = 1.0;
    int pairs = 0;
};

struct CellSummary {
    Variant variant{};
    int labeled = 0;
    int unlabeled = 0;
    int reps = 0;
    int ok = 0;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
    double mean_exact = 0.0;
    TTest vs_baseline;  // against the first variant; pairs = 0 on the baseline row
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<RunRecord> records;  // grid-ordered: labeled x unlabeled x rep x variant
};

// Per-task mean of binary accuracies of `classify` against the labels; the
// test set must be fully labeled.
double accuracy(const Model& m, const Dataset& test);
double exact_match_accuracy(const Model& m, const Dataset& test);

// Two-sided paired t-test with n-1 degrees of freedom. Degenerate cases:
// zero-variance differences give t = 0, p = 1 when the mean is also zero and
// t = +-inf, p = 0 otherwise.
TTest paired_ttest(const std::vector<double>& a, const std::vector<double>& b);

// Pure function of the cell coordinates; every run's derived seed is
// reported in the result CSVs.
std::uint64_t derive_seed(std::uint64_t base, int benchmark, int labeled, int unlabeled, int rep);

// Runs the full grid. Cells x repetitions are independent jobs, executed by
// up to spec.workers threads; all variants of one job share one generated
// instance, which is what makes the t-test pairing valid. Training
// divergence marks the record failed and the run continues; any other error
// aborts.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const std::function<void(const RunRecord&)>& on_done = {});

std::vector<CellSummary> summarize(const ExperimentResult& result);

// Writes long.csv, details.csv, summary.csv, ttests.csv, per-variant series
// files and manifest.txt into `dir`. Deterministic: same result, same bytes.
void emit_report(const ExperimentResult& result, const std::string& dir);

// Rebuilds summary.csv, ttests.csv and the series files from a previously
// written long.csv (pairing runs by seed).
void write_report_from_long_csv(const std::string& long_csv, const std::string& dir);

}  // namespace semreg
