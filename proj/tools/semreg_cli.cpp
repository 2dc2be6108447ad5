// Command-line front end. Talks to the library exclusively through the C
// API, which is what keeps the shared-library boundary honest.
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "semreg/semreg.h"

namespace {

std::string fmt(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

int report_failure(semreg_status status) {
    std::fprintf(stderr, "error: %s\n", semreg_last_error());
    return static_cast<int>(status);
}

void print_progress(const char* message, void*) { std::fprintf(stderr, "%s\n", message); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-task kernel machines with logic-clause regularization"};
    app.require_subcommand(1);
    app.set_version_flag("--version", []() { return std::string(semreg_version()); });

    // generate
    auto* generate = app.add_subcommand("generate", "Sample a synthetic benchmark instance");
    int benchmark = 1, dimension = 0, classes = 0, labeled = 10, unlabeled = 100, test_pc = 100;
    std::uint64_t seed = 0;
    double side = 1.0, alpha = 1.3;
    std::string gen_out;
    generate->add_option("--benchmark", benchmark, "Benchmark id: 1, 2 or 3")->required();
    generate->add_option("--dimension", dimension, "Input dimension (default 2 / 3 / 3)");
    generate->add_option("--classes", classes, "Class count (benchmark 1 only)");
    generate->add_option("--labeled", labeled, "Labeled examples per class (even)");
    generate->add_option("--unlabeled", unlabeled, "Unlabeled pool size");
    generate->add_option("--test-per-class", test_pc, "Test examples per class");
    generate->add_option("--seed", seed, "RNG seed");
    generate->add_option("--side", side, "Benchmark 1: innermost square side");
    generate->add_option("--alpha", alpha, "Benchmark 1: growth factor");
    generate->add_option("--out", gen_out, "Output directory")->required();

    // train
    auto* train = app.add_subcommand("train", "Fit a model on a dataset");
    std::string train_data, train_clauses, train_config, train_out;
    bool single_stage = false;
    train->add_option("--data", train_data, "Training CSV")->required();
    train->add_option("--clauses", train_clauses, "Clause file (omit to train unconstrained)");
    train->add_option("--config", train_config, "Key-value training config");
    train->add_flag("--single-stage", single_stage, "Enable clause penalties from epoch 0");
    train->add_option("--out", train_out, "Model output path")->required();

    // predict
    auto* predict = app.add_subcommand("predict", "Evaluate a model on points");
    std::string pred_model, pred_points, pred_out;
    predict->add_option("--model", pred_model, "Model file")->required();
    predict->add_option("--points", pred_points, "Points CSV")->required();
    predict->add_option("--out", pred_out, "Output CSV")->required();

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score a model on a labeled test set");
    std::string eval_model, eval_data;
    evaluate->add_option("--model", eval_model, "Model file")->required();
    evaluate->add_option("--data", eval_data, "Fully labeled test CSV")->required();

    // benchmark
    auto* bench = app.add_subcommand("benchmark", "Run an experiment grid");
    std::string bench_spec, bench_out;
    bool quiet = false;
    bench->add_option("--spec", bench_spec, "Experiment spec (key-value)")->required();
    bench->add_option("--out", bench_out, "Output directory")->required();
    bench->add_flag("--quiet", quiet, "Suppress per-run progress on stderr");

    // report
    auto* report = app.add_subcommand("report", "Rebuild summary and series files from long.csv");
    std::string rep_long, rep_out;
    report->add_option("--long", rep_long, "long.csv from a benchmark run")->required();
    report->add_option("--out", rep_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(SEMREG_ERR_PARSE);
    }

    if (generate->parsed()) {
        if (dimension == 0) dimension = benchmark == 1 ? 2 : 3;
        semreg_status st = semreg_generate(benchmark, dimension, classes, labeled, unlabeled,
                                           test_pc, seed, side, alpha, gen_out.c_str());
        if (st != SEMREG_OK) return report_failure(st);
        std::printf("wrote %s/{train.csv,test.csv,clauses.txt,manifest.txt}\n", gen_out.c_str());
        return 0;
    }

    if (train->parsed()) {
        semreg_train_stats stats{};
        semreg_status st = semreg_train(train_data.c_str(),
                                        train_clauses.empty() ? nullptr : train_clauses.c_str(),
                                        train_config.empty() ? nullptr : train_config.c_str(),
                                        single_stage ? 1 : 0, train_out.c_str(), &stats);
        if (st != SEMREG_OK) return report_failure(st);
        std::printf("model = %s\n", train_out.c_str());
        std::printf("epochs_stage1 = %d\n", stats.epochs_stage1);
        std::printf("epochs_stage2 = %d\n", stats.epochs_stage2);
        std::printf("final_objective = %s\n", fmt(stats.final_objective).c_str());
        std::printf("final_residual = %s\n", fmt(stats.final_residual).c_str());
        std::printf("constraint_labeled_initial = %s\n",
                    fmt(stats.constraint_labeled_initial).c_str());
        std::printf("constraint_labeled_after_stage1 = %s\n",
                    fmt(stats.constraint_labeled_after_stage1).c_str());
        return 0;
    }

    if (predict->parsed()) {
        semreg_status st =
            semreg_predict(pred_model.c_str(), pred_points.c_str(), pred_out.c_str());
        if (st != SEMREG_OK) return report_failure(st);
        std::printf("wrote %s\n", pred_out.c_str());
        return 0;
    }

    if (evaluate->parsed()) {
        double acc = 0.0, exact = 0.0;
        semreg_status st = semreg_evaluate(eval_model.c_str(), eval_data.c_str(), &acc, &exact);
        if (st != SEMREG_OK) return report_failure(st);
        std::printf("accuracy = %s\n", fmt(acc).c_str());
        std::printf("exact_match = %s\n", fmt(exact).c_str());
        return 0;
    }

    if (bench->parsed()) {
        semreg_status st = semreg_run_experiment(bench_spec.c_str(), bench_out.c_str(),
                                                 quiet ? nullptr : print_progress, nullptr);
        if (st != SEMREG_OK) return report_failure(st);
        std::printf("wrote %s/{long.csv,details.csv,summary.csv,ttests.csv,series_*.csv}\n",
                    bench_out.c_str());
        return 0;
    }

    if (report->parsed()) {
        semreg_status st = semreg_report(rep_long.c_str(), rep_out.c_str());
        if (st != SEMREG_OK) return report_failure(st);
        std::printf("wrote %s/{summary.csv,ttests.csv,series_*.csv}\n", rep_out.c_str());
        return 0;
    }

    return static_cast<int>(SEMREG_ERR_INTERNAL);  // unreachable: a subcommand is required
}
