#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "semreg/semreg.h"

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() / (std::string("semreg_capi_") + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const char* name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    REQUIRE(out.is_open());
    out << text;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.is_open());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

const char* kTinyCsv =
    "x1,x2,a,b\n"
    "0,0,1,0\n"
    "2,0,0,1\n"
    "0,2,?,1\n";

}  // namespace

TEST_CASE("version and error strings are always available") {
    REQUIRE(semreg_version() != nullptr);
    CHECK(std::strlen(semreg_version()) > 0);
    REQUIRE(semreg_last_error() != nullptr);
}

TEST_CASE("null arguments are rejected without crashing") {
    CHECK(semreg_dataset_load(nullptr, nullptr) == SEMREG_ERR_INVALID);
    CHECK(std::strlen(semreg_last_error()) > 0);
    CHECK(semreg_dataset_save(nullptr, "x") == SEMREG_ERR_INVALID);
    CHECK(semreg_clauses_parse(nullptr, nullptr, nullptr) == SEMREG_ERR_INVALID);
    CHECK(semreg_model_load("p", nullptr) == SEMREG_ERR_INVALID);
    CHECK(semreg_model_predict(nullptr, nullptr, 0, nullptr) == SEMREG_ERR_INVALID);
    CHECK(semreg_train(nullptr, nullptr, nullptr, 0, nullptr, nullptr) == SEMREG_ERR_INVALID);
    semreg_dataset_free(nullptr);  // free of NULL is a no-op
    semreg_clauses_free(nullptr);
    semreg_model_free(nullptr);
}

TEST_CASE("status codes distinguish io, parse and contract failures") {
    TempDir dir("status");
    semreg_dataset* ds = nullptr;
    CHECK(semreg_dataset_load(dir.str("missing.csv").c_str(), &ds) == SEMREG_ERR_IO);
    CHECK(ds == nullptr);

    write_text(dir.str("mangled.csv"), "x1,x2,a\n0,0,maybe\n");
    CHECK(semreg_dataset_load(dir.str("mangled.csv").c_str(), &ds) == SEMREG_ERR_PARSE);
    CHECK(std::string(semreg_last_error()).find("mangled.csv") != std::string::npos);

    CHECK(semreg_generate(9, 2, 2, 4, 10, 10, 1, 1.0, 1.3, dir.str("g").c_str()) ==
          SEMREG_ERR_INVALID);
}

TEST_CASE("dataset handles expose the loaded contents") {
    TempDir dir("dataset");
    write_text(dir.str("tiny.csv"), kTinyCsv);
    semreg_dataset* ds = nullptr;
    REQUIRE(semreg_dataset_load(dir.str("tiny.csv").c_str(), &ds) == SEMREG_OK);
    CHECK(semreg_dataset_num_points(ds) == 3);
    CHECK(semreg_dataset_dimension(ds) == 2);
    CHECK(semreg_dataset_num_tasks(ds) == 2);
    CHECK(std::string(semreg_dataset_task_name(ds, 0)) == "a");
    CHECK(std::string(semreg_dataset_task_name(ds, 1)) == "b");
    CHECK(semreg_dataset_task_name(ds, 7) == nullptr);
    CHECK(semreg_dataset_label(ds, 0, 0) == 1);
    CHECK(semreg_dataset_label(ds, 0, 2) == -1);
    CHECK(semreg_dataset_label(ds, 1, 2) == 1);

    REQUIRE(semreg_dataset_save(ds, dir.str("copy.csv").c_str()) == SEMREG_OK);
    CHECK(slurp(dir.str("copy.csv")) == kTinyCsv);
    semreg_dataset_free(ds);
}

TEST_CASE("clause handles parse against a dataset's task table") {
    TempDir dir("clauses");
    write_text(dir.str("tiny.csv"), kTinyCsv);
    semreg_dataset* ds = nullptr;
    REQUIRE(semreg_dataset_load(dir.str("tiny.csv").c_str(), &ds) == SEMREG_OK);

    semreg_clauses* cs = nullptr;
    REQUIRE(semreg_clauses_parse("a -> b\na | b\n", ds, &cs) == SEMREG_OK);
    CHECK(semreg_clauses_count(cs) == 2);
    semreg_clauses_free(cs);

    CHECK(semreg_clauses_parse("a -> zebra\n", ds, &cs) == SEMREG_ERR_PARSE);
    CHECK(std::string(semreg_last_error()).find("zebra") != std::string::npos);

    write_text(dir.str("cl.txt"), "weight=2: a -> b\n");
    REQUIRE(semreg_clauses_load(dir.str("cl.txt").c_str(), ds, &cs) == SEMREG_OK);
    CHECK(semreg_clauses_count(cs) == 1);
    semreg_clauses_free(cs);
    semreg_dataset_free(ds);
}

TEST_CASE("generate, train, predict and evaluate run end to end") {
    TempDir dir("e2e");
    REQUIRE(semreg_generate(2, 3, 0, 6, 20, 10, 5, 1.0, 1.3, dir.path.string().c_str()) ==
            SEMREG_OK);
    CHECK(fs::exists(dir.path / "train.csv"));
    CHECK(fs::exists(dir.path / "test.csv"));
    CHECK(fs::exists(dir.path / "clauses.txt"));
    CHECK(fs::exists(dir.path / "manifest.txt"));

    write_text(dir.str("train.cfg"), "max_epochs_stage1 = 200\nmax_epochs_stage2 = 200\n");
    semreg_train_stats stats;
    REQUIRE(semreg_train(dir.str("train.csv").c_str(), dir.str("clauses.txt").c_str(),
                         dir.str("train.cfg").c_str(), 0, dir.str("model.txt").c_str(),
                         &stats) == SEMREG_OK);
    CHECK(stats.epochs_stage1 > 0);
    CHECK(std::isfinite(stats.final_objective));
    CHECK(stats.constraint_labeled_initial > stats.constraint_labeled_after_stage1);

    semreg_model* model = nullptr;
    REQUIRE(semreg_model_load(dir.str("model.txt").c_str(), &model) == SEMREG_OK);
    CHECK(semreg_model_num_tasks(model) == 3);
    CHECK(semreg_model_dimension(model) == 3);
    CHECK(std::string(semreg_model_task_name(model, 2)) == "c");

    double x[3] = {1.5, 1.0, 0.5};
    double out[3] = {-1, -1, -1};
    REQUIRE(semreg_model_predict(model, x, 3, out) == SEMREG_OK);
    for (double f : out) CHECK(std::isfinite(f));
    CHECK(semreg_model_predict(model, x, 2, out) == SEMREG_ERR_INVALID);  // dimension mismatch
    semreg_model_free(model);

    REQUIRE(semreg_predict(dir.str("model.txt").c_str(), dir.str("test.csv").c_str(),
                           dir.str("pred.csv").c_str()) == SEMREG_OK);
    CHECK(slurp(dir.str("pred.csv")).rfind("f_a,f_b,f_c,y_a,y_b,y_c\n", 0) == 0);

    double acc = 0, exact = 0;
    REQUIRE(semreg_evaluate(dir.str("model.txt").c_str(), dir.str("test.csv").c_str(), &acc,
                            &exact) == SEMREG_OK);
    CHECK(acc > 0.5);
    CHECK(acc <= 1.0);
    CHECK(exact >= 0.0);
    CHECK(exact <= acc + 1e-12);

    // scoring needs every label; the train split has unlabeled rows
    CHECK(semreg_evaluate(dir.str("model.txt").c_str(), dir.str("train.csv").c_str(), &acc,
                          &exact) == SEMREG_ERR_INVALID);
}

TEST_CASE("training reports divergence through the status code") {
    TempDir dir("diverge");
    REQUIRE(semreg_generate(2, 3, 0, 4, 6, 5, 2, 1.0, 1.3, dir.path.string().c_str()) == SEMREG_OK);
    write_text(dir.str("wild.cfg"),
               "learning_rate = 1e6\nbacktracking = false\nmax_epochs_stage1 = 200\n");
    semreg_status st = semreg_train(dir.str("train.csv").c_str(), nullptr,
                                    dir.str("wild.cfg").c_str(), 1, dir.str("m.txt").c_str(),
                                    nullptr);
    CHECK(st == SEMREG_ERR_DIVERGED);
    CHECK(std::string(semreg_last_error()).find("non-finite") != std::string::npos);
    CHECK(!fs::exists(dir.path / "m.txt"));  // no model is written on failure
}

TEST_CASE("experiment grids and report rebuilds run through the flat API") {
    TempDir dir("grid");
    write_text(dir.str("spec.cfg"),
               "benchmark = 2\n"
               "labeled = 4\n"
               "unlabeled = 6\n"
               "repetitions = 2\n"
               "test_per_class = 5\n"
               "variants = plain oracle\n"
               "max_epochs_stage1 = 80\n"
               "max_epochs_stage2 = 80\n");
    int progress_calls = 0;
    auto bump = [](const char* message, void* user) {
        CHECK(message != nullptr);
        ++*static_cast<int*>(user);
    };
    REQUIRE(semreg_run_experiment(dir.str("spec.cfg").c_str(), dir.str("out").c_str(), bump,
                                  &progress_calls) == SEMREG_OK);
    CHECK(progress_calls == 4);
    CHECK(fs::exists(dir.path / "out" / "long.csv"));
    CHECK(fs::exists(dir.path / "out" / "summary.csv"));

    REQUIRE(semreg_report((dir.path / "out" / "long.csv").string().c_str(),
                          dir.str("rebuilt").c_str()) == SEMREG_OK);
    CHECK(slurp((dir.path / "rebuilt" / "summary.csv").string()) ==
          slurp((dir.path / "out" / "summary.csv").string()));

    CHECK(semreg_run_experiment(dir.str("nope.cfg").c_str(), dir.str("out2").c_str(), nullptr,
                                nullptr) == SEMREG_ERR_IO);
}
