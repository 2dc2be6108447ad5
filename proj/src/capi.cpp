#include "semreg/semreg.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "semreg/config.hpp"
#include "semreg/datagen.hpp"
#include "semreg/dataset.hpp"
#include "semreg/harness.hpp"
#include "semreg/logic.hpp"
#include "semreg/model.hpp"
#include "semreg/trainer.hpp"

struct semreg_dataset {
    semreg::Dataset d;
};
struct semreg_clauses {
    semreg::ClauseSet c;
};
struct semreg_model {
    semreg::Model m;
};

namespace {

thread_local std::string g_last_error;

semreg_status status_of(semreg::ErrorCode code) {
    switch (code) {
        case semreg::ErrorCode::io: return SEMREG_ERR_IO;
        case semreg::ErrorCode::parse: return SEMREG_ERR_PARSE;
        case semreg::ErrorCode::invalid: return SEMREG_ERR_INVALID;
        case semreg::ErrorCode::diverged: return SEMREG_ERR_DIVERGED;
        case semreg::ErrorCode::internal: return SEMREG_ERR_INTERNAL;
    }
    return SEMREG_ERR_INTERNAL;
}

template <typename Fn>
semreg_status wrap(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return SEMREG_OK;
    } catch (const semreg::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return SEMREG_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SEMREG_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return SEMREG_ERR_INTERNAL;
    }
}

semreg_status fail_invalid(const char* message) {
    g_last_error = message;
    return SEMREG_ERR_INVALID;
}

semreg::TrainConfig load_train_config(const char* config_path) {
    semreg::TrainConfig cfg;
    if (config_path) {
        semreg::KeyValueFile kv = semreg::KeyValueFile::parse_file(config_path);
        cfg = semreg::parse_train_config(kv);
        kv.reject_unknown_keys();
    }
    return cfg;
}

}  // namespace

extern "C" {

const char* semreg_version(void) { return "1.0.0"; }

const char* semreg_last_error(void) { return g_last_error.c_str(); }

/* ------------------------------------------------------------------ */

semreg_status semreg_dataset_load(const char* path, semreg_dataset** out) {
    if (!path || !out) return fail_invalid("path and out must be non-NULL");
    *out = nullptr;
    return wrap([&] { *out = new semreg_dataset{semreg::load_dataset_csv(path)}; });
}

semreg_status semreg_dataset_save(const semreg_dataset* d, const char* path) {
    if (!d || !path) return fail_invalid("dataset and path must be non-NULL");
    return wrap([&] { semreg::save_dataset_csv(d->d, path); });
}

void semreg_dataset_free(semreg_dataset* d) { delete d; }

int semreg_dataset_num_points(const semreg_dataset* d) { return d ? d->d.num_points() : -1; }
int semreg_dataset_dimension(const semreg_dataset* d) { return d ? d->d.dimension() : -1; }
int semreg_dataset_num_tasks(const semreg_dataset* d) { return d ? d->d.num_tasks() : -1; }

const char* semreg_dataset_task_name(const semreg_dataset* d, int task) {
    if (!d || task < 0 || task >= d->d.num_tasks()) return nullptr;
    return d->d.task_names[static_cast<size_t>(task)].c_str();
}

int semreg_dataset_label(const semreg_dataset* d, int task, int point) {
    if (!d || task < 0 || task >= d->d.num_tasks() || point < 0 || point >= d->d.num_points())
        return -1;
    return d->d.labels(task, point);
}

/* ------------------------------------------------------------------ */

semreg_status semreg_clauses_load(const char* path, const semreg_dataset* tasks_from,
                                  semreg_clauses** out) {
    if (!path || !tasks_from || !out) return fail_invalid("arguments must be non-NULL");
    *out = nullptr;
    return wrap([&] {
        *out = new semreg_clauses{semreg::parse_clause_file(path, tasks_from->d.task_names)};
    });
}

semreg_status semreg_clauses_parse(const char* text, const semreg_dataset* tasks_from,
                                   semreg_clauses** out) {
    if (!text || !tasks_from || !out) return fail_invalid("arguments must be non-NULL");
    *out = nullptr;
    return wrap([&] {
        *out = new semreg_clauses{semreg::parse_clause_text(text, tasks_from->d.task_names)};
    });
}

void semreg_clauses_free(semreg_clauses* c) { delete c; }

int semreg_clauses_count(const semreg_clauses* c) {
    return c ? static_cast<int>(c->c.clauses.size()) : -1;
}

/* ------------------------------------------------------------------ */

semreg_status semreg_model_load(const char* path, semreg_model** out) {
    if (!path || !out) return fail_invalid("path and out must be non-NULL");
    *out = nullptr;
    return wrap([&] { *out = new semreg_model{semreg::load_model(path)}; });
}

semreg_status semreg_model_save(const semreg_model* m, const char* path) {
    if (!m || !path) return fail_invalid("model and path must be non-NULL");
    return wrap([&] { semreg::save_model(m->m, path); });
}

void semreg_model_free(semreg_model* m) { delete m; }

int semreg_model_num_tasks(const semreg_model* m) { return m ? m->m.num_tasks() : -1; }
int semreg_model_dimension(const semreg_model* m) { return m ? m->m.dimension() : -1; }

const char* semreg_model_task_name(const semreg_model* m, int task) {
    if (!m || task < 0 || task >= m->m.num_tasks()) return nullptr;
    return m->m.task_names[static_cast<size_t>(task)].c_str();
}

semreg_status semreg_model_predict(const semreg_model* m, const double* x, int dim, double* out) {
    if (!m || !x || !out) return fail_invalid("model, x and out must be non-NULL");
    return wrap([&] {
        if (dim != m->m.dimension())
            semreg::raise(semreg::ErrorCode::invalid, "point dimension does not match the model");
        Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(x, dim);
        Eigen::VectorXd f = m->m.predict(v);
        for (Eigen::Index k = 0; k < f.size(); ++k) out[k] = f[k];
    });
}

/* ------------------------------------------------------------------ */

semreg_status semreg_generate(int benchmark, int dimension, int classes, int labeled_per_class,
                              int unlabeled, int test_per_class, uint64_t seed, double side,
                              double alpha, const char* out_dir) {
    if (!out_dir) return fail_invalid("out_dir must be non-NULL");
    return wrap([&] {
        semreg::BenchmarkSpec spec;
        spec.benchmark = benchmark;
        spec.dimension = dimension;
        spec.classes = classes;
        spec.labeled_per_class = labeled_per_class;
        spec.unlabeled = unlabeled;
        spec.test_per_class = test_per_class;
        spec.seed = seed;
        spec.side = side;
        spec.alpha = alpha;
        semreg::GeneratedBenchmark gb = semreg::generate_benchmark(spec);
        semreg::write_benchmark_files(gb, out_dir);
    });
}

semreg_status semreg_train(const char* train_csv, const char* clauses_path,
                           const char* config_path, int single_stage, const char* model_out,
                           semreg_train_stats* stats) {
    if (!train_csv || !model_out) return fail_invalid("train_csv and model_out must be non-NULL");
    return wrap([&] {
        semreg::Dataset data = semreg::load_dataset_csv(train_csv);
        semreg::ClauseSet clauses;
        clauses.tasks = data.task_names;
        if (clauses_path) clauses = semreg::parse_clause_file(clauses_path, data.task_names);
        semreg::TrainConfig cfg = load_train_config(config_path);

        auto [model, report] = single_stage ? semreg::train_single_stage(cfg, data, clauses)
                                            : semreg::train(cfg, data, clauses);
        semreg::save_model(model, model_out);
        if (stats) {
            stats->final_objective = report.final_objective;
            stats->final_residual = report.final_residual;
            stats->constraint_labeled_initial = report.constraint_labeled_initial;
            stats->constraint_labeled_after_stage1 = report.constraint_labeled_after_stage1;
            stats->epochs_stage1 = report.epochs_stage1;
            stats->epochs_stage2 = report.epochs_stage2;
        }
    });
}

semreg_status semreg_predict(const char* model_path, const char* points_csv,
                             const char* out_csv) {
    if (!model_path || !points_csv || !out_csv)
        return fail_invalid("all paths must be non-NULL");
    return wrap([&] {
        semreg::Model model = semreg::load_model(model_path);
        Eigen::MatrixXd points = semreg::load_points_csv(points_csv);
        if (points.cols() != model.dimension())
            semreg::raise(semreg::ErrorCode::invalid,
                          "points dimension does not match the model");
        Eigen::MatrixXd outputs = model.predict_batch(points);

        std::ofstream out(out_csv);
        if (!out) semreg::raise(semreg::ErrorCode::io, std::string("cannot write '") + out_csv + "'");
        for (size_t k = 0; k < model.task_names.size(); ++k)
            out << (k ? "," : "") << "f_" << model.task_names[k];
        for (const auto& name : model.task_names) out << ",y_" << name;
        out << "\n";
        for (Eigen::Index i = 0; i < points.rows(); ++i) {
            for (Eigen::Index k = 0; k < outputs.rows(); ++k)
                out << (k ? "," : "") << semreg::format_double(outputs(k, i));
            for (Eigen::Index k = 0; k < outputs.rows(); ++k)
                out << "," << (outputs(k, i) >= 0.5 ? 1 : 0);
            out << "\n";
        }
    });
}

semreg_status semreg_evaluate(const char* model_path, const char* test_csv, double* accuracy,
                              double* exact_match) {
    if (!model_path || !test_csv) return fail_invalid("model_path and test_csv must be non-NULL");
    return wrap([&] {
        semreg::Model model = semreg::load_model(model_path);
        semreg::Dataset test = semreg::load_dataset_csv(test_csv);
        double acc = semreg::accuracy(model, test);
        double exact = semreg::exact_match_accuracy(model, test);
        if (accuracy) *accuracy = acc;
        if (exact_match) *exact_match = exact;
    });
}

semreg_status semreg_run_experiment(const char* spec_path, const char* out_dir,
                                    semreg_progress_fn progress, void* user) {
    if (!spec_path || !out_dir) return fail_invalid("spec_path and out_dir must be non-NULL");
    return wrap([&] {
        semreg::ExperimentSpec spec = semreg::load_experiment_spec(spec_path);
        std::function<void(const semreg::RunRecord&)> on_done;
        if (progress) {
            on_done = [&](const semreg::RunRecord& rec) {
                std::ostringstream msg;
                msg << to_string(rec.variant) << " labeled=" << rec.labeled
                    << " unlabeled=" << rec.unlabeled << " rep=" << rec.rep;
                if (rec.ok)
                    msg << " accuracy=" << semreg::format_double(rec.accuracy);
                else
                    msg << " FAILED: " << rec.error;
                progress(msg.str().c_str(), user);
            };
        }
        semreg::ExperimentResult result = semreg::run_experiment(spec, on_done);
        semreg::emit_report(result, out_dir);
    });
}

semreg_status semreg_report(const char* long_csv, const char* out_dir) {
    if (!long_csv || !out_dir) return fail_invalid("long_csv and out_dir must be non-NULL");
    return wrap([&] { semreg::write_report_from_long_csv(long_csv, out_dir); });
}

}  // extern "C"
