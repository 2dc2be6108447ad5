#include "semreg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <boost/math/distributions/students_t.hpp>

namespace semreg {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::constrained_two_stage: return "constrained-two-stage";
        case Variant::constrained_single_stage: return "constrained-single-stage";
        case Variant::plain: return "plain";
        case Variant::plain_hierarchy: return "plain-with-hierarchy-labels";
        case Variant::oracle: return "oracle";
    }
    raise(ErrorCode::internal, "unhandled variant");
}

Variant variant_from_string(const std::string& s) {
    if (s == "constrained-two-stage") return Variant::constrained_two_stage;
    if (s == "constrained-single-stage") return Variant::constrained_single_stage;
    if (s == "plain") return Variant::plain;
    if (s == "plain-with-hierarchy-labels") return Variant::plain_hierarchy;
    if (s == "oracle") return Variant::oracle;
    raise(ErrorCode::invalid, "unknown learner variant '" + s + "'");
}

int ExperimentSpec::effective_repetitions() const {
    if (repetitions > 0) return repetitions;
    return bench.benchmark == 1 ? 10 : 6;
}

void ExperimentSpec::validate() const {
    if (labeled_sizes.empty() || unlabeled_sizes.empty())
        raise(ErrorCode::invalid, "labeled and unlabeled grids must be nonempty");
    if (variants.empty()) raise(ErrorCode::invalid, "variant list must be nonempty");
    if (effective_repetitions() < 1) raise(ErrorCode::invalid, "repetitions must be >= 1");
    if (workers < 1) raise(ErrorCode::invalid, "workers must be >= 1");
    for (size_t i = 0; i < variants.size(); ++i)
        for (size_t j = i + 1; j < variants.size(); ++j)
            if (variants[i] == variants[j])
                raise(ErrorCode::invalid, "duplicate variant '" + to_string(variants[i]) + "'");
    if (bench.benchmark != 1 &&
        std::count(variants.begin(), variants.end(), Variant::plain_hierarchy))
        raise(ErrorCode::invalid,
              "plain-with-hierarchy-labels requires the class-chain benchmark (benchmark 1)");
    for (int l : labeled_sizes) {
        BenchmarkSpec cell = bench;
        cell.labeled_per_class = l;
        cell.unlabeled = unlabeled_sizes.front();
        cell.validate();
    }
    train.validate();
}

TrainConfig parse_train_config(KeyValueFile& kv) {
    TrainConfig cfg;
    std::string loss = kv.get_string("loss", "squared");
    if (loss == "squared")
        cfg.objective.loss = LossKind::squared;
    else if (loss == "hinge")
        cfg.objective.loss = LossKind::hinge;
    else
        raise(ErrorCode::parse, kv.origin() + ": loss must be 'squared' or 'hinge', got '" +
                                    loss + "'");

    auto fit = kv.get_double_list("lambda_fit", {1.0});
    auto reg = kv.get_double_list("lambda_reg", {0.01});
    cfg.objective.lambda_fit = Eigen::Map<Eigen::VectorXd>(fit.data(), fit.size());
    cfg.objective.lambda_reg = Eigen::Map<Eigen::VectorXd>(reg.data(), reg.size());
    cfg.objective.lambda_v = kv.get_double("lambda_v", 1.0);
    cfg.objective.preconditioned = kv.get_bool("preconditioned", true);

    cfg.kernel.sigma = kv.get_double("sigma", 0.4);
    cfg.learning_rate = kv.get_double("learning_rate", 1.0);
    cfg.max_epochs_stage1 = static_cast<int>(kv.get_int("max_epochs_stage1", 5000));
    cfg.max_epochs_stage2 = static_cast<int>(kv.get_int("max_epochs_stage2", 5000));
    cfg.rel_tolerance = kv.get_double("rel_tolerance", 1e-6);
    cfg.patience = static_cast<int>(kv.get_int("patience", 3));
    cfg.backtracking = kv.get_bool("backtracking", true);
    cfg.progress_log_path = kv.get_string("progress_log", "");
    return cfg;
}

ExperimentSpec parse_experiment_spec(KeyValueFile& kv) {
    ExperimentSpec spec;
    spec.bench.benchmark = static_cast<int>(kv.get_int("benchmark", 1));
    spec.bench.dimension =
        static_cast<int>(kv.get_int("dimension", spec.bench.benchmark == 1 ? 2 : 3));
    spec.bench.classes = static_cast<int>(kv.get_int("classes", 0));
    spec.bench.test_per_class = static_cast<int>(kv.get_int("test_per_class", 100));
    spec.bench.seed = kv.get_uint64("seed", 0);
    spec.bench.side = kv.get_double("side", 1.0);
    spec.bench.alpha = kv.get_double("alpha", 1.3);

    auto as_int_vector = [](const std::vector<long long>& xs) {
        std::vector<int> out;
        for (long long x : xs) out.push_back(static_cast<int>(x));
        return out;
    };
    if (!kv.has("labeled")) raise(ErrorCode::parse, kv.origin() + ": missing required key 'labeled'");
    if (!kv.has("unlabeled"))
        raise(ErrorCode::parse, kv.origin() + ": missing required key 'unlabeled'");
    spec.labeled_sizes = as_int_vector(kv.get_int_list("labeled", {}));
    spec.unlabeled_sizes = as_int_vector(kv.get_int_list("unlabeled", {}));
    spec.repetitions = static_cast<int>(kv.get_int("repetitions", 0));

    if (kv.has("variants")) {
        spec.variants.clear();
        std::istringstream in(kv.get_string("variants", ""));
        std::string name;
        while (in >> name) spec.variants.push_back(variant_from_string(name));
    }
    spec.workers = static_cast<int>(kv.get_int("workers", 1));
    spec.propagate_negatives = kv.get_bool("propagate_negatives", true);
    spec.train = parse_train_config(kv);
    spec.validate();
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    KeyValueFile kv = KeyValueFile::parse_file(path);
    ExperimentSpec spec = parse_experiment_spec(kv);
    kv.reject_unknown_keys();
    return spec;
}

namespace {

void check_scoreable(const Model& m, const Dataset& test) {
    test.validate();
    if (!test.fully_labeled())
        raise(ErrorCode::invalid, "test set has unlabeled cells; scoring needs full labels");
    if (m.num_tasks() != test.num_tasks())
        raise(ErrorCode::invalid, "model and test set disagree on task count");
    if (m.dimension() != test.dimension())
        raise(ErrorCode::invalid, "model and test set disagree on dimension");
}

}  // namespace

double accuracy(const Model& m, const Dataset& test) {
    check_scoreable(m, test);
    Eigen::MatrixXd outputs = m.predict_batch(test.points);
    const int T = test.num_tasks(), n = test.num_points();
    double per_task_sum = 0.0;
    for (int k = 0; k < T; ++k) {
        int correct = 0;
        for (int i = 0; i < n; ++i) {
            int pred = outputs(k, i) >= 0.5 ? 1 : 0;
            if (pred == test.labels(k, i)) ++correct;
        }
        per_task_sum += static_cast<double>(correct) / n;
    }
    return per_task_sum / T;
}

double exact_match_accuracy(const Model& m, const Dataset& test) {
    check_scoreable(m, test);
    Eigen::MatrixXd outputs = m.predict_batch(test.points);
    const int T = test.num_tasks(), n = test.num_points();
    int all_correct = 0;
    for (int i = 0; i < n; ++i) {
        bool hit = true;
        for (int k = 0; k < T; ++k) {
            int pred = outputs(k, i) >= 0.5 ? 1 : 0;
            if (pred != test.labels(k, i)) {
                hit = false;
                break;
            }
        }
        if (hit) ++all_correct;
    }
    return static_cast<double>(all_correct) / n;
}

TTest paired_ttest(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) raise(ErrorCode::invalid, "paired t-test needs equal-length samples");
    const int n = static_cast<int>(a.size());
    if (n < 2) raise(ErrorCode::invalid, "paired t-test needs at least 2 pairs");

    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= n;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        double d = a[i] - b[i] - mean;
        ss += d * d;
    }
    double sd = std::sqrt(ss / (n - 1));

    TTest out;
    out.pairs = n;
    if (sd == 0.0) {
        if (mean == 0.0) {
            out.t = 0.0;
            out.p = 1.0;
        } else {
            out.t = mean > 0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
            out.p = 0.0;
        }
        return out;
    }
    out.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    boost::math::students_t_distribution<double> dist(n - 1);
    out.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(out.t)));
    return out;
}

std::uint64_t derive_seed(std::uint64_t base, int benchmark, int labeled, int unlabeled, int rep) {
    auto mix = [](std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    };
    std::uint64_t h = mix(base);
    h = mix(h ^ static_cast<std::uint64_t>(benchmark));
    h = mix(h ^ static_cast<std::uint64_t>(labeled));
    h = mix(h ^ static_cast<std::uint64_t>(unlabeled));
    h = mix(h ^ static_cast<std::uint64_t>(rep));
    return h;
}

namespace {

double oracle_task_accuracy(const MembershipOracle& oracle, const Dataset& test,
                            double* exact_out) {
    const int T = test.num_tasks(), n = test.num_points();
    std::vector<int> correct(T, 0);
    int all_correct = 0;
    for (int i = 0; i < n; ++i) {
        auto y = oracle.labels(test.points.row(i).transpose());
        bool hit = true;
        for (int k = 0; k < T; ++k) {
            if (y[k] == test.labels(k, i))
                ++correct[k];
            else
                hit = false;
        }
        if (hit) ++all_correct;
    }
    double per_task_sum = 0.0;
    for (int k = 0; k < T; ++k) per_task_sum += static_cast<double>(correct[k]) / n;
    if (exact_out) *exact_out = static_cast<double>(all_correct) / n;
    return per_task_sum / T;
}

RunRecord run_variant(const ExperimentSpec& spec, const GeneratedBenchmark& gb, Variant variant) {
    RunRecord rec;
    rec.variant = variant;
    rec.labeled = gb.spec.labeled_per_class;
    rec.unlabeled = gb.spec.unlabeled;
    rec.seed = gb.spec.seed;

    if (variant == Variant::oracle) {
        rec.accuracy = oracle_task_accuracy(gb.oracle, gb.test, &rec.exact_match);
        rec.ok = true;  // nothing is trained; objective and epochs stay zero
        return rec;
    }

    TrainConfig cfg = spec.train;
    const Dataset* data = &gb.train;
    Dataset expanded;
    if (variant == Variant::plain_hierarchy) {
        std::vector<int> chain(gb.train.num_tasks());
        for (size_t k = 0; k < chain.size(); ++k) chain[k] = static_cast<int>(k);
        expanded = expand_hierarchy_labels(gb.train, chain, spec.propagate_negatives);
        data = &expanded;
    }
    if (variant == Variant::plain || variant == Variant::plain_hierarchy)
        cfg.objective.lambda_v = 0.0;

    try {
        std::pair<Model, TrainReport> trained =
            variant == Variant::constrained_two_stage ? train(cfg, *data, gb.clauses)
                                                      : train_single_stage(cfg, *data, gb.clauses);
        rec.accuracy = accuracy(trained.first, gb.test);
        rec.exact_match = exact_match_accuracy(trained.first, gb.test);
        rec.final_objective = trained.second.final_objective;
        rec.epochs = trained.second.epochs_stage1 + trained.second.epochs_stage2;
        rec.ok = true;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::diverged) throw;
        rec.ok = false;
        rec.error = e.what();
        rec.accuracy = std::numeric_limits<double>::quiet_NaN();
        rec.exact_match = std::numeric_limits<double>::quiet_NaN();
        rec.final_objective = std::numeric_limits<double>::quiet_NaN();
    }
    return rec;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const std::function<void(const RunRecord&)>& on_done) {
    spec.validate();
    const int L = static_cast<int>(spec.labeled_sizes.size());
    const int U = static_cast<int>(spec.unlabeled_sizes.size());
    const int R = spec.effective_repetitions();
    const int V = static_cast<int>(spec.variants.size());
    const int jobs = L * U * R;

    ExperimentResult result;
    result.spec = spec;
    result.records.resize(static_cast<size_t>(jobs) * V);

    std::atomic<int> next{0};
    std::mutex done_mutex;
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (;;) {
            int job = next.fetch_add(1);
            if (job >= jobs) return;
            {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (failure) return;
            }
            try {
                int rep = job % R;
                int ui = (job / R) % U;
                int li = job / (R * U);
                BenchmarkSpec cell = spec.bench;
                cell.labeled_per_class = spec.labeled_sizes[li];
                cell.unlabeled = spec.unlabeled_sizes[ui];
                cell.seed = derive_seed(spec.bench.seed, spec.bench.benchmark,
                                        cell.labeled_per_class, cell.unlabeled, rep);
                GeneratedBenchmark gb = generate_benchmark(cell);
                for (int v = 0; v < V; ++v) {
                    RunRecord rec = run_variant(spec, gb, spec.variants[v]);
                    rec.rep = rep;
                    result.records[static_cast<size_t>(job) * V + v] = rec;
                    if (on_done) {
                        std::lock_guard<std::mutex> lock(done_mutex);
                        on_done(rec);
                    }
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    int n_threads = std::min(spec.workers, jobs);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return result;
}

namespace {

struct CellRuns {
    std::vector<const RunRecord*> runs;  // rep-ordered, one per repetition
};

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / xs.size();
}

double sample_std(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / (xs.size() - 1));
}

}  // namespace

std::vector<CellSummary> summarize(const ExperimentResult& result) {
    const ExperimentSpec& spec = result.spec;
    const int L = static_cast<int>(spec.labeled_sizes.size());
    const int U = static_cast<int>(spec.unlabeled_sizes.size());
    const int R = spec.effective_repetitions();
    const int V = static_cast<int>(spec.variants.size());

    auto record_at = [&](int li, int ui, int rep, int v) -> const RunRecord& {
        size_t job = (static_cast<size_t>(li) * U + ui) * R + rep;
        return result.records[job * V + v];
    };

    std::vector<CellSummary> out;
    for (int v = 0; v < V; ++v) {
        for (int li = 0; li < L; ++li) {
            for (int ui = 0; ui < U; ++ui) {
                CellSummary cell;
                cell.variant = spec.variants[v];
                cell.labeled = spec.labeled_sizes[li];
                cell.unlabeled = spec.unlabeled_sizes[ui];
                cell.reps = R;

                std::vector<double> accs, exacts;
                for (int rep = 0; rep < R; ++rep) {
                    const RunRecord& rec = record_at(li, ui, rep, v);
                    if (!rec.ok) continue;
                    accs.push_back(rec.accuracy);
                    exacts.push_back(rec.exact_match);
                }
                cell.ok = static_cast<int>(accs.size());
                cell.mean_accuracy = mean_of(accs);
                cell.std_accuracy = sample_std(accs);
                cell.mean_exact = mean_of(exacts);

                if (v != 0) {
                    std::vector<double> mine, base;
                    for (int rep = 0; rep < R; ++rep) {
                        const RunRecord& a = record_at(li, ui, rep, v);
                        const RunRecord& b = record_at(li, ui, rep, 0);
                        if (a.ok && b.ok) {
                            mine.push_back(a.accuracy);
                            base.push_back(b.accuracy);
                        }
                    }
                    if (mine.size() >= 2) cell.vs_baseline = paired_ttest(mine, base);
                }
                out.push_back(std::move(cell));
            }
        }
    }
    return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) raise(ErrorCode::io, "cannot write '" + p.string() + "'");
    return out;
}

void write_series_files(const std::vector<CellSummary>& cells, const std::string& dir) {
    // one file per (variant, unlabeled size): accuracy against labeled budget
    std::vector<std::pair<std::string, int>> keys;
    for (const auto& c : cells) {
        auto key = std::make_pair(to_string(c.variant), c.unlabeled);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    for (const auto& [variant, unlabeled] : keys) {
        auto out = open_out(std::filesystem::path(dir) /
                            ("series_" + variant + "_u" + std::to_string(unlabeled) + ".csv"));
        out << "labeled,mean_accuracy,std_accuracy\n";
        std::vector<const CellSummary*> rows;
        for (const auto& c : cells)
            if (to_string(c.variant) == variant && c.unlabeled == unlabeled) rows.push_back(&c);
        std::sort(rows.begin(), rows.end(),
                  [](const CellSummary* a, const CellSummary* b) { return a->labeled < b->labeled; });
        for (const CellSummary* c : rows)
            out << c->labeled << "," << format_double(c->mean_accuracy) << ","
                << format_double(c->std_accuracy) << "\n";
    }
}

void write_summary_files(const ExperimentSpec& spec, const ExperimentResult* result,
                         const std::vector<CellSummary>& cells, const std::string& dir) {
    {
        auto out = open_out(std::filesystem::path(dir) / "summary.csv");
        out << "variant,labeled,unlabeled,reps,ok,mean_accuracy,std_accuracy,mean_exact_match,"
               "t_vs_baseline,p_vs_baseline\n";
        for (const auto& c : cells) {
            out << to_string(c.variant) << "," << c.labeled << "," << c.unlabeled << "," << c.reps
                << "," << c.ok << "," << format_double(c.mean_accuracy) << ","
                << format_double(c.std_accuracy) << "," << format_double(c.mean_exact) << ",";
            if (c.vs_baseline.pairs >= 2)
                out << format_double(c.vs_baseline.t) << "," << format_double(c.vs_baseline.p);
            else
                out << ",";
            out << "\n";
        }
    }

    if (result) {
        // full pairwise tests, pairing repetitions of the same cell
        auto out = open_out(std::filesystem::path(dir) / "ttests.csv");
        out << "labeled,unlabeled,variant_a,variant_b,t,p,pairs\n";
        const int L = static_cast<int>(spec.labeled_sizes.size());
        const int U = static_cast<int>(spec.unlabeled_sizes.size());
        const int R = spec.effective_repetitions();
        const int V = static_cast<int>(spec.variants.size());
        auto record_at = [&](int li, int ui, int rep, int v) -> const RunRecord& {
            size_t job = (static_cast<size_t>(li) * U + ui) * R + rep;
            return result->records[job * V + v];
        };
        for (int li = 0; li < L; ++li)
            for (int ui = 0; ui < U; ++ui)
                for (int va = 0; va < V; ++va)
                    for (int vb = va + 1; vb < V; ++vb) {
                        std::vector<double> a, b;
                        for (int rep = 0; rep < R; ++rep) {
                            const RunRecord& ra = record_at(li, ui, rep, va);
                            const RunRecord& rb = record_at(li, ui, rep, vb);
                            if (ra.ok && rb.ok) {
                                a.push_back(ra.accuracy);
                                b.push_back(rb.accuracy);
                            }
                        }
                        out << spec.labeled_sizes[li] << "," << spec.unlabeled_sizes[ui] << ","
                            << to_string(spec.variants[va]) << "," << to_string(spec.variants[vb])
                            << ",";
                        if (a.size() >= 2) {
                            TTest tt = paired_ttest(a, b);
                            out << format_double(tt.t) << "," << format_double(tt.p) << ","
                                << tt.pairs;
                        } else {
                            out << ",," << a.size();
                        }
                        out << "\n";
                    }
    }

    write_series_files(cells, dir);
}

}  // namespace

void emit_report(const ExperimentResult& result, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) raise(ErrorCode::io, "cannot create directory '" + dir + "'");
    const ExperimentSpec& spec = result.spec;

    {
        auto out = open_out(std::filesystem::path(dir) / "long.csv");
        out << "variant,labeled,unlabeled,seed,accuracy,exact_match\n";
        for (const RunRecord& r : result.records) {
            if (!r.ok) continue;
            out << to_string(r.variant) << "," << r.labeled << "," << r.unlabeled << "," << r.seed
                << "," << format_double(r.accuracy) << "," << format_double(r.exact_match) << "\n";
        }
    }
    {
        auto out = open_out(std::filesystem::path(dir) / "details.csv");
        out << "variant,labeled,unlabeled,rep,seed,status,accuracy,exact_match,final_objective,"
               "epochs\n";
        for (const RunRecord& r : result.records) {
            out << to_string(r.variant) << "," << r.labeled << "," << r.unlabeled << "," << r.rep
                << "," << r.seed << "," << (r.ok ? "ok" : "diverged") << ","
                << format_double(r.accuracy) << "," << format_double(r.exact_match) << ","
                << format_double(r.final_objective) << "," << r.epochs << "\n";
        }
    }
    {
        auto out = open_out(std::filesystem::path(dir) / "manifest.txt");
        out << "benchmark = " << spec.bench.benchmark << "\n";
        out << "dimension = " << spec.bench.dimension << "\n";
        out << "classes = " << spec.bench.classes << "\n";
        out << "test_per_class = " << spec.bench.test_per_class << "\n";
        out << "seed = " << spec.bench.seed << "\n";
        out << "labeled =";
        for (int l : spec.labeled_sizes) out << " " << l;
        out << "\nunlabeled =";
        for (int u : spec.unlabeled_sizes) out << " " << u;
        out << "\nrepetitions = " << spec.effective_repetitions() << "\n";
        out << "variants =";
        for (Variant v : spec.variants) out << " " << to_string(v);
        out << "\n";
        out << "loss = " << (spec.train.objective.loss == LossKind::squared ? "squared" : "hinge")
            << "\n";
        out << "lambda_fit =";
        for (Eigen::Index i = 0; i < spec.train.objective.lambda_fit.size(); ++i)
            out << " " << format_double(spec.train.objective.lambda_fit[i]);
        out << "\nlambda_reg =";
        for (Eigen::Index i = 0; i < spec.train.objective.lambda_reg.size(); ++i)
            out << " " << format_double(spec.train.objective.lambda_reg[i]);
        out << "\nlambda_v = " << format_double(spec.train.objective.lambda_v) << "\n";
        out << "preconditioned = " << (spec.train.objective.preconditioned ? "true" : "false")
            << "\n";
        out << "sigma = " << format_double(spec.train.kernel.sigma) << "\n";
        out << "learning_rate = " << format_double(spec.train.learning_rate) << "\n";
        out << "max_epochs_stage1 = " << spec.train.max_epochs_stage1 << "\n";
        out << "max_epochs_stage2 = " << spec.train.max_epochs_stage2 << "\n";
        out << "rel_tolerance = " << format_double(spec.train.rel_tolerance) << "\n";
        out << "patience = " << spec.train.patience << "\n";
        out << "backtracking = " << (spec.train.backtracking ? "true" : "false") << "\n";
        out << "propagate_negatives = " << (spec.propagate_negatives ? "true" : "false") << "\n";
        if (spec.bench.benchmark == 1) {
            out << "side = " << format_double(spec.bench.side) << "\n";
            out << "alpha = " << format_double(spec.bench.alpha) << "\n";
        }
        out << "seed_derivation = splitmix64 chain over (seed, benchmark, labeled, unlabeled, "
               "repetition); per-run values in the seed column\n";
    }

    write_summary_files(spec, &result, summarize(result), dir);
}

void write_report_from_long_csv(const std::string& long_csv, const std::string& dir) {
    std::ifstream in(long_csv);
    if (!in) raise(ErrorCode::io, "cannot open '" + long_csv + "'");
    std::string line;
    if (!std::getline(in, line) || line != "variant,labeled,unlabeled,seed,accuracy,exact_match")
        raise(ErrorCode::parse,
              long_csv + ": expected header variant,labeled,unlabeled,seed,accuracy,exact_match");

    struct Row {
        Variant variant;
        int labeled, unlabeled;
        std::uint64_t seed;
        double accuracy, exact;
    };
    std::vector<Row> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 6)
            raise(ErrorCode::parse,
                  long_csv + ": line " + std::to_string(lineno) + ": expected 6 fields");
        auto bad = [&]() -> std::string {
            return long_csv + ": line " + std::to_string(lineno) + ": bad number";
        };
        auto parse_num = [&](const std::string& s, auto& out) {
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
            if (ec != std::errc{} || p != s.data() + s.size()) raise(ErrorCode::parse, bad());
        };
        Row r;
        r.variant = variant_from_string(fields[0]);
        parse_num(fields[1], r.labeled);
        parse_num(fields[2], r.unlabeled);
        parse_num(fields[3], r.seed);
        parse_num(fields[4], r.accuracy);
        parse_num(fields[5], r.exact);
        rows.push_back(r);
    }
    if (rows.empty()) raise(ErrorCode::parse, long_csv + ": no data rows");

    // reconstruct the grid in order of first appearance
    ExperimentResult result;
    ExperimentSpec& spec = result.spec;
    spec.variants.clear();
    for (const Row& r : rows) {
        if (!std::count(spec.labeled_sizes.begin(), spec.labeled_sizes.end(), r.labeled))
            spec.labeled_sizes.push_back(r.labeled);
        if (!std::count(spec.unlabeled_sizes.begin(), spec.unlabeled_sizes.end(), r.unlabeled))
            spec.unlabeled_sizes.push_back(r.unlabeled);
        if (!std::count(spec.variants.begin(), spec.variants.end(), r.variant))
            spec.variants.push_back(r.variant);
    }

    int max_reps = 0;
    {
        std::map<std::tuple<int, int, int>, int> counts;
        for (const Row& r : rows) {
            int v = static_cast<int>(std::find(spec.variants.begin(), spec.variants.end(),
                                               r.variant) -
                                     spec.variants.begin());
            max_reps = std::max(max_reps, ++counts[{v, r.labeled, r.unlabeled}]);
        }
    }
    spec.repetitions = max_reps;

    const int L = static_cast<int>(spec.labeled_sizes.size());
    const int U = static_cast<int>(spec.unlabeled_sizes.size());
    const int R = max_reps;
    const int V = static_cast<int>(spec.variants.size());
    result.records.resize(static_cast<size_t>(L) * U * R * V);  // default !ok

    auto index_of = [](const auto& xs, const auto& x) {
        return static_cast<int>(std::find(xs.begin(), xs.end(), x) - xs.begin());
    };
    std::map<std::pair<int, std::uint64_t>, int> rep_of_seed;  // (cell id, seed) -> rep slot
    std::map<int, int> next_rep;                               // cell id -> next free slot
    for (const Row& r : rows) {
        int li = index_of(spec.labeled_sizes, r.labeled);
        int ui = index_of(spec.unlabeled_sizes, r.unlabeled);
        int v = index_of(spec.variants, r.variant);
        int cell_id = li * U + ui;
        auto key = std::make_pair(cell_id, r.seed);
        auto it = rep_of_seed.find(key);
        int rep;
        if (it == rep_of_seed.end()) {
            rep = next_rep[cell_id]++;
            rep_of_seed[key] = rep;
        } else {
            rep = it->second;
        }
        if (rep >= R) raise(ErrorCode::parse, long_csv + ": inconsistent repetition structure");
        RunRecord rec;
        rec.variant = r.variant;
        rec.labeled = r.labeled;
        rec.unlabeled = r.unlabeled;
        rec.rep = rep;
        rec.seed = r.seed;
        rec.ok = true;
        rec.accuracy = r.accuracy;
        rec.exact_match = r.exact;
        size_t job = (static_cast<size_t>(li) * U + ui) * R + rep;
        result.records[job * V + v] = rec;
    }

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) raise(ErrorCode::io, "cannot create directory '" + dir + "'");
    write_summary_files(spec, &result, summarize(result), dir);
}

}  // namespace semreg
