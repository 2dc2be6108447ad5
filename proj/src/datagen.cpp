#include "semreg/datagen.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace semreg {

int BenchmarkSpec::num_classes() const {
    switch (benchmark) {
        case 1: return classes > 0 ? classes : 2;
        case 2: return 3;
        case 3: return 4;
    }
    raise(ErrorCode::invalid, "benchmark id must be 1, 2 or 3");
}

void BenchmarkSpec::validate() const {
    if (benchmark < 1 || benchmark > 3)
        raise(ErrorCode::invalid, "benchmark id must be 1, 2 or 3");
    if (benchmark == 1) {
        if (dimension != 2) raise(ErrorCode::invalid, "benchmark 1 requires dimension 2");
        if (num_classes() < 2) raise(ErrorCode::invalid, "benchmark 1 requires >= 2 classes");
        if (!(side > 0.0)) raise(ErrorCode::invalid, "side must be > 0");
        if (!(alpha > 1.0)) raise(ErrorCode::invalid, "alpha must be > 1");
    } else {
        if (dimension < 3) raise(ErrorCode::invalid, "benchmarks 2 and 3 require dimension >= 3");
        if (classes != 0 && classes != num_classes())
            raise(ErrorCode::invalid, "benchmark " + std::to_string(benchmark) + " has a fixed class count of " +
                                          std::to_string(num_classes()));
    }
    if (labeled_per_class < 0 || unlabeled < 0 || test_per_class < 0)
        raise(ErrorCode::invalid, "counts must be nonnegative");
    if (labeled_per_class % 2 != 0)
        raise(ErrorCode::invalid, "labeled_per_class must be even (half positive, half negative)");
}

bool MembershipOracle::Box::contains(const Eigen::VectorXd& x) const {
    for (Eigen::Index j = 0; j < lo.size(); ++j)
        if (x[j] < lo[j] || x[j] > hi[j]) return false;
    return true;
}

MembershipOracle::MembershipOracle(const BenchmarkSpec& spec) {
    spec.validate();
    const int d = spec.dimension;
    auto box = [&](std::initializer_list<std::pair<double, double>> leading) {
        Box b;
        b.lo = Eigen::VectorXd::Zero(d);
        b.hi = Eigen::VectorXd::Ones(d);  // trailing coordinates in [0,1]
        int j = 0;
        for (auto [lo, hi] : leading) {
            b.lo[j] = lo;
            b.hi[j] = hi;
            ++j;
        }
        return b;
    };

    if (spec.benchmark == 1) {
        // nested squares centered at the origin; class i has side l*alpha^i
        const int n = spec.num_classes();
        for (int i = 0; i < n; ++i) {
            double half = 0.5 * spec.side * std::pow(spec.alpha, i);
            Box b;
            b.lo = Eigen::VectorXd::Constant(2, -half);
            b.hi = Eigen::VectorXd::Constant(2, half);
            regions_.push_back({b});
        }
        box_lo_ = regions_.back()[0].lo;
        box_hi_ = regions_.back()[0].hi;
    } else if (spec.benchmark == 2) {
        regions_.push_back({box({{0, 2}, {0, 2}})});  // A
        regions_.push_back({box({{1, 3}, {0, 2}})});  // B
        regions_.push_back({box({{1, 2}, {0, 2}})});  // C = A intersect B
        Box bounds = box({{0, 3}, {0, 2}});
        box_lo_ = bounds.lo;
        box_hi_ = bounds.hi;
    } else {
        regions_.push_back({box({{0, 3}, {0, 3}})});                        // A
        regions_.push_back({box({{1, 4}, {1, 4}})});                        // B
        regions_.push_back({box({{2, 5}, {2, 5}})});                        // C
        regions_.push_back({box({{1, 3}, {1, 3}}), box({{2, 4}, {2, 4}})});  // D
        Box bounds = box({{0, 5}, {0, 5}});
        box_lo_ = bounds.lo;
        box_hi_ = bounds.hi;
    }
}

bool MembershipOracle::in_class(const Eigen::VectorXd& x, int task) const {
    if (task < 0 || task >= num_tasks())
        raise(ErrorCode::invalid, "oracle task index out of range");
    for (const Box& b : regions_[task])
        if (b.contains(x)) return true;
    return false;
}

std::vector<signed char> MembershipOracle::labels(const Eigen::VectorXd& x) const {
    std::vector<signed char> y(num_tasks());
    for (int k = 0; k < num_tasks(); ++k) y[k] = in_class(x, k) ? 1 : 0;
    return y;
}

namespace {

// Deterministic uniform draws: the raw mt19937_64 stream is mapped to [0,1)
// explicitly so generated datasets are identical across standard libraries.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) {
        double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    Eigen::VectorXd point(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
        Eigen::VectorXd x(lo.size());
        for (Eigen::Index j = 0; j < lo.size(); ++j) x[j] = uniform(lo[j], hi[j]);
        return x;
    }

private:
    std::mt19937_64 rng_;
};

std::vector<std::string> benchmark_task_names(const BenchmarkSpec& spec) {
    if (spec.benchmark == 1) {
        std::vector<std::string> names;
        for (int i = 1; i <= spec.num_classes(); ++i) names.push_back("c" + std::to_string(i));
        return names;
    }
    if (spec.benchmark == 2) return {"a", "b", "c"};
    return {"a", "b", "c", "d"};
}

std::string benchmark_clause_text(const BenchmarkSpec& spec) {
    std::ostringstream out;
    if (spec.benchmark == 1) {
        const int n = spec.num_classes();
        for (int i = 1; i < n; ++i) out << "c" << i << " -> c" << (i + 1) << "\n";
        out << "c1";
        for (int i = 2; i <= n; ++i) out << " | c" << i;
        out << "\n";
    } else if (spec.benchmark == 2) {
        out << "a & b -> c\n";
        out << "a | b | c\n";
    } else {
        out << "(a & b) | (b & c) -> d\n";
        out << "a | b | c | d\n";
    }
    return out.str();
}

}  // namespace

GeneratedBenchmark generate_benchmark(const BenchmarkSpec& spec) {
    spec.validate();
    MembershipOracle oracle(spec);
    const int n_classes = oracle.num_tasks();
    const int d = spec.dimension;
    Sampler rng(spec.seed);

    // benchmark 1 only: the region of the outermost class is the whole
    // sampling box, so that class has no negative support and all of its
    // labeled examples are positive
    auto region_is_whole_box = [&](int k) {
        return spec.benchmark == 1 && k == n_classes - 1;
    };

    auto draw_in_region = [&](int k) {
        // classes are boxes except benchmark 3's D (union of two boxes);
        // rejection from the bounding box keeps the density uniform on unions
        if (spec.benchmark == 3 && k == 3) {
            for (int attempt = 0; attempt < 1000000; ++attempt) {
                Eigen::VectorXd x = rng.point(oracle.box_lo(), oracle.box_hi());
                if (oracle.in_class(x, k)) return x;
            }
            raise(ErrorCode::internal, "region rejection sampling failed");
        }
        if (spec.benchmark == 1) {
            double half = 0.5 * spec.side * std::pow(spec.alpha, k);
            Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, -half);
            Eigen::VectorXd hi = Eigen::VectorXd::Constant(2, half);
            return rng.point(lo, hi);
        }
        Eigen::VectorXd lo = Eigen::VectorXd::Zero(d), hi = Eigen::VectorXd::Ones(d);
        if (spec.benchmark == 2) {
            double x1lo[] = {0, 1, 1}, x1hi[] = {2, 3, 2};
            lo[0] = x1lo[k]; hi[0] = x1hi[k];
            lo[1] = 0; hi[1] = 2;
        } else {
            double c[] = {0, 1, 2};
            lo[0] = lo[1] = c[k];
            hi[0] = hi[1] = c[k] + 3;
        }
        return rng.point(lo, hi);
    };

    auto draw_outside_region = [&](int k) {
        for (int attempt = 0; attempt < 1000000; ++attempt) {
            Eigen::VectorXd x = rng.point(oracle.box_lo(), oracle.box_hi());
            if (!oracle.in_class(x, k)) return x;
        }
        raise(ErrorCode::internal, "negative rejection sampling failed for class " +
                                       std::to_string(k));
    };

    std::vector<Eigen::VectorXd> points;
    std::vector<std::vector<signed char>> labels;  // per point, one entry per task, -1 unlabeled

    auto push_labeled = [&](Eigen::VectorXd x, int task, signed char y) {
        std::vector<signed char> row(n_classes, -1);
        row[task] = y;
        points.push_back(std::move(x));
        labels.push_back(std::move(row));
    };

    for (int k = 0; k < n_classes; ++k) {
        int n_pos = (spec.labeled_per_class + 1) / 2;
        int n_neg = spec.labeled_per_class / 2;
        if (region_is_whole_box(k)) {
            n_pos = spec.labeled_per_class;
            n_neg = 0;
        }
        for (int i = 0; i < n_pos; ++i) push_labeled(draw_in_region(k), k, 1);
        for (int i = 0; i < n_neg; ++i) push_labeled(draw_outside_region(k), k, 0);
    }
    for (int i = 0; i < spec.unlabeled; ++i) {
        points.push_back(rng.point(oracle.box_lo(), oracle.box_hi()));
        labels.emplace_back(n_classes, -1);
    }

    GeneratedBenchmark out{spec, oracle, {}, {}, {}, benchmark_clause_text(spec)};
    auto task_names = benchmark_task_names(spec);

    out.train.task_names = task_names;
    out.train.points.resize(static_cast<Eigen::Index>(points.size()), d);
    out.train.labels.resize(n_classes, static_cast<Eigen::Index>(points.size()));
    for (size_t i = 0; i < points.size(); ++i) {
        out.train.points.row(static_cast<Eigen::Index>(i)) = points[i];
        for (int k = 0; k < n_classes; ++k)
            out.train.labels(k, static_cast<Eigen::Index>(i)) = labels[i][k];
    }

    // test points follow the same per-class schema but carry oracle labels
    // for every task
    std::vector<Eigen::VectorXd> test_points;
    for (int k = 0; k < n_classes; ++k) {
        int n_pos = (spec.test_per_class + 1) / 2;
        int n_neg = spec.test_per_class / 2;
        if (region_is_whole_box(k)) {
            n_pos = spec.test_per_class;
            n_neg = 0;
        }
        for (int i = 0; i < n_pos; ++i) test_points.push_back(draw_in_region(k));
        for (int i = 0; i < n_neg; ++i) test_points.push_back(draw_outside_region(k));
    }
    out.test.task_names = task_names;
    out.test.points.resize(static_cast<Eigen::Index>(test_points.size()), d);
    out.test.labels.resize(n_classes, static_cast<Eigen::Index>(test_points.size()));
    for (size_t i = 0; i < test_points.size(); ++i) {
        out.test.points.row(static_cast<Eigen::Index>(i)) = test_points[i];
        auto y = oracle.labels(test_points[i]);
        for (int k = 0; k < n_classes; ++k)
            out.test.labels(k, static_cast<Eigen::Index>(i)) = y[k];
    }

    out.clauses = parse_clause_text(out.clause_text, task_names);
    out.train.validate();
    out.test.validate();
    return out;
}

Dataset expand_hierarchy_labels(const Dataset& data, const std::vector<int>& chain,
                                bool propagate_negatives) {
    data.validate();
    if (chain.size() < 2) raise(ErrorCode::invalid, "hierarchy chain needs >= 2 tasks");
    for (int k : chain)
        if (k < 0 || k >= data.num_tasks())
            raise(ErrorCode::invalid, "hierarchy chain task index out of range");

    Dataset out = data;
    auto set_label = [&](int task, int point, signed char y) {
        signed char& cell = out.labels(task, point);
        if (cell >= 0 && cell != y)
            raise(ErrorCode::invalid,
                  "hierarchy label conflict at point " + std::to_string(point) + ", task '" +
                      data.task_names[task] + "'");
        cell = y;
    };

    const int m = static_cast<int>(chain.size());
    for (int i = 0; i < data.num_points(); ++i) {
        for (int pos = 0; pos < m; ++pos) {
            signed char y = data.labels(chain[pos], i);
            if (y == 1) {
                for (int later = pos + 1; later < m; ++later) set_label(chain[later], i, 1);
            } else if (y == 0 && propagate_negatives) {
                for (int earlier = 0; earlier < pos; ++earlier) set_label(chain[earlier], i, 0);
            }
        }
    }
    return out;
}

void write_benchmark_files(const GeneratedBenchmark& bench, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) raise(ErrorCode::io, "cannot create directory '" + dir + "'");
    auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };

    save_dataset_csv(bench.train, path("train.csv"));
    save_dataset_csv(bench.test, path("test.csv"));

    std::ofstream clauses(path("clauses.txt"));
    if (!clauses) raise(ErrorCode::io, "cannot write clause file");
    clauses << bench.clause_text;

    std::ofstream manifest(path("manifest.txt"));
    if (!manifest) raise(ErrorCode::io, "cannot write manifest");
    const BenchmarkSpec& s = bench.spec;
    manifest << "benchmark = " << s.benchmark << "\n";
    manifest << "dimension = " << s.dimension << "\n";
    manifest << "classes = " << s.num_classes() << "\n";
    manifest << "labeled_per_class = " << s.labeled_per_class << "\n";
    manifest << "unlabeled = " << s.unlabeled << "\n";
    manifest << "test_per_class = " << s.test_per_class << "\n";
    manifest << "seed = " << s.seed << "\n";
    if (s.benchmark == 1) {
        manifest << "side = " << format_double(s.side) << "\n";
        manifest << "alpha = " << format_double(s.alpha) << "\n";
    }
    manifest << "box_lo =";
    for (Eigen::Index j = 0; j < bench.oracle.box_lo().size(); ++j)
        manifest << " " << format_double(bench.oracle.box_lo()[j]);
    manifest << "\nbox_hi =";
    for (Eigen::Index j = 0; j < bench.oracle.box_hi().size(); ++j)
        manifest << " " << format_double(bench.oracle.box_hi()[j]);
    manifest << "\ntasks =";
    for (const auto& name : bench.train.task_names) manifest << " " << name;
    manifest << "\n";
}

}  // namespace semreg
