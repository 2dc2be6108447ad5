#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semreg/dataset.hpp"
#include "semreg/logic.hpp"

namespace semreg {

struct BenchmarkSpec {
    int benchmark = 1;  // 1: nested squares, 2: three classes, 3: four classes
    int dimension = 2;
    int classes = 0;    // benchmark 1 only; 2 and 3 have fixed class counts
    int labeled_per_class = 10;  // even: half positive, half negative
    int unlabeled = 100;
    int test_per_class = 100;
    std::uint64_t seed = 0;
    double side = 1.0;   // benchmark 1: side of the innermost square
    double alpha = 1.3;  // benchmark 1: growth factor between consecutive squares

    int num_classes() const;
    void validate() const;
};

// Exact geometric rule assigning true labels. Regions are unions of
// axis-aligned boxes; boundary points count as inside.
class MembershipOracle {
public:
    explicit MembershipOracle(const BenchmarkSpec& spec);

    int num_tasks() const { return static_cast<int>(regions_.size()); }
    bool in_class(const Eigen::VectorXd& x, int task) const;
    std::vector<signed char> labels(const Eigen::VectorXd& x) const;

    const Eigen::VectorXd& box_lo() const { return box_lo_; }
    const Eigen::VectorXd& box_hi() const { return box_hi_; }

private:
    struct Box {
        Eigen::VectorXd lo, hi;
        bool contains(const Eigen::VectorXd& x) const;
    };
    std::vector<std::vector<Box>> regions_;  // one box list per class
    Eigen::VectorXd box_lo_, box_hi_;        // sampling bounding box
};

struct GeneratedBenchmark {
    BenchmarkSpec spec;
    MembershipOracle oracle;
    Dataset train;
    Dataset test;  // fully labeled via the oracle
    ClauseSet clauses;
    std::string clause_text;  // surface form emitted to clause files
};

GeneratedBenchmark generate_benchmark(const BenchmarkSpec& spec);

// Label pre-processing for a chain of classes c_1 => c_2 => ... => c_n given
// as ascending task indices: a positive label for c_i is copied to every
// later task; with propagate_negatives, a negative label for c_i is copied
// to every earlier task (the contrapositive). Conflicting existing labels
// are an error.
Dataset expand_hierarchy_labels(const Dataset& data, const std::vector<int>& chain,
                                bool propagate_negatives = true);

// Writes train.csv, test.csv, clauses.txt and manifest.txt into `dir`.
void write_benchmark_files(const GeneratedBenchmark& bench, const std::string& dir);

}  // namespace semreg
