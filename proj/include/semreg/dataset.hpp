#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "semreg/error.hpp"

namespace semreg {

// Sample set with partial per-task {0,1} labels. The row order of `points`
// is the global ordering of the sample set; labels(k, i) is -1 when point i
// is unlabeled for task k.
struct Dataset {
    Eigen::MatrixXd points;  // |S| x d, one row per sample
    Eigen::Matrix<signed char, Eigen::Dynamic, Eigen::Dynamic> labels;  // T x |S|
    std::vector<std::string> task_names;

    int num_points() const { return static_cast<int>(points.rows()); }
    int dimension() const { return static_cast<int>(points.cols()); }
    int num_tasks() const { return static_cast<int>(task_names.size()); }

    std::vector<int> labeled_indices(int task) const;
    bool fully_labeled() const;
    void validate() const;
};

// CSV with header x1,...,xd,<task1>,...,<taskT>; label cells are 0, 1 or ?.
Dataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const Dataset& d, const std::string& path);

// Points-only CSV (header x1,...,xd); label columns, if present, are ignored.
Eigen::MatrixXd load_points_csv(const std::string& path);

// Shortest round-trip decimal form of a double (used by every text format).
std::string format_double(double v);

}  // namespace semreg
