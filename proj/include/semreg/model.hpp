#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "semreg/kernel.hpp"

namespace semreg {

// Multi-task kernel expansion: f_k(x) = sum_i weights(k, i) * K(points_i, x).
// There is no bias term, so an all-zero expansion outputs 0 ("false")
// everywhere.
struct Model {
    Eigen::MatrixXd weights;  // T x |S|
    Eigen::MatrixXd points;   // |S| x d, copy of the training sample set
    KernelConfig kernel;
    std::vector<std::string> task_names;

    int num_tasks() const { return static_cast<int>(weights.rows()); }
    int num_points() const { return static_cast<int>(points.rows()); }
    int dimension() const { return static_cast<int>(points.cols()); }

    Eigen::VectorXd predict(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd predict_batch(const Eigen::MatrixXd& xs) const;  // T x n

    // Class k is asserted iff f_k(x) >= 0.5 (ties assert).
    std::vector<int> classify(const Eigen::VectorXd& x) const;

    void validate() const;
};

// Versioned text format; doubles are written in shortest round-trip decimal
// form, so save/load is an exact identity.
void save_model(const Model& m, std::ostream& out);
void save_model(const Model& m, const std::string& path);
Model load_model(std::istream& in);
Model load_model(const std::string& path);

}  // namespace semreg
