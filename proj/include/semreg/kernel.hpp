#pragma once

#include <Eigen/Dense>

#include "semreg/error.hpp"

namespace semreg {

struct KernelConfig {
    enum class Kind { gaussian };
    Kind kind = Kind::gaussian;
    double sigma = 0.4;

    void validate() const {
        if (!(sigma > 0.0)) raise(ErrorCode::invalid, "kernel sigma must be > 0");
    }
};

// Gaussian kernel exp(-||x - y||^2 / (2 sigma^2)).
double kernel_eval(const KernelConfig& cfg, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Dense Gram matrix over the rows of `points`. Exactly symmetric (the upper
// triangle is computed and mirrored) with unit diagonal.
Eigen::MatrixXd build_gram(const KernelConfig& cfg, const Eigen::MatrixXd& points);

}  // namespace semreg
