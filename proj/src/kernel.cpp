#include "semreg/kernel.hpp"

#include <cmath>
#include <string>

namespace semreg {

namespace {

// Shared scalar path so Gram entries are bitwise equal to kernel_eval:
// vectorized norms and a multiply-by-reciprocal would round differently.
template <typename RowA, typename RowB>
double gaussian(double sigma, const RowA& x, const RowB& y) {
    double d2 = 0.0;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        double diff = x[j] - y[j];
        d2 += diff * diff;
    }
    return std::exp(-d2 / (2.0 * sigma * sigma));
}

}  // namespace

double kernel_eval(const KernelConfig& cfg, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    cfg.validate();
    if (x.size() != y.size())
        raise(ErrorCode::invalid, "kernel_eval: dimension mismatch (" + std::to_string(x.size()) +
                                      " vs " + std::to_string(y.size()) + ")");
    if (!x.allFinite() || !y.allFinite())
        raise(ErrorCode::invalid, "kernel_eval: non-finite coordinates");
    return gaussian(cfg.sigma, x, y);
}

Eigen::MatrixXd build_gram(const KernelConfig& cfg, const Eigen::MatrixXd& points) {
    cfg.validate();
    const Eigen::Index n = points.rows();
    if (n == 0) raise(ErrorCode::invalid, "build_gram: empty sample set");
    if (!points.allFinite()) raise(ErrorCode::invalid, "build_gram: non-finite coordinates");

    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        gram(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double k = gaussian(cfg.sigma, points.row(i), points.row(j));
            gram(i, j) = k;
            gram(j, i) = k;
        }
    }
    return gram;
}

}  // namespace semreg
