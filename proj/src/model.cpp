#include "semreg/model.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "semreg/dataset.hpp"

namespace semreg {

void Model::validate() const {
    kernel.validate();
    if (weights.cols() != points.rows())
        raise(ErrorCode::invalid, "model weight rows must have one entry per sample point");
    if (static_cast<int>(task_names.size()) != num_tasks())
        raise(ErrorCode::invalid, "model task name count mismatch");
    if (!weights.allFinite()) raise(ErrorCode::invalid, "model weights must be finite");
    if (!points.allFinite()) raise(ErrorCode::invalid, "model points must be finite");
}

Eigen::VectorXd Model::predict(const Eigen::VectorXd& x) const {
    if (x.size() != points.cols())
        raise(ErrorCode::invalid, "predict: point has dimension " + std::to_string(x.size()) +
                                      ", model expects " + std::to_string(points.cols()));
    if (!x.allFinite()) raise(ErrorCode::invalid, "predict: non-finite coordinates");
    const double inv = -1.0 / (2.0 * kernel.sigma * kernel.sigma);
    Eigen::VectorXd k(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        k[i] = std::exp(inv * (points.row(i).transpose() - x).squaredNorm());
    return weights * k;
}

Eigen::MatrixXd Model::predict_batch(const Eigen::MatrixXd& xs) const {
    Eigen::MatrixXd out(weights.rows(), xs.rows());
    for (Eigen::Index j = 0; j < xs.rows(); ++j)
        out.col(j) = predict(xs.row(j).transpose());
    return out;
}

std::vector<int> Model::classify(const Eigen::VectorXd& x) const {
    Eigen::VectorXd f = predict(x);
    std::vector<int> y(f.size());
    for (Eigen::Index k = 0; k < f.size(); ++k) y[k] = f[k] >= 0.5 ? 1 : 0;
    return y;
}

// ---------------------------------------------------------------------------
// Serialization
//
// semreg-model v1
// kernel gaussian <sigma>
// tasks <T> <name...>
// points <|S|> <d>
// ... |S| rows of d values
// weights <T> <|S|>
// ... T rows of |S| values
// end

namespace {

constexpr const char* kMagic = "semreg-model";
constexpr const char* kVersion = "v1";

[[noreturn]] void corrupt(const std::string& what) {
    raise(ErrorCode::parse, "model file: " + what);
}

std::string next_line(std::istream& in, const std::string& expect_what) {
    std::string line;
    if (!std::getline(in, line)) corrupt("truncated file, expected " + expect_what);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double parse_double_token(const std::string& tok) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        corrupt("bad numeric token '" + tok + "'");
    return v;
}

void read_matrix_rows(std::istream& in, Eigen::MatrixXd& m, const std::string& what) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::istringstream row(next_line(in, what + " row"));
        std::string tok;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!(row >> tok)) corrupt("short " + what + " row");
            m(i, j) = parse_double_token(tok);
        }
        if (row >> tok) corrupt("excess values in " + what + " row");
    }
}

}  // namespace

void save_model(const Model& m, std::ostream& out) {
    m.validate();
    out << kMagic << " " << kVersion << "\n";
    out << "kernel gaussian " << format_double(m.kernel.sigma) << "\n";
    out << "tasks " << m.num_tasks();
    for (const auto& name : m.task_names) out << " " << name;
    out << "\n";
    out << "points " << m.num_points() << " " << m.dimension() << "\n";
    for (int i = 0; i < m.num_points(); ++i) {
        for (int j = 0; j < m.dimension(); ++j)
            out << (j ? " " : "") << format_double(m.points(i, j));
        out << "\n";
    }
    out << "weights " << m.num_tasks() << " " << m.num_points() << "\n";
    for (int k = 0; k < m.num_tasks(); ++k) {
        for (int i = 0; i < m.num_points(); ++i)
            out << (i ? " " : "") << format_double(m.weights(k, i));
        out << "\n";
    }
    out << "end\n";
}

void save_model(const Model& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::io, "cannot write model '" + path + "'");
    save_model(m, out);
    if (!out) raise(ErrorCode::io, "write failed for '" + path + "'");
}

Model load_model(std::istream& in) {
    Model m;
    {
        std::istringstream hdr(next_line(in, "header"));
        std::string magic, version;
        hdr >> magic >> version;
        if (magic != kMagic) corrupt("not a model file");
        if (version != kVersion)
            raise(ErrorCode::parse, "model file: unsupported version '" + version + "'");
    }
    {
        std::istringstream line(next_line(in, "kernel line"));
        std::string word, kind, sigma;
        line >> word >> kind >> sigma;
        if (word != "kernel" || kind != "gaussian") corrupt("bad kernel line");
        m.kernel.kind = KernelConfig::Kind::gaussian;
        m.kernel.sigma = parse_double_token(sigma);
    }
    int num_tasks = 0;
    {
        std::istringstream line(next_line(in, "tasks line"));
        std::string word;
        line >> word >> num_tasks;
        if (word != "tasks" || num_tasks <= 0) corrupt("bad tasks line");
        std::string name;
        while (line >> name) m.task_names.push_back(name);
        if (static_cast<int>(m.task_names.size()) != num_tasks)
            corrupt("task name count does not match declared count");
    }
    int n_points = 0, dim = 0;
    {
        std::istringstream line(next_line(in, "points line"));
        std::string word;
        line >> word >> n_points >> dim;
        if (word != "points" || n_points <= 0 || dim <= 0) corrupt("bad points line");
        m.points.resize(n_points, dim);
        read_matrix_rows(in, m.points, "points");
    }
    {
        std::istringstream line(next_line(in, "weights line"));
        std::string word;
        int wt = 0, ws = 0;
        line >> word >> wt >> ws;
        if (word != "weights" || wt <= 0 || ws <= 0) corrupt("bad weights line");
        if (wt != num_tasks || ws != n_points)
            raise(ErrorCode::parse,
                  "model file: weights shape is inconsistent with points/tasks");
        m.weights.resize(wt, ws);
        read_matrix_rows(in, m.weights, "weights");
    }
    if (next_line(in, "end marker") != "end") corrupt("missing end marker");
    m.validate();
    return m;
}

Model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::io, "cannot open model '" + path + "'");
    return load_model(in);
}

}  // namespace semreg
