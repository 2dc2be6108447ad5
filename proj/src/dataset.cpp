#include "semreg/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace semreg {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc())
        raise(ErrorCode::internal, "format_double failed");
    return std::string(buf, ptr);
}

std::vector<int> Dataset::labeled_indices(int task) const {
    std::vector<int> idx;
    for (int i = 0; i < num_points(); ++i)
        if (labels(task, i) >= 0) idx.push_back(i);
    return idx;
}

bool Dataset::fully_labeled() const {
    return (labels.array() >= 0).all();
}

void Dataset::validate() const {
    if (points.rows() == 0) raise(ErrorCode::invalid, "dataset has no points");
    if (labels.rows() != num_tasks() || labels.cols() != points.rows())
        raise(ErrorCode::invalid, "dataset label matrix shape mismatch");
    if (!points.allFinite()) raise(ErrorCode::invalid, "dataset has non-finite coordinates");
    for (int k = 0; k < num_tasks(); ++k)
        for (int i = 0; i < num_points(); ++i) {
            signed char y = labels(k, i);
            if (y != -1 && y != 0 && y != 1)
                raise(ErrorCode::invalid, "dataset label outside {unlabeled, 0, 1}");
        }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double parse_cell_double(const std::string& cell, const std::string& path, int line_no) {
    std::string t = trim(cell);
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        raise(ErrorCode::parse,
              path + ":" + std::to_string(line_no) + ": bad numeric cell '" + cell + "'");
    return v;
}

// Header is x1..xd followed by task names. d is the count of leading columns
// named x<i> in order.
int feature_column_count(const std::vector<std::string>& header, const std::string& path) {
    int d = 0;
    for (const auto& raw : header) {
        std::string col = trim(raw);
        if (col == "x" + std::to_string(d + 1))
            ++d;
        else
            break;
    }
    if (d == 0)
        raise(ErrorCode::parse, path + ": CSV header must start with x1,...,xd");
    return d;
}

}  // namespace

Dataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::io, "cannot open dataset '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        raise(ErrorCode::parse, path + ": empty file");
    auto header = split_csv_line(line);
    int d = feature_column_count(header, path);
    int t = static_cast<int>(header.size()) - d;

    Dataset ds;
    for (int k = 0; k < t; ++k) ds.task_names.push_back(trim(header[d + k]));

    std::vector<Eigen::VectorXd> rows;
    std::vector<std::vector<signed char>> labs;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != d + t)
            raise(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": expected " +
                                        std::to_string(d + t) + " cells, got " +
                                        std::to_string(cells.size()));
        Eigen::VectorXd x(d);
        for (int j = 0; j < d; ++j) x[j] = parse_cell_double(cells[j], path, line_no);
        std::vector<signed char> y(t);
        for (int k = 0; k < t; ++k) {
            std::string cell = trim(cells[d + k]);
            if (cell == "?")
                y[k] = -1;
            else if (cell == "0")
                y[k] = 0;
            else if (cell == "1")
                y[k] = 1;
            else
                raise(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                            ": label cell must be 0, 1 or ?, got '" + cell + "'");
        }
        rows.push_back(std::move(x));
        labs.push_back(std::move(y));
    }
    if (rows.empty()) raise(ErrorCode::parse, path + ": dataset has no points");

    ds.points.resize(static_cast<Eigen::Index>(rows.size()), d);
    ds.labels.resize(t, static_cast<Eigen::Index>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        ds.points.row(static_cast<Eigen::Index>(i)) = rows[i];
        for (int k = 0; k < t; ++k) ds.labels(k, static_cast<Eigen::Index>(i)) = labs[i][k];
    }
    ds.validate();
    return ds;
}

void save_dataset_csv(const Dataset& d, const std::string& path) {
    d.validate();
    std::ofstream out(path);
    if (!out) raise(ErrorCode::io, "cannot write dataset '" + path + "'");
    for (int j = 0; j < d.dimension(); ++j) out << "x" << (j + 1) << ",";
    for (int k = 0; k < d.num_tasks(); ++k) {
        out << d.task_names[k];
        out << (k + 1 < d.num_tasks() ? "," : "\n");
    }
    for (int i = 0; i < d.num_points(); ++i) {
        for (int j = 0; j < d.dimension(); ++j) out << format_double(d.points(i, j)) << ",";
        for (int k = 0; k < d.num_tasks(); ++k) {
            signed char y = d.labels(k, i);
            out << (y < 0 ? std::string("?") : std::to_string(static_cast<int>(y)));
            out << (k + 1 < d.num_tasks() ? "," : "\n");
        }
    }
    if (!out) raise(ErrorCode::io, "write failed for '" + path + "'");
}

Eigen::MatrixXd load_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::io, "cannot open points file '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        raise(ErrorCode::parse, path + ": empty file");
    auto header = split_csv_line(line);
    int d = feature_column_count(header, path);

    std::vector<Eigen::VectorXd> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) < d)
            raise(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                        ": expected at least " + std::to_string(d) + " cells");
        Eigen::VectorXd x(d);
        for (int j = 0; j < d; ++j) x[j] = parse_cell_double(cells[j], path, line_no);
        rows.push_back(std::move(x));
    }
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(rows.size()), d);
    for (size_t i = 0; i < rows.size(); ++i) pts.row(static_cast<Eigen::Index>(i)) = rows[i];
    return pts;
}

}  // namespace semreg
