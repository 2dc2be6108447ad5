#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "semreg/dataset.hpp"

using namespace semreg;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("semreg_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

Dataset sample_dataset() {
    Dataset d;
    d.points.resize(3, 2);
    d.points << 0.1, 0.2, -1.5, 2.25, 0.3333333333333333, 1e-9;
    d.task_names = {"a", "b"};
    d.labels.resize(2, 3);
    d.labels << 1, 0, -1, -1, 1, 0;
    return d;
}

std::string write_text(const TempDir& dir, const char* name, const std::string& text) {
    std::string p = dir.file(name);
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("format_double survives the round trip bitwise") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        double v;
        if (trial % 3 == 0) {
            v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        } else if (trial % 3 == 1) {
            v = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) * 1e6;
        } else {
            // raw bit patterns, skipping NaN/inf
            std::uint64_t bits = rng();
            std::memcpy(&v, &bits, sizeof v);
            if (!std::isfinite(v)) continue;
        }
        std::string s = format_double(v);
        double back = std::strtod(s.c_str(), nullptr);
        REQUIRE(back == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-0.25) == "-0.25");
}

TEST_CASE("dataset CSV round trip is exact") {
    TempDir dir;
    Dataset d = sample_dataset();
    save_dataset_csv(d, dir.file("d.csv"));
    Dataset back = load_dataset_csv(dir.file("d.csv"));
    CHECK(back.points == d.points);  // bitwise, thanks to shortest round-trip formatting
    CHECK(back.labels == d.labels);
    CHECK(back.task_names == d.task_names);

    // and saving the reloaded dataset reproduces the file byte for byte
    save_dataset_csv(back, dir.file("d2.csv"));
    std::ifstream f1(dir.file("d.csv")), f2(dir.file("d2.csv"));
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
}

TEST_CASE("dataset CSV parsing accepts ? cells and rejects junk") {
    TempDir dir;
    std::string good = write_text(dir, "good.csv",
                                  "x1,x2,a,b\n"
                                  "0.5,1.5,1,?\n"
                                  "1.125,-2,?,0\n");
    Dataset d = load_dataset_csv(good);
    CHECK(d.num_points() == 2);
    CHECK(d.dimension() == 2);
    CHECK(d.task_names == std::vector<std::string>{"a", "b"});
    CHECK(d.labels(0, 0) == 1);
    CHECK(d.labels(1, 0) == -1);
    CHECK(d.labels(0, 1) == -1);
    CHECK(d.labels(1, 1) == 0);
    CHECK(d.points(0, 0) == 0.5);
    CHECK(d.points(1, 1) == -2.0);

    auto expect_parse_error = [&](const char* name, const std::string& text) {
        std::string p = write_text(dir, name, text);
        try {
            load_dataset_csv(p);
            CHECK_MESSAGE(false, "expected a parse error for ", name);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::parse);
        }
    };
    expect_parse_error("bad_header.csv", "foo,bar\n1,2\n");
    expect_parse_error("bad_label.csv", "x1,a\n0.5,2\n");
    expect_parse_error("bad_label2.csv", "x1,a\n0.5,yes\n");
    expect_parse_error("bad_number.csv", "x1,a\nzz,1\n");
    expect_parse_error("short_row.csv", "x1,x2,a\n0.5,1\n");
    expect_parse_error("empty.csv", "");

    CHECK_THROWS_AS(load_dataset_csv(dir.file("missing.csv")), Error);
}

TEST_CASE("labeled index helpers") {
    Dataset d = sample_dataset();
    CHECK(d.labeled_indices(0) == std::vector<int>{0, 1});
    CHECK(d.labeled_indices(1) == std::vector<int>{1, 2});
    CHECK(!d.fully_labeled());
    d.labels(0, 2) = 0;
    d.labels(1, 0) = 1;
    CHECK(d.fully_labeled());
}

TEST_CASE("dataset validation catches shape and value errors") {
    Dataset d = sample_dataset();
    d.validate();
    d.labels(0, 0) = 3;
    CHECK_THROWS_AS(d.validate(), Error);
    d = sample_dataset();
    d.labels.resize(2, 2);
    CHECK_THROWS_AS(d.validate(), Error);
    d = sample_dataset();
    d.points(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(d.validate(), Error);
}

TEST_CASE("points-only CSV loader ignores label columns") {
    TempDir dir;
    std::string p = write_text(dir, "pts.csv",
                               "x1,x2,a\n"
                               "0.5,1.5,1\n"
                               "2.5,3.5,?\n");
    Eigen::MatrixXd pts = load_points_csv(p);
    CHECK(pts.rows() == 2);
    CHECK(pts.cols() == 2);
    CHECK(pts(1, 0) == 2.5);

    std::string bare = write_text(dir, "bare.csv", "x1,x2\n1,2\n");
    CHECK(load_points_csv(bare).cols() == 2);
}
