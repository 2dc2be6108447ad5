#include <cstdio>
#include <cstdlib>
#include <string>

#include "criteria.hpp"

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <criterion 1-10> [--cli <path>]\n", argv[0]);
        return 2;
    }
    int n = std::atoi(argv[1]);
    if (n < 1 || n > 10) {
        std::fprintf(stderr, "criterion number must be 1..10, got '%s'\n", argv[1]);
        return 2;
    }
    std::string cli;
    for (int i = 2; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
    return run_criterion(n, cli);
}
