#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "semreg/logic.hpp"

using namespace semreg;

namespace {

const std::vector<std::string> abc{"a", "b", "c"};
const std::vector<std::string> abcd{"a", "b", "c", "d"};

CnfClause clause(std::vector<int> pos, std::vector<int> neg) {
    return CnfClause{std::move(pos), std::move(neg)};
}

// truth-table oracle for a clause list: conjunction of disjunctions
bool cnf_holds(const std::vector<CnfClause>& clauses, const std::vector<bool>& v) {
    for (const CnfClause& c : clauses) {
        bool sat = false;
        for (int i : c.positive)
            if (v[static_cast<size_t>(i)]) sat = true;
        for (int i : c.negated)
            if (!v[static_cast<size_t>(i)]) sat = true;
        if (!sat) return false;
    }
    return true;
}

// random formula over variables [0, n); depth-limited
FormulaPtr random_formula(std::mt19937_64& rng, int n, int depth) {
    auto pick = [&](int hi) { return static_cast<int>(rng() % static_cast<unsigned>(hi)); };
    if (depth == 0 || pick(4) == 0) {
        int v = pick(n);
        return Formula::make_var("v" + std::to_string(v), v);
    }
    switch (pick(4)) {
        case 0: return Formula::make_not(random_formula(rng, n, depth - 1));
        case 1:
            return Formula::make_and(random_formula(rng, n, depth - 1),
                                     random_formula(rng, n, depth - 1));
        case 2:
            return Formula::make_or(random_formula(rng, n, depth - 1),
                                    random_formula(rng, n, depth - 1));
        default:
            return Formula::make_implies(random_formula(rng, n, depth - 1),
                                         random_formula(rng, n, depth - 1));
    }
}

}  // namespace

TEST_CASE("parser produces the expected tree shapes") {
    CHECK(to_string(*parse_formula("a & b -> c", abc)) == "((a & b) -> c)");
    CHECK(to_string(*parse_formula("(a & b) | (b & c) -> d", abcd)) ==
          "(((a & b) | (b & c)) -> d)");
    CHECK(to_string(*parse_formula("a | b | c", abc)) == "((a | b) | c)");
    // '->' binds loosest and associates right; '!' binds tightest
    CHECK(to_string(*parse_formula("a -> b -> c", abc)) == "(a -> (b -> c))");
    CHECK(to_string(*parse_formula("!a & b | c", abc)) == "((!a & b) | c)");
    CHECK(to_string(*parse_formula("!(a | b)", abc)) == "!(a | b)");
    CHECK(to_string(*parse_formula("  a  ", abc)) == "a");
}

TEST_CASE("parser reports positions and unknown predicates") {
    auto message_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::parse);
            return std::string(e.what());
        }
        return std::string("<no error>");
    };
    CHECK(message_of([] { parse_formula("a &", abc); }).find("syntax error at line 1") !=
          std::string::npos);
    CHECK(message_of([] { parse_formula("a @ b", abc); }).find("column 3") != std::string::npos);
    CHECK(message_of([] { parse_formula("a & (b | c", abc); }).find("')'") != std::string::npos);
    std::string unknown = message_of([] { parse_formula("a & quux", abc); });
    CHECK(unknown.find("unknown predicate 'quux'") != std::string::npos);
    CHECK(unknown.find("column 5") != std::string::npos);
    CHECK_THROWS_AS(parse_formula("", abc), Error);
}

TEST_CASE("cnf of the paper clauses") {
    // truth-table-verified expected clause sets
    auto cnf1 = to_cnf(*parse_formula("a & b -> c", abc));
    REQUIRE(cnf1.size() == 1);
    CHECK(cnf1[0] == clause({2}, {0, 1}));

    auto cnf2 = to_cnf(*parse_formula("(a & b) | (b & c) -> d", abcd));
    REQUIRE(cnf2.size() == 2);
    CHECK(cnf2[0] == clause({3}, {0, 1}));
    CHECK(cnf2[1] == clause({3}, {1, 2}));

    auto cnf3 = to_cnf(*parse_formula("a | b | c", abc));
    REQUIRE(cnf3.size() == 1);
    CHECK(cnf3[0] == clause({0, 1, 2}, {}));
}

TEST_CASE("cnf simplifications") {
    CHECK(to_cnf(*parse_formula("a | !a", abc)).empty());          // tautology
    CHECK(to_cnf(*parse_formula("a -> a", abc)).empty());          // tautology
    CHECK(to_cnf(*parse_formula("!!a", abc)) ==
          std::vector<CnfClause>{clause({0}, {})});                // double negation
    CHECK(to_cnf(*parse_formula("!(a | b)", abc)) ==
          std::vector<CnfClause>{clause({}, {0}), clause({}, {1})});
    CHECK(to_cnf(*parse_formula("a | a | a", abc)) ==
          std::vector<CnfClause>{clause({0}, {})});                // duplicate literals merged
    // distribution: (a & b) | c
    CHECK(to_cnf(*parse_formula("(a & b) | c", abc)) ==
          std::vector<CnfClause>{clause({0, 2}, {}), clause({1, 2}, {})});
}

TEST_CASE("boolean evaluation") {
    auto imp = parse_formula("a -> b", abc);
    CHECK(eval_boolean(*imp, {true, false, false}) == false);
    CHECK(eval_boolean(*imp, {false, false, false}) == true);
    auto taut = parse_formula("a | !a", abc);
    CHECK(eval_boolean(*taut, {true, false, false}) == true);
    CHECK(eval_boolean(*taut, {false, false, false}) == true);
}

TEST_CASE("cnf is equivalent to the source formula on every assignment") {
    std::mt19937_64 rng(20240811);
    const int n = 5;
    for (int trial = 0; trial < 300; ++trial) {
        FormulaPtr f = random_formula(rng, n, 4);
        auto clauses = to_cnf(*f);
        for (int mask = 0; mask < (1 << n); ++mask) {
            std::vector<bool> v(n);
            for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = (mask >> i) & 1;
            REQUIRE(eval_boolean(*f, v) == cnf_holds(clauses, v));
        }
    }
}

TEST_CASE("cnf is canonical and idempotent") {
    std::mt19937_64 rng(7);
    const int n = 6;
    for (int trial = 0; trial < 200; ++trial) {
        FormulaPtr f = random_formula(rng, n, 4);
        auto once = to_cnf(*f);
        for (const CnfClause& c : once) {
            // sorted, duplicate-free, and never contradictory within a clause
            CHECK(std::is_sorted(c.positive.begin(), c.positive.end()));
            CHECK(std::is_sorted(c.negated.begin(), c.negated.end()));
            CHECK(std::adjacent_find(c.positive.begin(), c.positive.end()) == c.positive.end());
            CHECK(std::adjacent_find(c.negated.begin(), c.negated.end()) == c.negated.end());
            for (int p : c.positive)
                CHECK(!std::count(c.negated.begin(), c.negated.end(), p));
            CHECK(!(c.positive.empty() && c.negated.empty()));
        }
        if (once.empty()) continue;
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
        FormulaPtr conj = clause_to_formula(once[0], names);
        for (size_t i = 1; i < once.size(); ++i)
            conj = Formula::make_and(std::move(conj), clause_to_formula(once[i], names));
        CHECK(to_cnf(*conj) == once);
    }
}

TEST_CASE("clause files: weights, comments, multi-clause lines") {
    ClauseSet cs = parse_clause_text("# header comment\n"
                                     "a & b -> c\n"
                                     "\n"
                                     "weight=0.25: a | b | c   # trailing comment\n",
                                     abc);
    REQUIRE(cs.clauses.size() == 2);
    CHECK(cs.clauses[0] == clause({2}, {0, 1}));
    CHECK(cs.weights[0] == 1.0);
    CHECK(cs.clauses[1] == clause({0, 1, 2}, {}));
    CHECK(cs.weights[1] == 0.25);

    // one source line, two CNF clauses, both inheriting the line weight
    ClauseSet multi = parse_clause_text("weight=2: (a & b) | (b & c) -> d\n", abcd);
    REQUIRE(multi.clauses.size() == 2);
    CHECK(multi.weights == std::vector<double>{2.0, 2.0});

    CHECK_THROWS_AS(parse_clause_text("weight=oops: a\n", abc), Error);
    CHECK_THROWS_AS(parse_clause_text("weight=-1: a\n", abc), Error);
    CHECK_THROWS_AS(parse_clause_text("weight=1 a\n", abc), Error);  // missing ':'

    // errors carry the file line, not the line within the formula
    try {
        parse_clause_text("a\nb\nc &\n", abc);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("clause set validation") {
    ClauseSet cs;
    cs.tasks = abc;
    cs.clauses.push_back(clause({0}, {}));
    CHECK_THROWS_AS(cs.validate(), Error);  // missing weight
    cs.weights.push_back(-0.5);
    CHECK_THROWS_AS(cs.validate(), Error);  // negative weight
    cs.weights[0] = 0.5;
    cs.validate();
    cs.clauses.push_back(clause({7}, {}));  // index beyond the task table
    cs.weights.push_back(1.0);
    CHECK_THROWS_AS(cs.validate(), Error);
}

TEST_CASE("tautology-only input yields an empty clause set") {
    ClauseSet cs = parse_clause_text("a | !a\n", abc);
    CHECK(cs.empty());
}
