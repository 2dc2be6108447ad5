#include "semreg/logic.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace semreg {

FormulaPtr Formula::make_var(std::string name, int index) {
    auto f = std::make_unique<Formula>();
    f->kind = Kind::Var;
    f->var = index;
    f->name = std::move(name);
    return f;
}

FormulaPtr Formula::make_not(FormulaPtr a) {
    auto f = std::make_unique<Formula>();
    f->kind = Kind::Not;
    f->lhs = std::move(a);
    return f;
}

static FormulaPtr make_binary(Formula::Kind kind, FormulaPtr a, FormulaPtr b) {
    auto f = std::make_unique<Formula>();
    f->kind = kind;
    f->lhs = std::move(a);
    f->rhs = std::move(b);
    return f;
}

FormulaPtr Formula::make_and(FormulaPtr a, FormulaPtr b) {
    return make_binary(Kind::And, std::move(a), std::move(b));
}
FormulaPtr Formula::make_or(FormulaPtr a, FormulaPtr b) {
    return make_binary(Kind::Or, std::move(a), std::move(b));
}
FormulaPtr Formula::make_implies(FormulaPtr a, FormulaPtr b) {
    return make_binary(Kind::Implies, std::move(a), std::move(b));
}

FormulaPtr Formula::clone() const {
    auto f = std::make_unique<Formula>();
    f->kind = kind;
    f->var = var;
    f->name = name;
    if (lhs) f->lhs = lhs->clone();
    if (rhs) f->rhs = rhs->clone();
    return f;
}

int Formula::max_var() const {
    int m = kind == Kind::Var ? var : -1;
    if (lhs) m = std::max(m, lhs->max_var());
    if (rhs) m = std::max(m, rhs->max_var());
    return m;
}

bool CnfClause::mentions(int task) const {
    return std::binary_search(positive.begin(), positive.end(), task) ||
           std::binary_search(negated.begin(), negated.end(), task);
}

int CnfClause::max_task() const {
    int m = -1;
    if (!positive.empty()) m = std::max(m, positive.back());
    if (!negated.empty()) m = std::max(m, negated.back());
    return m;
}

int ClauseSet::max_task_index() const {
    int m = -1;
    for (const auto& c : clauses) m = std::max(m, c.max_task());
    return m;
}

void ClauseSet::validate() const {
    if (weights.size() != clauses.size())
        raise(ErrorCode::invalid, "clause set has " + std::to_string(clauses.size()) +
                                      " clauses but " + std::to_string(weights.size()) + " weights");
    for (double w : weights)
        if (!(w >= 0.0))
            raise(ErrorCode::invalid, "clause weights must be nonnegative");
    for (const auto& c : clauses) {
        if (c.positive.empty() && c.negated.empty())
            raise(ErrorCode::invalid, "empty clause in clause set");
        if (c.max_task() >= static_cast<int>(tasks.size()))
            raise(ErrorCode::invalid, "clause references task index " +
                                          std::to_string(c.max_task()) + " but only " +
                                          std::to_string(tasks.size()) + " tasks are declared");
    }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
    enum class Kind { Ident, Not, And, Or, Implies, LParen, RParen, End };
    Kind kind;
    std::string text;
    int column;  // 1-based
};

class Lexer {
public:
    Lexer(const std::string& src, int line) : src_(src), line_(line) {}

    Token next() {
        skip_space();
        int col = static_cast<int>(pos_) + 1;
        if (pos_ >= src_.size() || src_[pos_] == '#')
            return {Token::Kind::End, "", col};
        char c = src_[pos_];
        if (c == '!') { ++pos_; return {Token::Kind::Not, "!", col}; }
        if (c == '&') { ++pos_; return {Token::Kind::And, "&", col}; }
        if (c == '|') { ++pos_; return {Token::Kind::Or, "|", col}; }
        if (c == '(') { ++pos_; return {Token::Kind::LParen, "(", col}; }
        if (c == ')') { ++pos_; return {Token::Kind::RParen, ")", col}; }
        if (c == '-') {
            if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
                pos_ += 2;
                return {Token::Kind::Implies, "->", col};
            }
            fail(col, "expected '->'");
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            return {Token::Kind::Ident, src_.substr(start, pos_ - start), col};
        }
        fail(col, std::string("unexpected character '") + c + "'");
    }

    [[noreturn]] void fail(int column, const std::string& msg) const {
        raise(ErrorCode::parse, "syntax error at line " + std::to_string(line_) + ", column " +
                                    std::to_string(column) + ": " + msg);
    }

    int line() const { return line_; }

private:
    void skip_space() {
        while (pos_ < src_.size() &&
               std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    const std::string& src_;
    int line_;
    size_t pos_ = 0;
};

class Parser {
public:
    Parser(const std::string& src, const std::vector<std::string>& tasks, int line)
        : lexer_(src, line), tasks_(tasks) {
        advance();
    }

    FormulaPtr parse() {
        FormulaPtr f = implication();
        if (tok_.kind != Token::Kind::End)
            lexer_.fail(tok_.column, "unexpected '" + tok_.text + "'");
        return f;
    }

private:
    void advance() { tok_ = lexer_.next(); }

    // implication := disjunction ('->' implication)?
    FormulaPtr implication() {
        FormulaPtr left = disjunction();
        if (tok_.kind == Token::Kind::Implies) {
            advance();
            return Formula::make_implies(std::move(left), implication());
        }
        return left;
    }

    FormulaPtr disjunction() {
        FormulaPtr left = conjunction();
        while (tok_.kind == Token::Kind::Or) {
            advance();
            left = Formula::make_or(std::move(left), conjunction());
        }
        return left;
    }

    FormulaPtr conjunction() {
        FormulaPtr left = negation();
        while (tok_.kind == Token::Kind::And) {
            advance();
            left = Formula::make_and(std::move(left), negation());
        }
        return left;
    }

    FormulaPtr negation() {
        if (tok_.kind == Token::Kind::Not) {
            advance();
            return Formula::make_not(negation());
        }
        return atom();
    }

    FormulaPtr atom() {
        if (tok_.kind == Token::Kind::LParen) {
            advance();
            FormulaPtr f = implication();
            if (tok_.kind != Token::Kind::RParen)
                lexer_.fail(tok_.column, "expected ')'");
            advance();
            return f;
        }
        if (tok_.kind == Token::Kind::Ident) {
            auto it = std::find(tasks_.begin(), tasks_.end(), tok_.text);
            if (it == tasks_.end())
                raise(ErrorCode::parse,
                      "unknown predicate '" + tok_.text + "' at line " +
                          std::to_string(lexer_.line()) + ", column " + std::to_string(tok_.column));
            int index = static_cast<int>(it - tasks_.begin());
            FormulaPtr f = Formula::make_var(tok_.text, index);
            advance();
            return f;
        }
        lexer_.fail(tok_.column, tok_.kind == Token::Kind::End
                                     ? "unexpected end of formula"
                                     : "unexpected '" + tok_.text + "'");
    }

    Lexer lexer_;
    const std::vector<std::string>& tasks_;
    Token tok_;
};

FormulaPtr parse_formula_line(const std::string& text, const std::vector<std::string>& tasks,
                              int line) {
    return Parser(text, tasks, line).parse();
}

}  // namespace

FormulaPtr parse_formula(const std::string& text, const std::vector<std::string>& tasks) {
    return parse_formula_line(text, tasks, 1);
}

// ---------------------------------------------------------------------------
// CNF conversion

namespace {

// Literal sets of one disjunction during conversion.
struct LitSet {
    std::set<int> pos, neg;

    bool tautological() const {
        for (int v : pos)
            if (neg.count(v)) return true;
        return false;
    }
};

using LitSets = std::vector<LitSet>;

LitSets merge_disjunction(const LitSets& a, const LitSets& b) {
    LitSets out;
    out.reserve(a.size() * b.size());
    for (const auto& ca : a) {
        for (const auto& cb : b) {
            LitSet m = ca;
            m.pos.insert(cb.pos.begin(), cb.pos.end());
            m.neg.insert(cb.neg.begin(), cb.neg.end());
            if (!m.tautological()) out.push_back(std::move(m));
        }
    }
    return out;
}

LitSets concat(LitSets a, LitSets b) {
    a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
    return a;
}

// CNF of f (negate=false) or of !f (negate=true), built without rewriting the
// tree: implications and negations are folded into the recursion.
LitSets cnf_rec(const Formula& f, bool negate) {
    switch (f.kind) {
        case Formula::Kind::Var: {
            LitSet c;
            (negate ? c.neg : c.pos).insert(f.var);
            return {c};
        }
        case Formula::Kind::Not:
            return cnf_rec(*f.lhs, !negate);
        case Formula::Kind::And:
            if (negate)  // !(a & b) = !a | !b
                return merge_disjunction(cnf_rec(*f.lhs, true), cnf_rec(*f.rhs, true));
            return concat(cnf_rec(*f.lhs, false), cnf_rec(*f.rhs, false));
        case Formula::Kind::Or:
            if (negate)  // !(a | b) = !a & !b
                return concat(cnf_rec(*f.lhs, true), cnf_rec(*f.rhs, true));
            return merge_disjunction(cnf_rec(*f.lhs, false), cnf_rec(*f.rhs, false));
        case Formula::Kind::Implies:
            if (negate)  // !(a -> b) = a & !b
                return concat(cnf_rec(*f.lhs, false), cnf_rec(*f.rhs, true));
            // a -> b = !a | b
            return merge_disjunction(cnf_rec(*f.lhs, true), cnf_rec(*f.rhs, false));
    }
    raise(ErrorCode::internal, "bad formula node");
}

}  // namespace

std::vector<CnfClause> to_cnf(const Formula& f) {
    LitSets sets = cnf_rec(f, false);
    std::vector<CnfClause> out;
    out.reserve(sets.size());
    for (const auto& s : sets) {
        CnfClause c;
        c.positive.assign(s.pos.begin(), s.pos.end());
        c.negated.assign(s.neg.begin(), s.neg.end());
        out.push_back(std::move(c));
    }
    auto key = [](const CnfClause& c) { return std::make_pair(c.positive, c.negated); };
    std::sort(out.begin(), out.end(),
              [&](const CnfClause& a, const CnfClause& b) { return key(a) < key(b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool eval_boolean(const Formula& f, const std::vector<bool>& assignment) {
    switch (f.kind) {
        case Formula::Kind::Var:
            if (f.var < 0 || f.var >= static_cast<int>(assignment.size()))
                raise(ErrorCode::invalid,
                      "missing assignment for variable '" + f.name + "'");
            return assignment[f.var];
        case Formula::Kind::Not:
            return !eval_boolean(*f.lhs, assignment);
        case Formula::Kind::And:
            return eval_boolean(*f.lhs, assignment) && eval_boolean(*f.rhs, assignment);
        case Formula::Kind::Or:
            return eval_boolean(*f.lhs, assignment) || eval_boolean(*f.rhs, assignment);
        case Formula::Kind::Implies:
            return !eval_boolean(*f.lhs, assignment) || eval_boolean(*f.rhs, assignment);
    }
    raise(ErrorCode::internal, "bad formula node");
}

// ---------------------------------------------------------------------------
// Clause files

namespace {

// Recognizes an optional "weight=<float>:" prefix; returns the rest of the
// line. Only treated as a prefix when it parses completely, so a line that
// merely starts with an identifier named "weight" is not affected ('=' and
// ':' cannot occur in a formula).
std::string strip_weight_prefix(const std::string& line, int line_no, double* weight) {
    size_t i = line.find_first_not_of(" \t");
    if (i == std::string::npos) return line;
    if (line.compare(i, 6, "weight") != 0) return line;
    size_t j = line.find_first_not_of(" \t", i + 6);
    if (j == std::string::npos || line[j] != '=') return line;
    size_t colon = line.find(':', j);
    if (colon == std::string::npos)
        raise(ErrorCode::parse, "line " + std::to_string(line_no) +
                                    ": weight prefix is missing the ':' terminator");
    std::string num = line.substr(j + 1, colon - j - 1);
    size_t parsed = 0;
    double w = 0;
    try {
        w = std::stod(num, &parsed);
    } catch (const std::exception&) {
        raise(ErrorCode::parse, "line " + std::to_string(line_no) + ": bad clause weight '" +
                                    num + "'");
    }
    while (parsed < num.size() && std::isspace(static_cast<unsigned char>(num[parsed]))) ++parsed;
    if (parsed != num.size())
        raise(ErrorCode::parse,
              "line " + std::to_string(line_no) + ": bad clause weight '" + num + "'");
    if (!(w >= 0.0))
        raise(ErrorCode::parse, "line " + std::to_string(line_no) +
                                    ": clause weight must be nonnegative");
    *weight = w;
    return line.substr(colon + 1);
}

bool blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

ClauseSet parse_clause_text(const std::string& text, const std::vector<std::string>& tasks) {
    ClauseSet cs;
    cs.tasks = tasks;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) continue;
        double weight = 1.0;
        std::string body = strip_weight_prefix(line, line_no, &weight);
        FormulaPtr f = parse_formula_line(body, tasks, line_no);
        for (auto& clause : to_cnf(*f)) {
            cs.clauses.push_back(std::move(clause));
            cs.weights.push_back(weight);
        }
    }
    cs.validate();
    return cs;
}

ClauseSet parse_clause_file(const std::string& path, const std::vector<std::string>& tasks) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::io, "cannot open clause file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_clause_text(buf.str(), tasks);
}

// ---------------------------------------------------------------------------
// Printing

FormulaPtr clause_to_formula(const CnfClause& c, const std::vector<std::string>& tasks) {
    FormulaPtr f;
    auto add = [&](FormulaPtr lit) {
        f = f ? Formula::make_or(std::move(f), std::move(lit)) : std::move(lit);
    };
    for (int v : c.negated) add(Formula::make_not(Formula::make_var(tasks.at(v), v)));
    for (int v : c.positive) add(Formula::make_var(tasks.at(v), v));
    if (!f) raise(ErrorCode::invalid, "empty clause");
    return f;
}

std::string to_string(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::Var:
            return f.name;
        case Formula::Kind::Not:
            // compound operands already print themselves parenthesized
            return "!" + to_string(*f.lhs);
        case Formula::Kind::And:
            return "(" + to_string(*f.lhs) + " & " + to_string(*f.rhs) + ")";
        case Formula::Kind::Or:
            return "(" + to_string(*f.lhs) + " | " + to_string(*f.rhs) + ")";
        case Formula::Kind::Implies:
            return "(" + to_string(*f.lhs) + " -> " + to_string(*f.rhs) + ")";
    }
    raise(ErrorCode::internal, "bad formula node");
}

std::string to_string(const CnfClause& c, const std::vector<std::string>& tasks) {
    std::string s;
    for (int v : c.negated) {
        if (!s.empty()) s += " | ";
        s += "!" + tasks.at(v);
    }
    for (int v : c.positive) {
        if (!s.empty()) s += " | ";
        s += tasks.at(v);
    }
    return s;
}

}  // namespace semreg
