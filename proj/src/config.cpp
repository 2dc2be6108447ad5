#include "semreg/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace semreg {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::io, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

KeyValueFile KeyValueFile::parse_text(const std::string& text, const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            raise(ErrorCode::parse,
                  origin + ": line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            raise(ErrorCode::parse, origin + ": line " + std::to_string(lineno) + ": empty key");
        if (kv.values_.count(key))
            raise(ErrorCode::parse, origin + ": line " + std::to_string(lineno) +
                                        ": duplicate key '" + key + "'");
        kv.values_[key] = value;
        kv.lines_[key] = lineno;
    }
    return kv;
}

std::string KeyValueFile::raw(const std::string& key) {
    consumed_.insert(key);
    return values_.at(key);
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    return raw(key);
}

std::string KeyValueFile::require_string(const std::string& key) {
    if (!has(key)) raise(ErrorCode::parse, origin_ + ": missing required key '" + key + "'");
    return raw(key);
}

long long KeyValueFile::get_int(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    std::string v = raw(key);
    long long out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        raise(ErrorCode::parse, origin_ + ": line " + std::to_string(lines_[key]) + ": key '" +
                                    key + "' expects an integer, got '" + v + "'");
    return out;
}

std::uint64_t KeyValueFile::get_uint64(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    std::string v = raw(key);
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        raise(ErrorCode::parse, origin_ + ": line " + std::to_string(lines_[key]) + ": key '" +
                                    key + "' expects a nonnegative integer, got '" + v + "'");
    return out;
}

double KeyValueFile::get_double(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    std::string v = raw(key);
    double out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        raise(ErrorCode::parse, origin_ + ": line " + std::to_string(lines_[key]) + ": key '" +
                                    key + "' expects a number, got '" + v + "'");
    return out;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    std::string v = raw(key);
    std::string lower = v;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "true" || lower == "1" || lower == "yes" || lower == "on") return true;
    if (lower == "false" || lower == "0" || lower == "no" || lower == "off") return false;
    raise(ErrorCode::parse, origin_ + ": line " + std::to_string(lines_[key]) + ": key '" + key +
                                "' expects a boolean, got '" + v + "'");
}

std::vector<double> KeyValueFile::get_double_list(const std::string& key,
                                                  std::vector<double> fallback) {
    if (!has(key)) return fallback;
    std::string v = raw(key);
    std::istringstream in(v);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        double x = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (ec != std::errc{} || p != tok.data() + tok.size())
            raise(ErrorCode::parse, origin_ + ": line " + std::to_string(lines_[key]) + ": key '" +
                                        key + "' expects numbers, got '" + tok + "'");
        out.push_back(x);
    }
    if (out.empty())
        raise(ErrorCode::parse, origin_ + ": line " + std::to_string(lines_[key]) + ": key '" +
                                    key + "' has an empty value");
    return out;
}

std::vector<long long> KeyValueFile::get_int_list(const std::string& key,
                                                  std::vector<long long> fallback) {
    if (!has(key)) return fallback;
    std::string v = raw(key);
    std::istringstream in(v);
    std::vector<long long> out;
    std::string tok;
    while (in >> tok) {
        long long x = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (ec != std::errc{} || p != tok.data() + tok.size())
            raise(ErrorCode::parse, origin_ + ": line " + std::to_string(lines_[key]) + ": key '" +
                                        key + "' expects integers, got '" + tok + "'");
        out.push_back(x);
    }
    if (out.empty())
        raise(ErrorCode::parse, origin_ + ": line " + std::to_string(lines_[key]) + ": key '" +
                                    key + "' has an empty value");
    return out;
}

void KeyValueFile::reject_unknown_keys() const {
    for (const auto& [key, value] : values_) {
        if (!consumed_.count(key))
            raise(ErrorCode::parse, origin_ + ": line " + std::to_string(lines_.at(key)) +
                                        ": unknown key '" + key + "'");
    }
}

}  // namespace semreg
