#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "semreg/error.hpp"

namespace semreg {

// Text key-value files: one `key = value` pair per line, '#' starts a
// comment, blank lines ignored. Values keep internal whitespace. Consumers
// read typed values and then call `reject_unknown_keys` so a typo in a key
// fails loudly instead of silently keeping a default.
class KeyValueFile {
public:
    KeyValueFile() = default;

    static KeyValueFile parse_file(const std::string& path);
    static KeyValueFile parse_text(const std::string& text, const std::string& origin = "<text>");

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback);
    std::string require_string(const std::string& key);
    long long get_int(const std::string& key, long long fallback);
    std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback);
    double get_double(const std::string& key, double fallback);
    bool get_bool(const std::string& key, bool fallback);

    // whitespace-separated numbers, e.g. "0.1 0.5 1"
    std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback);
    std::vector<long long> get_int_list(const std::string& key, std::vector<long long> fallback);

    // raises a parse error naming the first key never read by any getter
    void reject_unknown_keys() const;

    const std::string& origin() const { return origin_; }

private:
    std::string raw(const std::string& key);

    std::string origin_;
    std::map<std::string, std::string> values_;
    std::map<std::string, int> lines_;  // key -> line number, for error messages
    std::set<std::string> consumed_;
};

}  // namespace semreg
