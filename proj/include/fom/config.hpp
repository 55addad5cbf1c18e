#ifndef FOM_CONFIG_HPP
#define FOM_CONFIG_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fom {

/// Flat key-value experiment config. Grammar: one `key = value` pair per
/// line, keys use dotted sections (`noise.delta`), `#` starts a comment, no
/// includes or nesting. Diff-able and hash-stable by construction.
class Config {
  public:
    Config() = default;

    static Config parse(std::istream& in) {
        Config c;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                auto b = s.find_first_not_of(" \t\r");
                auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            std::string t = trim(line);
            if (t.empty()) continue;
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": expected key = value");
            std::string key = trim(t.substr(0, eq));
            std::string val = trim(t.substr(eq + 1));
            if (key.empty())
                throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
            c.values_[key] = val;
        }
        return c;
    }

    static Config load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config " + path);
        return parse(in);
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
        return it->second;
    }

    std::string get_or(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key) const { return to_double(key, get(key)); }
    double get_double_or(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }
    std::int64_t get_int(const std::string& key) const { return to_int(key, get(key)); }
    std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const {
        return has(key) ? get_int(key) : fallback;
    }

    void set(const std::string& key, const std::string& val) { values_[key] = val; }

    /// Canonical text: keys sorted, single spaces around '='.
    std::string canonical() const {
        std::ostringstream out;
        for (const auto& [k, v] : values_) out << k << " = " << v << "\n";
        return out.str();
    }

    /// FNV-1a over the canonical text; embedded in every output file.
    std::uint64_t hash() const {
        std::uint64_t h = 1469598103934665603ULL;
        for (char ch : canonical()) {
            h ^= static_cast<unsigned char>(ch);
            h *= 1099511628211ULL;
        }
        return h;
    }

    const std::map<std::string, std::string>& items() const { return values_; }

  private:
    static double to_double(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw std::runtime_error("config: key '" + key + "' is not a number: " + v);
        }
    }
    static std::int64_t to_int(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            long long i = std::stoll(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return i;
        } catch (const std::exception&) {
            throw std::runtime_error("config: key '" + key + "' is not an integer: " + v);
        }
    }

    std::map<std::string, std::string> values_;
};

}  // namespace fom

#endif  // FOM_CONFIG_HPP
