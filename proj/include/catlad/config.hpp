#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "catlad/common.hpp"

namespace catlad {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// Flat key-value configuration: one `section.key = value` per line, `#`
// starts a comment, UTF-8 throughout. Keys are tracked as they are read so
// typos can be reported after loading.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse_text(const std::string& text, const std::string& origin = "<text>") {
        KeyValueConfig cfg;
        cfg.origin_ = origin;
        std::istringstream in(text);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw config_error(origin + ":" + std::to_string(lineno) +
                                   ": expected `key = value`");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
            if (cfg.values_.count(key))
                throw config_error(origin + ":" + std::to_string(lineno) + ": duplicate key `" +
                                   key + "`");
            cfg.values_[key] = value;
            cfg.order_.push_back(key);
        }
        return cfg;
    }

    static KeyValueConfig parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open config file: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_text(buf.str(), path);
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw config_error(origin_ + ": missing key `" + key + "`");
        touched_.push_back(key);
        return it->second;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        return has(key) ? get_string(key) : fallback;
    }

    double get_double(const std::string& key) const { return to_double(key, get_string(key)); }

    double get_double(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    std::uint64_t get_u64(const std::string& key) const {
        const std::string v = get_string(key);
        try {
            std::size_t pos = 0;
            const std::uint64_t out = std::stoull(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return out;
        } catch (const std::exception&) {
            throw config_error(origin_ + ": key `" + key + "`: not a nonnegative integer: " + v);
        }
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
        return has(key) ? get_u64(key) : fallback;
    }

    bool get_bool(const std::string& key) const {
        const std::string v = get_string(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw config_error(origin_ + ": key `" + key + "`: not a boolean: " + v);
    }

    bool get_bool(const std::string& key, bool fallback) const {
        return has(key) ? get_bool(key) : fallback;
    }

    std::vector<double> get_double_list(const std::string& key) const {
        std::vector<double> out;
        for (const std::string& part : split(get_string(key), ',')) {
            const std::string t = trim(part);
            if (t.empty()) continue;
            out.push_back(to_double(key, t));
        }
        return out;
    }

    std::vector<std::string> get_string_list(const std::string& key) const {
        std::vector<std::string> out;
        for (const std::string& part : split(get_string(key), ',')) {
            const std::string t = trim(part);
            if (!t.empty()) out.push_back(t);
        }
        return out;
    }

    // Keys present in the file but never read by any loader.
    std::vector<std::string> unread_keys() const {
        std::vector<std::string> out;
        for (const std::string& key : order_)
            if (std::find(touched_.begin(), touched_.end(), key) == touched_.end())
                out.push_back(key);
        return out;
    }

    void reject_unread() const {
        const auto stray = unread_keys();
        if (stray.empty()) return;
        std::string msg = origin_ + ": unrecognized key(s):";
        for (const std::string& k : stray) msg += " `" + k + "`";
        throw config_error(msg);
    }

    const std::vector<std::string>& keys() const { return order_; }

private:
    double to_double(const std::string& key, const std::string& v) const {
        try {
            std::size_t pos = 0;
            const double out = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return out;
        } catch (const std::exception&) {
            throw config_error(origin_ + ": key `" + key + "`: not a number: " + v);
        }
    }

    std::string origin_ = "<empty>";
    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
    mutable std::vector<std::string> touched_;
};

}  // namespace catlad
