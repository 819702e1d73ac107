#include "frackpp/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace frackpp {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
              c == '_' || c == '-'))
            return false;
    return true;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " +
                                        std::to_string(lineno) +
                                        " is not a key=value assignment");
        const std::string key = trim(line.substr(0, eq));
        if (!valid_key(key))
            throw std::invalid_argument("config: line " +
                                        std::to_string(lineno) +
                                        ": invalid key '" + key + "'");
        cfg.kv_[key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

void Config::set_assignment(const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("config: --set expects key=value, got '" +
                                    assignment + "'");
    const std::string key = trim(assignment.substr(0, eq));
    if (!valid_key(key))
        throw std::invalid_argument("config: invalid key '" + key + "'");
    kv_[key] = trim(assignment.substr(eq + 1));
}

void Config::set(const std::string& key, const std::string& value) {
    if (!valid_key(key))
        throw std::invalid_argument("config: invalid key '" + key + "'");
    kv_[key] = value;
}

const std::string* Config::find(const std::string& key) const {
    consulted_.insert(key);
    const auto it = kv_.find(key);
    return it == kv_.end() ? nullptr : &it->second;
}

double Config::get_double(const std::string& key, double def) const {
    const std::string* raw = find(key);
    double v = def;
    if (raw) {
        std::size_t pos = 0;
        try {
            v = std::stod(*raw, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != raw->size() || raw->empty())
            throw std::invalid_argument("config: key '" + key +
                                        "': not a number: '" + *raw + "'");
    }
    resolved_[key] = format_value(v);
    return v;
}

int Config::get_int(const std::string& key, int def) const {
    const std::string* raw = find(key);
    long v = def;
    if (raw) {
        std::size_t pos = 0;
        try {
            v = std::stol(*raw, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != raw->size() || raw->empty())
            throw std::invalid_argument("config: key '" + key +
                                        "': not an integer: '" + *raw + "'");
    }
    resolved_[key] = std::to_string(v);
    return static_cast<int>(v);
}

bool Config::get_bool(const std::string& key, bool def) const {
    const std::string* raw = find(key);
    bool v = def;
    if (raw) {
        std::string low = *raw;
        std::transform(low.begin(), low.end(), low.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (low == "true" || low == "1" || low == "yes" || low == "on")
            v = true;
        else if (low == "false" || low == "0" || low == "no" || low == "off")
            v = false;
        else
            throw std::invalid_argument("config: key '" + key +
                                        "': not a boolean: '" + *raw + "'");
    }
    resolved_[key] = v ? "true" : "false";
    return v;
}

std::string Config::get_string(const std::string& key,
                               const std::string& def) const {
    const std::string* raw = find(key);
    const std::string v = raw ? *raw : def;
    resolved_[key] = v;
    return v;
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& def) const {
    const std::string* raw = find(key);
    std::vector<double> v;
    if (!raw) {
        v = def;
    } else {
        std::istringstream ss(*raw);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            std::size_t pos = 0;
            double x = 0.0;
            try {
                x = std::stod(item, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != item.size() || item.empty())
                throw std::invalid_argument("config: key '" + key +
                                            "': bad list entry '" + item +
                                            "'");
            v.push_back(x);
        }
        if (v.empty())
            throw std::invalid_argument("config: key '" + key +
                                        "': empty list");
    }
    std::string joined;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) joined += ",";
        joined += format_value(v[i]);
    }
    resolved_[key] = joined;
    return v;
}

void Config::note(const std::string& key, const std::string& value) const {
    resolved_[key] = value;
    consulted_.insert(key);
}

std::vector<std::string> Config::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : kv_)
        if (consulted_.count(k) == 0) out.push_back(k);
    return out;
}

}  // namespace frackpp
