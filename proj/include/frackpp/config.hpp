#ifndef FRACKPP_CONFIG_HPP
#define FRACKPP_CONFIG_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

namespace frackpp {

/// Flat key=value configuration with dotted section prefixes
/// (grid.points, stepper.dt). File format: one assignment per line,
/// '#' starts a comment, blank lines ignored, later assignments win.
///
/// Typed getters record the value actually used (supplied or default), so
/// resolved() reproduces the full effective configuration for metadata
/// headers. Keys that are present but never consulted are reported by
/// unused_keys(); scenario builders turn those into errors naming the key.
class Config {
  public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    /// Applies one "key=value" assignment (the --set form).
    void set_assignment(const std::string& assignment);
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    /// Getters throw std::invalid_argument naming the key on a malformed
    /// value; the default is used (and recorded) when the key is absent.
    double get_double(const std::string& key, double def) const;
    int get_int(const std::string& key, int def) const;
    bool get_bool(const std::string& key, bool def) const;
    std::string get_string(const std::string& key,
                           const std::string& def) const;
    /// Comma-separated list of reals.
    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& def) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

    /// Every key consulted so far with its effective textual value.
    const std::map<std::string, std::string>& resolved() const {
        return resolved_;
    }
    /// Record a derived entry (e.g. the scenario name) into resolved().
    void note(const std::string& key, const std::string& value) const;

    /// Keys present in the source that no getter has consulted.
    std::vector<std::string> unused_keys() const;

  private:
    const std::string* find(const std::string& key) const;

    std::map<std::string, std::string> kv_;
    mutable std::map<std::string, std::string> resolved_;
    mutable std::set<std::string> consulted_;
};

}  // namespace frackpp

#endif
