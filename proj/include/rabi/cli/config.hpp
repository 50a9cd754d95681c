// config.hpp: Line-oriented `key = value` configuration with dotted keys.
//
//   # comment
//   experiment = noisy_run
//   noise.rate_a = 3.5e-5
//   sweep.energies = 0.25, 0.5, 1
//
// Every lookup records the value it resolved to (defaults included), so the
// resolved configuration can be echoed into output metadata and keys nobody
// read can be reported as typos.
#pragma once

#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace rabi::cli {

class Config {
public:
    static Config parse(std::istream& in, const std::string& source = "<config>");
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { entries_[key] = value; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<int> get_ints(const std::string& key, const std::vector<int>& fallback) const;

    // One of `choices`, validated.
    std::string get_choice(const std::string& key, const std::string& fallback,
                           const std::vector<std::string>& choices) const;

    // Records a value supplied outside the file (e.g. a command-line flag).
    void note_override(const std::string& key, const std::string& value) const {
        record(key, value + " (command line)");
    }

    // Keys that were looked up, with the value each resolved to.
    const std::map<std::string, std::string>& resolved() const { return resolved_; }

    // Throws validation naming every key present in the file but never read.
    void reject_unused() const;

private:
    const std::string* raw(const std::string& key) const;
    void record(const std::string& key, const std::string& value) const;

    std::map<std::string, std::string> entries_;
    std::string source_;
    mutable std::map<std::string, std::string> resolved_;
};

}  // namespace rabi::cli
