#include "rabi/cli/config.hpp"

#include "rabi/error.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdint>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rabi::cli {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
    if (k.empty() || k.front() == '.' || k.back() == '.' || k.find("..") != std::string::npos) return false;
    return std::all_of(k.begin(), k.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    });
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
        throw Error(ErrorKind::validation, key + ": '" + t + "' is not a finite number");
    return v;
}

int to_int(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || *end != '\0' || errno == ERANGE || v < INT32_MIN || v > INT32_MAX)
        throw Error(ErrorKind::validation, key + ": '" + t + "' is not an integer");
    return static_cast<int>(v);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    return os.str();
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
    Config c;
    c.source_ = source;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw Error(ErrorKind::validation, where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_key(key)) throw Error(ErrorKind::validation, where + ": malformed key '" + key + "'");
        if (value.empty()) throw Error(ErrorKind::validation, where + ": empty value for '" + key + "'");
        if (!c.entries_.emplace(key, value).second)
            throw Error(ErrorKind::validation, where + ": duplicate key '" + key + "'");
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::validation, "cannot open config file '" + path + "'");
    return parse(f, path);
}

const std::string* Config::raw(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

void Config::record(const std::string& key, const std::string& value) const { resolved_[key] = value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const std::string* r = raw(key);
    const std::string v = r ? *r : fallback;
    record(key, v);
    return v;
}

std::string Config::require_string(const std::string& key) const {
    const std::string* r = raw(key);
    if (!r) throw Error(ErrorKind::validation, source_ + ": missing required key '" + key + "'");
    record(key, *r);
    return *r;
}

double Config::get_double(const std::string& key, double fallback) const {
    const std::string* r = raw(key);
    const double v = r ? to_double(key, *r) : fallback;
    record(key, join(std::vector<double>{v}));
    return v;
}

int Config::get_int(const std::string& key, int fallback) const {
    const std::string* r = raw(key);
    const int v = r ? to_int(key, *r) : fallback;
    record(key, std::to_string(v));
    return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const std::string* r = raw(key);
    bool v = fallback;
    if (r) {
        if (*r == "true" || *r == "1" || *r == "yes" || *r == "on") v = true;
        else if (*r == "false" || *r == "0" || *r == "no" || *r == "off") v = false;
        else throw Error(ErrorKind::validation, key + ": '" + *r + "' is not a boolean");
    }
    record(key, v ? "true" : "false");
    return v;
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
    const std::string* r = raw(key);
    std::vector<double> v = fallback;
    if (r) {
        v.clear();
        for (const auto& item : split_list(*r)) v.push_back(to_double(key, item));
    }
    if (v.empty()) throw Error(ErrorKind::validation, key + ": list is empty");
    record(key, join(v));
    return v;
}

std::vector<int> Config::get_ints(const std::string& key, const std::vector<int>& fallback) const {
    const std::string* r = raw(key);
    std::vector<int> v = fallback;
    if (r) {
        v.clear();
        for (const auto& item : split_list(*r)) v.push_back(to_int(key, item));
    }
    record(key, join(v));
    return v;
}

std::string Config::get_choice(const std::string& key, const std::string& fallback,
                               const std::vector<std::string>& choices) const {
    const std::string v = get_string(key, fallback);
    if (std::find(choices.begin(), choices.end(), v) == choices.end())
        throw Error(ErrorKind::validation, key + ": '" + v + "' is not one of {" + join(choices) + "}");
    return v;
}

void Config::reject_unused() const {
    std::string unused;
    for (const auto& [k, v] : entries_)
        if (!resolved_.count(k)) unused += (unused.empty() ? "" : ", ") + k;
    if (!unused.empty()) throw Error(ErrorKind::validation, source_ + ": unknown keys: " + unused);
}

}  // namespace rabi::cli
