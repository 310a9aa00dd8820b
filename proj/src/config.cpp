#include "blab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace blab::cfg {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

const std::vector<std::string>& Config::knownKeys() {
    static const std::vector<std::string> keys = {
        "scenario.name",
        "scenario.seed",
        "cantor.scheme",
        "cantor.stage",
        "cantor.lambda",
        "field.k",
        "field.phi",
        "field.kappa",
        "field.kappa_allow_above_one",
        "battery.m_list",
        "battery.n_max",
        "battery.t_list",
        "battery.moment_tol_direct",
        "battery.moment_tol_closed",
        "battery.moment_tol_agree",
        "battery.monomial_degree",
        "hamilton.x_list",
        "hamilton.rho",
        "hamilton.iterations",
        "hamilton.starts",
        "hamilton.kernel_a",
        "hamilton.kernel_b",
        "hamilton.kernel_c",
        "probes.disks",
        "probes.disk_radius",
        "probes.budget",
        "probes.compare_kappa",
        "audit.pairs",
        "audit.phis",
        "solver.enabled",
        "solver.grid",
        "solver.L",
        "solver.tol",
        "solver.max_iter",
        "solver.cutoff",
        "output.dir",
        "output.write_csv",
    };
    return keys;
}

void Config::set(const std::string& key, const std::string& value) {
    const auto& known = knownKeys();
    if (std::find(known.begin(), known.end(), key) == known.end())
        throw ConfigError("unknown configuration key: " + key);
    values_[key] = value;
}

Config Config::fromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return fromString(ss.str());
}

Config Config::fromString(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("malformed section header at line " + std::to_string(lineno));
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError("empty section name at line " + std::to_string(lineno));
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected `key = value` at line " + std::to_string(lineno));
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key at line " + std::to_string(lineno));
        if (section.empty())
            throw ConfigError("key outside any [section] at line " + std::to_string(lineno));
        cfg.set(section + "." + key, value);
    }
    return cfg;
}

void Config::applyOverride(const std::string& assignment) {
    const size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like section.key=value: " + assignment);
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    if (key.find('.') == std::string::npos)
        throw ConfigError("override key must be section.key: " + assignment);
    set(key, value);
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::getString(const std::string& key, const std::string& dflt) const {
    auto it = values_.find(key);
    return it == values_.end() ? dflt : it->second;
}

double Config::getDouble(const std::string& key, double dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    try {
        size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError("expected a number for " + key + ", got `" + it->second + "`");
    }
}

int Config::getInt(const std::string& key, int dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    try {
        size_t pos = 0;
        int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError("expected an integer for " + key + ", got `" + it->second + "`");
    }
}

bool Config::getBool(const std::string& key, bool dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("expected a boolean for " + key + ", got `" + v + "`");
}

std::vector<int> Config::getIntList(const std::string& key, const std::vector<int>& dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    std::vector<int> out;
    std::istringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stoi(trim(tok)));
        } catch (...) {
            throw ConfigError("expected a comma-separated integer list for " + key);
        }
    }
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

std::vector<double> Config::getDoubleList(const std::string& key,
                                          const std::vector<double>& dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    std::vector<double> out;
    std::istringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(trim(tok)));
        } catch (...) {
            throw ConfigError("expected a comma-separated number list for " + key);
        }
    }
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

}  // namespace blab::cfg
