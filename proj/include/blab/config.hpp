#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace blab::cfg {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Line-oriented `key = value` configuration with [section] headers.
/// Keys are addressed as "section.key". Unknown keys are errors; the known
/// set is the documented schema below.
class Config {
public:
    Config() = default;

    static Config fromFile(const std::string& path);
    static Config fromString(const std::string& text);

    /// "section.key=value", applied after file parsing (CLI --set).
    void applyOverride(const std::string& assignment);

    bool has(const std::string& key) const;
    std::string getString(const std::string& key, const std::string& dflt) const;
    double getDouble(const std::string& key, double dflt) const;
    int getInt(const std::string& key, int dflt) const;
    bool getBool(const std::string& key, bool dflt) const;
    std::vector<int> getIntList(const std::string& key, const std::vector<int>& dflt) const;
    std::vector<double> getDoubleList(const std::string& key,
                                      const std::vector<double>& dflt) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

    /// Every key a scenario may consume. Parsing rejects anything else.
    static const std::vector<std::string>& knownKeys();

private:
    void set(const std::string& key, const std::string& value);
    std::map<std::string, std::string> values_;
};

}  // namespace blab::cfg
