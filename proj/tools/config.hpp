#pragma once

// Flat JSON run configuration with `--set key=value` overrides.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "zenolab/bath.hpp"

namespace zenolab::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

class RunConfig {
public:
    // `command` selects the set of accepted keys; unknown keys are rejected.
    RunConfig(std::string command, nlohmann::json document);

    static nlohmann::json load_file(const std::string& path);
    // "key=value": value is parsed as JSON when possible, otherwise kept as a string.
    static void apply_override(nlohmann::json& document, const std::string& assignment);

    const std::string& command() const { return command_; }
    const BathParams& bath() const { return bath_; }
    bool m_is_maximal() const { return m_maximal_; }
    OutputFormat format() const { return format_; }
    const std::string& output() const { return output_; }

    bool has(const std::string& key) const { return doc_.contains(key); }
    double number(const std::string& key, double fallback) const;
    int integer(const std::string& key, int fallback) const;
    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const;
    std::string string(const std::string& key, const std::string& fallback) const;
    std::optional<double> optional_number(const std::string& key) const;

    // Resolved configuration (defaults filled in for the bath and output keys).
    nlohmann::json resolved() const;

private:
    std::string command_;
    nlohmann::json doc_;
    BathParams bath_;
    bool m_maximal_{true};
    OutputFormat format_{OutputFormat::csv};
    std::string output_;
};

const std::set<std::string>& allowed_keys(const std::string& command);

} // namespace zenolab::cli
