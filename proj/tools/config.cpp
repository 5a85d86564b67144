#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>

namespace zenolab::cli {

namespace {

const std::set<std::string> common_keys = {"experiment", "gamma", "N", "M", "psi", "output", "format", "seed"};

const std::map<std::string, std::set<std::string>> command_keys = {
    {"surface", {"n_theta", "n_phi"}},
    {"evolve",
     {"state", "bloch_x", "bloch_y", "bloch_z", "direction", "theta", "phi", "measure", "t_start", "t_end", "n_steps",
      "step"}},
    {"zeno", {"state", "bloch_x", "bloch_y", "bloch_z", "direction", "theta", "phi", "dt", "S", "n_traj", "threads"}},
    {"intelligent", {}},
};

double read_number(const nlohmann::json& doc, const std::string& key) {
    const auto& v = doc.at(key);
    if (!v.is_number()) throw ConfigError("config key '" + key + "': expected a number, got " + v.dump());
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError("config key '" + key + "': value must be finite");
    return x;
}

BathParams make_bath(const nlohmann::json& doc, bool& maximal) {
    const auto num = [&](const char* key, double fallback) { return doc.contains(key) ? read_number(doc, key) : fallback; };
    const double gamma = num("gamma", 1.0);
    const double n = num("N", 1.0);
    const double psi = num("psi", 0.0);
    if (!(gamma > 0)) throw ConfigError("config key 'gamma': must be positive");
    if (n < 0) throw ConfigError("config key 'N': must be non-negative");
    maximal = true;
    if (!doc.contains("M")) return BathParams::maximal(gamma, n, psi);
    const auto& m = doc.at("M");
    if (m.is_string()) {
        if (m.get<std::string>() != "maximal")
            throw ConfigError("config key 'M': expected a number or \"maximal\", got " + m.dump());
        return BathParams::maximal(gamma, n, psi);
    }
    const double mv = read_number(doc, "M");
    try {
        BathParams b(gamma, n, mv, psi);
        maximal = b.is_maximal();
        return b;
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("config key 'M': ") + e.what());
    }
}

} // namespace

const std::set<std::string>& allowed_keys(const std::string& command) {
    static std::map<std::string, std::set<std::string>> cache;
    auto it = command_keys.find(command);
    if (it == command_keys.end()) throw ConfigError("unknown command '" + command + "'");
    auto& keys = cache[command];
    if (keys.empty()) {
        keys = common_keys;
        keys.insert(it->second.begin(), it->second.end());
    }
    return keys;
}

RunConfig::RunConfig(std::string command, nlohmann::json document)
    : command_(std::move(command)), doc_(std::move(document)), bath_(BathParams::vacuum()) {
    if (!doc_.is_object()) throw ConfigError("config: top-level value must be a JSON object");
    const auto& keys = allowed_keys(command_);
    for (const auto& [key, value] : doc_.items())
        if (!keys.contains(key)) throw ConfigError("config key '" + key + "': not recognized by '" + command_ + "'");

    if (doc_.contains("experiment") && string("experiment", command_) != command_)
        throw ConfigError("config key 'experiment': names '" + string("experiment", "") + "' but command is '" +
                          command_ + "'");

    bath_ = make_bath(doc_, m_maximal_);

    const std::string fmt = string("format", "csv");
    if (fmt == "csv")
        format_ = OutputFormat::csv;
    else if (fmt == "json")
        format_ = OutputFormat::json;
    else
        throw ConfigError("config key 'format': expected \"csv\" or \"json\", got \"" + fmt + "\"");
    output_ = string("output", "");
    if (has("seed")) unsigned_integer("seed", 0);
}

nlohmann::json RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file '" + path + "': cannot be opened");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
}

void RunConfig::apply_override(nlohmann::json& document, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set '" + assignment + "': expected key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    if (!document.is_object()) document = nlohmann::json::object();
    nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
    document[key] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
}

double RunConfig::number(const std::string& key, double fallback) const {
    return has(key) ? read_number(doc_, key) : fallback;
}

std::optional<double> RunConfig::optional_number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return read_number(doc_, key);
}

int RunConfig::integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const auto& v = doc_.at(key);
    if (!v.is_number_integer()) throw ConfigError("config key '" + key + "': expected an integer, got " + v.dump());
    const auto x = v.get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw ConfigError("config key '" + key + "': integer out of range");
    return static_cast<int>(x);
}

std::uint64_t RunConfig::unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const auto& v = doc_.at(key);
    if (!v.is_number_unsigned())
        throw ConfigError("config key '" + key + "': expected a non-negative integer, got " + v.dump());
    return v.get<std::uint64_t>();
}

std::string RunConfig::string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const auto& v = doc_.at(key);
    if (!v.is_string()) throw ConfigError("config key '" + key + "': expected a string, got " + v.dump());
    return v.get<std::string>();
}

nlohmann::json RunConfig::resolved() const {
    nlohmann::json r = doc_;
    r["gamma"] = bath_.gamma();
    r["N"] = bath_.n();
    r["M"] = bath_.m();
    r["psi"] = bath_.psi();
    r["format"] = format_ == OutputFormat::csv ? "csv" : "json";
    r["experiment"] = command_;
    return r;
}

} // namespace zenolab::cli
