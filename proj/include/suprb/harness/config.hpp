#pragma once

// Flat `key = value` experiment configuration. Blank lines and `#` comments
// are ignored; every key has a default except `k`.

#include <charconv>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "suprb/errors.hpp"
#include "suprb/ga.hpp"

namespace suprb::harness {

enum class ProblemKind { frog, am_gauss };

inline std::string to_string(ProblemKind p)
{
    return p == ProblemKind::frog ? "frog" : "am-gauss";
}

struct ExperimentConfig {
    ProblemKind problem = ProblemKind::frog;
    std::uint64_t problem_seed = 0;
    std::size_t n_train_pool = 100;
    std::size_t n_holdout = 1000;
    double validation_fraction = 0.5;
    GaConfig ga;
    std::uint64_t run_seed = 0;
    std::size_t n_repetitions = 1;
    std::string output_dir = "out";
    std::size_t oracle_restarts = 64;
    double oracle_tol = 1e-8;
    // optional pre-generated inputs; empty means "generate from seeds"
    std::string train_csv;
    std::string holdout_csv;
    std::string instance_file;

    void validate() const
    {
        ga.validate();
        if (n_train_pool == 0 || n_holdout == 0) throw ConfigError("data sizes must be positive");
        if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
            throw ConfigError("validation_fraction must lie in (0, 1)");
        if (n_repetitions == 0) throw ConfigError("n_repetitions must be positive");
        if (oracle_restarts == 0) throw ConfigError("oracle_restarts must be positive");
    }
};

namespace detail {

template <class T>
T parse_number(const std::string& key, const std::string& value)
{
    T out{};
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) throw ConfigError(fmt::format("config key '{}': bad value '{}'", key, value));
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError(fmt::format("config key '{}': expected true/false, got '{}'", key, value));
}

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Field {
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
Field number_field(T ExperimentConfig::*member, const char* key)
{
    return {[member, key](ExperimentConfig& c, const std::string& v) { c.*member = parse_number<T>(key, v); },
            [member](const ExperimentConfig& c) { return fmt::format("{}", c.*member); }};
}

template <class T>
Field ga_number_field(T GaConfig::*member, const char* key)
{
    return {[member, key](ExperimentConfig& c, const std::string& v) { c.ga.*member = parse_number<T>(key, v); },
            [member](const ExperimentConfig& c) { return fmt::format("{}", c.ga.*member); }};
}

inline Field ga_bool_field(bool GaConfig::*member, const char* key)
{
    return {[member, key](ExperimentConfig& c, const std::string& v) { c.ga.*member = parse_bool(key, v); },
            [member](const ExperimentConfig& c) { return std::string(c.ga.*member ? "true" : "false"); }};
}

inline Field string_field(std::string ExperimentConfig::*member)
{
    return {[member](ExperimentConfig& c, const std::string& v) { c.*member = v; },
            [member](const ExperimentConfig& c) { return c.*member; }};
}

inline const std::map<std::string, Field>& fields()
{
    static const std::map<std::string, Field> table = {
        {"problem",
         {[](ExperimentConfig& c, const std::string& v) {
              if (v == "frog")
                  c.problem = ProblemKind::frog;
              else if (v == "am-gauss")
                  c.problem = ProblemKind::am_gauss;
              else
                  throw ConfigError(fmt::format("config key 'problem': unknown problem '{}'", v));
          },
          [](const ExperimentConfig& c) { return to_string(c.problem); }}},
        {"problem_seed", number_field(&ExperimentConfig::problem_seed, "problem_seed")},
        {"n_train_pool", number_field(&ExperimentConfig::n_train_pool, "n_train_pool")},
        {"n_holdout", number_field(&ExperimentConfig::n_holdout, "n_holdout")},
        {"validation_fraction", number_field(&ExperimentConfig::validation_fraction, "validation_fraction")},
        {"run_seed", number_field(&ExperimentConfig::run_seed, "run_seed")},
        {"n_repetitions", number_field(&ExperimentConfig::n_repetitions, "n_repetitions")},
        {"output_dir", string_field(&ExperimentConfig::output_dir)},
        {"oracle_restarts", number_field(&ExperimentConfig::oracle_restarts, "oracle_restarts")},
        {"oracle_tol", number_field(&ExperimentConfig::oracle_tol, "oracle_tol")},
        {"train_csv", string_field(&ExperimentConfig::train_csv)},
        {"holdout_csv", string_field(&ExperimentConfig::holdout_csv)},
        {"instance_file", string_field(&ExperimentConfig::instance_file)},
        {"population_size", ga_number_field(&GaConfig::population_size, "population_size")},
        {"elitists", ga_number_field(&GaConfig::elitists, "elitists")},
        {"initial_individual_size", ga_number_field(&GaConfig::initial_individual_size, "initial_individual_size")},
        {"k", ga_number_field(&GaConfig::k, "k")},
        {"one_fifth_factor", ga_number_field(&GaConfig::one_fifth_factor, "one_fifth_factor")},
        {"crossover_rate", ga_number_field(&GaConfig::crossover_rate, "crossover_rate")},
        {"initial_step_size", ga_number_field(&GaConfig::initial_step_size, "initial_step_size")},
        {"generations", ga_number_field(&GaConfig::generations, "generations")},
        {"random_classifier_prob", ga_number_field(&GaConfig::random_classifier_prob, "random_classifier_prob")},
        {"ridge_epsilon", ga_number_field(&GaConfig::ridge_epsilon, "ridge_epsilon")},
        {"clip_mutation", ga_bool_field(&GaConfig::clip_mutation, "clip_mutation")},
        {"include_linear", ga_bool_field(&GaConfig::include_linear, "include_linear")},
    };
    return table;
}

} // namespace detail

inline void set_option(ExperimentConfig& config, const std::string& key, const std::string& value)
{
    const auto& table = detail::fields();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(fmt::format("unknown config key '{}'", key));
    it->second.set(config, value);
}

/// `key=value` as given on the command line.
inline void apply_override(ExperimentConfig& config, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("override '{}' is not key=value", assignment));
    set_option(config, detail::trim(assignment.substr(0, eq)), detail::trim(assignment.substr(eq + 1)));
}

inline ExperimentConfig parse_config(std::istream& is, ExperimentConfig config = {})
{
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("config line {}: expected key = value", lineno));
        set_option(config, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return config;
}

/// Every key with its current value, sorted by key.
inline std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& config)
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, field] : detail::fields()) out.emplace_back(key, field.get(config));
    return out;
}

} // namespace suprb::harness
