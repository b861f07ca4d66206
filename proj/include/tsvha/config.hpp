#pragma once
// Experiment configuration files: flat INI-style key/value sections.
//
//   [experiment]   horizon, runs, seed, instance_mode, metrics
//   [env]          family, arms, noise, means, table
//   [policy]       repeatable; name, kind, family, combiner, agents,
//                  c3_cap, epsilon
//   [bai]          budgets (bai subcommand only)
//
// '#' starts a comment. Unknown sections or keys are rejected with the line
// number; so are missing required keys and malformed values.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "harness.hpp"

namespace tsvha {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    ExperimentSpec experiment;
    std::vector<std::int64_t> bai_budgets;
    std::string table_path;  // tabular env; resolved by the caller
};

namespace detail {

struct ConfigEntry {
    std::string value;
    std::size_t line = 0;
    bool used = false;
};

struct ConfigSection {
    std::string name;
    std::size_t line = 0;
    std::map<std::string, ConfigEntry> entries;
};

inline std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<ConfigSection> tokenize_config(std::string_view text) {
    std::vector<ConfigSection> sections;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            }
            sections.push_back({std::string(strip(line.substr(1, line.size() - 2))), line_no, {}});
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        if (sections.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": key outside of any section");
        }
        const std::string key(strip(line.substr(0, eq)));
        const std::string value(strip(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        auto& entries = sections.back().entries;
        if (entries.count(key)) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        entries[key] = ConfigEntry{value, line_no, false};
    }
    return sections;
}

class SectionReader {
  public:
    explicit SectionReader(ConfigSection& section) : section_(section) {}

    std::optional<std::string> get(const std::string& key) {
        auto it = section_.entries.find(key);
        if (it == section_.entries.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    std::string require(const std::string& key) {
        auto v = get(key);
        if (!v) {
            throw ConfigError("section [" + section_.name + "] (line " + std::to_string(section_.line) +
                              "): missing required key '" + key + "'");
        }
        return *v;
    }

    std::size_t line_of(const std::string& key) const {
        auto it = section_.entries.find(key);
        return it == section_.entries.end() ? section_.line : it->second.line;
    }

    void reject_unused() const {
        for (const auto& [key, entry] : section_.entries) {
            if (!entry.used) {
                throw ConfigError("line " + std::to_string(entry.line) + ": unknown key '" + key +
                                  "' in [" + section_.name + "]");
            }
        }
    }

  private:
    ConfigSection& section_;
};

template <typename T>
inline T parse_number(std::string_view text, std::size_t line, const char* what) {
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ConfigError("line " + std::to_string(line) + ": malformed " + what + " '" +
                          std::string(text) + "'");
    }
    return value;
}

inline std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t pos = text.find(',', start);
        const std::string_view item =
            strip(text.substr(start, pos == std::string_view::npos ? text.size() - start : pos - start));
        if (!item.empty()) items.emplace_back(item);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return items;
}

inline RewardNoise parse_noise(const std::string& text, std::size_t line) {
    if (text == "gaussian_unit") return RewardNoise::GaussianUnit;
    if (text == "gaussian_var2") return RewardNoise::GaussianVar2;
    if (text == "bernoulli") return RewardNoise::Bernoulli;
    if (text == "none") return RewardNoise::None;
    throw ConfigError("line " + std::to_string(line) + ": unknown noise '" + text + "'");
}

inline EnvFamily parse_family(const std::string& text, std::size_t line) {
    if (text == "random_uniform") return EnvFamily::RandomUniform;
    if (text == "random_normal") return EnvFamily::RandomNormal;
    if (text == "linear_gaussian") return EnvFamily::LinearGaussian;
    if (text == "fixed") return EnvFamily::Fixed;
    if (text == "tabular") return EnvFamily::Tabular;
    throw ConfigError("line " + std::to_string(line) + ": unknown env family '" + text + "'");
}

inline void parse_env_section(ConfigSection& section, RunConfig& config) {
    SectionReader reader(section);
    EnvConfig& env = config.experiment.env;
    env.family = parse_family(reader.require("family"), reader.line_of("family"));
    if (auto noise = reader.get("noise")) env.noise = parse_noise(*noise, reader.line_of("noise"));
    switch (env.family) {
        case EnvFamily::RandomUniform:
        case EnvFamily::RandomNormal:
        case EnvFamily::LinearGaussian:
            env.arms = parse_number<int>(reader.require("arms"), reader.line_of("arms"), "arm count");
            break;
        case EnvFamily::Fixed: {
            const auto items = split_list(reader.require("means"));
            if (items.empty()) {
                throw ConfigError("line " + std::to_string(reader.line_of("means")) +
                                  ": fixed env requires a nonempty mean list");
            }
            for (const auto& item : items) {
                env.fixed_means.push_back(
                    parse_number<double>(item, reader.line_of("means"), "mean"));
            }
            env.arms = static_cast<int>(env.fixed_means.size());
            break;
        }
        case EnvFamily::Tabular:
            config.table_path = reader.require("table");
            break;
    }
    reader.reject_unused();
}

inline void parse_policy_section(ConfigSection& section, RunConfig& config) {
    SectionReader reader(section);
    NamedPolicy policy;
    const std::string kind = reader.require("kind");
    if (kind == "ts") {
        policy.spec.kind = PolicyKind::TS;
    } else if (kind == "tsvha") {
        policy.spec.kind = PolicyKind::TSVHA;
    } else if (kind == "greedy") {
        policy.spec.kind = PolicyKind::Greedy;
    } else if (kind == "sts") {
        policy.spec.kind = PolicyKind::STS;
    } else {
        throw ConfigError("line " + std::to_string(reader.line_of("kind")) + ": unknown policy kind '" +
                          kind + "'");
    }
    if (auto family = reader.get("family")) {
        if (*family == "gaussian") {
            policy.spec.family = PosteriorFamily::Gaussian;
        } else if (*family == "beta") {
            policy.spec.family = PosteriorFamily::Beta;
        } else {
            throw ConfigError("line " + std::to_string(reader.line_of("family")) +
                              ": unknown posterior family '" + *family + "'");
        }
    }
    std::string default_name = kind;
    if (policy.spec.kind == PolicyKind::TSVHA) {
        const std::string comb = reader.require("combiner");
        if (comb == "identity") {
            policy.spec.combiner.kind = CombinerKind::Identity;
        } else if (comb == "c1") {
            policy.spec.combiner.kind = CombinerKind::C1;
        } else if (comb == "c2") {
            policy.spec.combiner.kind = CombinerKind::C2;
        } else if (comb == "c3") {
            policy.spec.combiner.kind = CombinerKind::C3;
        } else {
            throw ConfigError("line " + std::to_string(reader.line_of("combiner")) +
                              ": unknown combiner '" + comb + "'");
        }
        if (policy.spec.combiner.kind == CombinerKind::C1 || policy.spec.combiner.kind == CombinerKind::C2) {
            policy.spec.combiner.agents =
                parse_number<int>(reader.require("agents"), reader.line_of("agents"), "agent count");
            default_name = "tsvha_" + comb + "_n" + std::to_string(policy.spec.combiner.agents);
        } else {
            if (auto agents = reader.get("agents")) {
                policy.spec.combiner.agents =
                    parse_number<int>(*agents, reader.line_of("agents"), "agent count");
            }
            default_name = "tsvha_" + comb;
        }
        if (auto cap = reader.get("c3_cap")) {
            policy.spec.combiner.c3_agent_cap =
                parse_number<int>(*cap, reader.line_of("c3_cap"), "c3 cap");
        }
    }
    if (policy.spec.kind == PolicyKind::STS) {
        policy.spec.epsilon =
            parse_number<double>(reader.require("epsilon"), reader.line_of("epsilon"), "epsilon");
    }
    policy.name = reader.get("name").value_or(default_name);
    for (const char c : policy.name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '_' || c == '-' || c == '.';
        if (!ok) {
            throw ConfigError("line " + std::to_string(reader.line_of("name")) +
                              ": policy name must use [A-Za-z0-9_.-]");
        }
    }
    reader.reject_unused();
    config.experiment.policies.push_back(std::move(policy));
}

inline void parse_experiment_section(ConfigSection& section, RunConfig& config) {
    SectionReader reader(section);
    ExperimentSpec& spec = config.experiment;
    spec.horizon =
        parse_number<std::int64_t>(reader.require("horizon"), reader.line_of("horizon"), "horizon");
    spec.runs = parse_number<int>(reader.require("runs"), reader.line_of("runs"), "run count");
    spec.base_seed =
        parse_number<std::uint64_t>(reader.require("seed"), reader.line_of("seed"), "seed");
    if (auto mode = reader.get("instance_mode")) {
        if (*mode == "resampled") {
            spec.instance_mode = InstanceMode::ResampledPerRun;
        } else if (*mode == "fixed") {
            spec.instance_mode = InstanceMode::FixedAcrossRuns;
        } else {
            throw ConfigError("line " + std::to_string(reader.line_of("instance_mode")) +
                              ": unknown instance mode '" + *mode + "'");
        }
    }
    if (auto metrics = reader.get("metrics")) {
        spec.metrics = MetricSet{false, false, false};
        for (const auto& item : split_list(*metrics)) {
            if (item == "cumulative") {
                spec.metrics.cumulative = true;
            } else if (item == "per_period") {
                spec.metrics.per_period = true;
            } else if (item == "final_distribution") {
                spec.metrics.final_distribution = true;
            } else {
                throw ConfigError("line " + std::to_string(reader.line_of("metrics")) +
                                  ": unknown metric '" + item + "'");
            }
        }
        if (!spec.metrics.cumulative && !spec.metrics.per_period && !spec.metrics.final_distribution) {
            throw ConfigError("line " + std::to_string(reader.line_of("metrics")) +
                              ": at least one metric is required");
        }
    }
    reader.reject_unused();
}

inline void parse_bai_section(ConfigSection& section, RunConfig& config) {
    SectionReader reader(section);
    for (const auto& item : split_list(reader.require("budgets"))) {
        config.bai_budgets.push_back(
            parse_number<std::int64_t>(item, reader.line_of("budgets"), "budget"));
    }
    if (config.bai_budgets.empty()) {
        throw ConfigError("line " + std::to_string(reader.line_of("budgets")) +
                          ": budget list must be nonempty");
    }
    reader.reject_unused();
}

}  // namespace detail

inline RunConfig parse_run_config_text(std::string_view text) {
    auto sections = detail::tokenize_config(text);
    RunConfig config;
    bool saw_experiment = false;
    bool saw_env = false;
    bool saw_bai = false;
    for (auto& section : sections) {
        if (section.name == "experiment") {
            if (saw_experiment) {
                throw ConfigError("line " + std::to_string(section.line) + ": duplicate [experiment]");
            }
            saw_experiment = true;
            detail::parse_experiment_section(section, config);
        } else if (section.name == "env") {
            if (saw_env) throw ConfigError("line " + std::to_string(section.line) + ": duplicate [env]");
            saw_env = true;
            detail::parse_env_section(section, config);
        } else if (section.name == "policy") {
            detail::parse_policy_section(section, config);
        } else if (section.name == "bai") {
            if (saw_bai) throw ConfigError("line " + std::to_string(section.line) + ": duplicate [bai]");
            saw_bai = true;
            detail::parse_bai_section(section, config);
        } else {
            throw ConfigError("line " + std::to_string(section.line) + ": unknown section [" +
                              section.name + "]");
        }
    }
    if (!saw_experiment) throw ConfigError("missing required section [experiment]");
    if (!saw_env) throw ConfigError("missing required section [env]");
    if (config.experiment.policies.empty()) {
        throw ConfigError("at least one [policy] section is required");
    }
    for (std::size_t i = 0; i < config.experiment.policies.size(); ++i) {
        for (std::size_t j = i + 1; j < config.experiment.policies.size(); ++j) {
            if (config.experiment.policies[i].name == config.experiment.policies[j].name) {
                throw ConfigError("duplicate policy name '" + config.experiment.policies[i].name + "'");
            }
        }
    }
    return config;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config_text(buffer.str());
}

}  // namespace tsvha
