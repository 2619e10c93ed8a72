#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scmdebias/debias.hpp"

namespace scmdebias {

inline constexpr const char* kToolVersion = "scmdebias 1.0.0";

// One column of the method matrix.
//
// With `same` set, the method is run once per evaluation attribute using that
// attribute's own pair list, and only that attribute is measured. Otherwise
// the method debiases along `dimensions` in order and every evaluation
// attribute is measured on the result.
struct MethodConfig {
    std::string name;
    Method method = Method::PP;
    bool same = false;
    std::vector<std::string> dimensions;
    double sigma = 1.0;
    // Restricts which evaluation attributes this method reports; empty = all.
    std::vector<std::string> attributes;
    std::optional<std::filesystem::path> hd_neutral;
};

enum class BenchmarkKind { Analogy, Similarity };

struct BenchmarkConfig {
    std::string name;
    BenchmarkKind kind = BenchmarkKind::Analogy;
    std::filesystem::path path;
};

struct ExperimentConfig {
    std::filesystem::path embeddings;
    // Pair-set name -> file. Names not listed fall back to the shipped data
    // files (gender, race, age, warmth, competence).
    std::map<std::string, std::filesystem::path> pair_sets;
    std::vector<MethodConfig> methods;
    std::vector<std::string> attributes{"gender", "race", "age"};
    std::vector<std::string> metrics{"ECT", "EQT"};
    std::size_t trials = 30;
    std::size_t sample_size = 8;
    std::uint64_t base_seed = 0;
    double ci_level = 0.95;
    std::filesystem::path professions;
    std::filesystem::path lexicon;
    std::vector<BenchmarkConfig> benchmarks;
    std::size_t threads = 0;  // 0 = hardware concurrency
    std::optional<std::filesystem::path> output;
    std::string format = "json";

    void validate() const;
};

// Parses the JSON config; relative paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::filesystem::path& base_dir);
// Relative paths resolve against the config file's directory.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// The standard method matrix: HD_same (gender only), Sub/LP/PP under the
// "same" and SCM conditions, and PP over gender, race, age.
std::vector<MethodConfig> standard_methods(double sigma = 1.0);

struct MetricSummary {
    std::string method;
    std::string attribute;
    std::string metric;
    std::vector<double> values;
    double mean = 0.0;
    double stddev = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    std::size_t n = 0;

    bool operator==(const MetricSummary&) const = default;
};

struct ExperimentReport {
    std::string tool_version = kToolVersion;
    std::string ci_method = "student-t";
    double ci_level = 0.95;
    std::uint64_t base_seed = 0;
    std::size_t trials = 0;
    std::size_t sample_size = 0;
    std::string sign_convention = "first-sampled-pair";
    std::string config_echo;  // compact JSON
    std::vector<std::string> notes;
    std::vector<MetricSummary> rows;

    const MetricSummary* find(const std::string& method, const std::string& attribute,
                              const std::string& metric) const;
    bool operator==(const ExperimentReport&) const = default;
};

// Builds a summary row from per-trial values. A single value gets a
// degenerate interval [v, v].
MetricSummary summarize(std::string method, std::string attribute, std::string metric,
                        std::vector<double> values, double level);

ExperimentReport run_experiment(const ExperimentConfig& config);

std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);
std::string report_to_tsv(const ExperimentReport& report);

// format: "json" or "tsv".
void emit_report(const ExperimentReport& report, const std::string& format,
                 const std::filesystem::path& path);

std::filesystem::path default_data_dir();

}  // namespace scmdebias
