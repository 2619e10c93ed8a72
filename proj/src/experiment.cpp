#include "scmdebias/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "scmdebias/bias_metrics.hpp"
#include "scmdebias/errors.hpp"
#include "scmdebias/quality_bench.hpp"
#include "scmdebias/statistics.hpp"

#ifndef SCMDEBIAS_DATA_DIR
#define SCMDEBIAS_DATA_DIR "data"
#endif

namespace scmdebias {

using nlohmann::json;

namespace {

constexpr const char* kAllAttributes = "all";

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : (base / path).lexically_normal();
}

BenchmarkKind kind_for(const std::string& name) {
    const std::string lower = to_lower(name);
    if (lower == "google" || lower == "msr") return BenchmarkKind::Analogy;
    if (lower == "ws353" || lower == "rg65" || lower == "rg-65") return BenchmarkKind::Similarity;
    throw UsageError("benchmark '" + name + "' needs an explicit \"kind\" (analogy or similarity)");
}

MethodConfig parse_method_config(const json& j, const std::filesystem::path& base) {
    if (!j.is_object()) throw UsageError("config: each method must be an object");
    MethodConfig m;
    m.name = j.at("name").get<std::string>();
    m.method = parse_method(j.at("method").get<std::string>());
    const auto& dims = j.at("dimensions");
    if (dims.is_string()) {
        if (dims.get<std::string>() != "same") {
            throw UsageError("config: method '" + m.name + "': dimensions must be \"same\" or a list");
        }
        m.same = true;
    } else {
        m.dimensions = dims.get<std::vector<std::string>>();
    }
    m.sigma = j.value("sigma", 1.0);
    m.attributes = j.value("attributes", std::vector<std::string>{});
    if (j.contains("hd_neutral")) m.hd_neutral = resolve(base, j.at("hd_neutral").get<std::string>());
    return m;
}

json config_to_json(const ExperimentConfig& c) {
    json methods = json::array();
    for (const auto& m : c.methods) {
        json jm = {{"name", m.name},
                   {"method", std::string(method_name(m.method))},
                   {"sigma", m.sigma},
                   {"attributes", m.attributes}};
        jm["dimensions"] = m.same ? json("same") : json(m.dimensions);
        if (m.hd_neutral) jm["hd_neutral"] = m.hd_neutral->string();
        methods.push_back(std::move(jm));
    }
    json pair_sets = json::object();
    for (const auto& [name, path] : c.pair_sets) pair_sets[name] = path.string();
    json benchmarks = json::array();
    for (const auto& b : c.benchmarks) {
        benchmarks.push_back({{"name", b.name},
                              {"kind", b.kind == BenchmarkKind::Analogy ? "analogy" : "similarity"},
                              {"path", b.path.string()}});
    }
    return {{"embeddings", c.embeddings.string()},
            {"pair_sets", pair_sets},
            {"methods", methods},
            {"attributes", c.attributes},
            {"metrics", c.metrics},
            {"trials", c.trials},
            {"sample_size", c.sample_size},
            {"base_seed", c.base_seed},
            {"ci_level", c.ci_level},
            {"professions", c.professions.string()},
            {"lexicon", c.lexicon.string()},
            {"benchmarks", benchmarks}};
}

// A unit of parallel work: one trial of one method, optionally for one
// attribute (the "same" condition).
struct Job {
    std::size_t trial;
    std::size_t method;
    std::optional<std::size_t> attribute;
};

struct LoadedBenchmark {
    BenchmarkConfig config;
    std::optional<AnalogyDataset> analogy;
    std::optional<SimilarityDataset> similarity;
};

struct Inputs {
    EmbeddingMatrix embedding;
    std::map<std::string, WordPairSet> pair_sets;
    ProfessionList professions;
    SynonymLexicon lexicon;
    std::vector<LoadedBenchmark> benchmarks;
    std::vector<std::optional<std::unordered_set<std::string>>> hd_neutral;  // per method
    std::vector<std::string> notes;
};

std::unordered_set<std::string> load_token_set(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open token file: " + path.string());
    std::unordered_set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) out.insert(line);
    }
    return out;
}

std::filesystem::path pair_set_path(const ExperimentConfig& c, const std::string& name) {
    if (auto it = c.pair_sets.find(name); it != c.pair_sets.end()) return it->second;
    return default_data_dir() / (name + ".tsv");
}

bool wants(const ExperimentConfig& c, const std::string& metric) {
    return std::find(c.metrics.begin(), c.metrics.end(), metric) != c.metrics.end();
}

// metric name -> value
using Measurements = std::vector<std::pair<std::string, double>>;

Measurements measure(const Inputs& in, const ExperimentConfig& c, const EmbeddingMatrix& emb,
                     const std::vector<std::string>& attributes, bool with_benchmarks) {
    Measurements out;
    for (const auto& attr : attributes) {
        const WordPairSet& set = in.pair_sets.at(attr);
        if (wants(c, "ECT")) out.emplace_back(attr + "\tECT", ect(emb, set, in.professions));
        if (wants(c, "EQT")) out.emplace_back(attr + "\tEQT", eqt(emb, set, in.professions, in.lexicon));
    }
    if (with_benchmarks) {
        for (const auto& b : in.benchmarks) {
            const double value = b.analogy ? analogy_accuracy(emb, *b.analogy).accuracy
                                           : similarity_score(emb, *b.similarity).correlation;
            out.emplace_back(std::string(kAllAttributes) + "\t" + b.config.name, value);
        }
    }
    return out;
}

[[noreturn]] void rethrow_with_context(std::exception_ptr error, const std::string& context) {
    try {
        std::rethrow_exception(error);
    } catch (const DataError& e) {
        throw DataError(context + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError(context + ": " + e.what());
    } catch (const UsageError& e) {
        throw UsageError(context + ": " + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(context + ": " + e.what());
    }
}

Inputs load_inputs(const ExperimentConfig& c) {
    Inputs in{load_embeddings(c.embeddings), {}, {}, {}, {}, {}, {}};
    const EmbeddingMatrix& emb = in.embedding;

    std::set<std::string> names(c.attributes.begin(), c.attributes.end());
    for (const auto& m : c.methods) names.insert(m.dimensions.begin(), m.dimensions.end());
    for (const auto& name : names) {
        const WordPairSet raw = load_pair_set(pair_set_path(c, name), name);
        auto filtered = filter_to_vocabulary(raw, emb);
        if (!filtered.dropped.empty()) {
            std::string list;
            for (const auto& p : filtered.dropped) list += " " + p.plus + "/" + p.minus;
            in.notes.push_back("pair set '" + name + "': dropped " +
                               std::to_string(filtered.dropped.size()) + " out-of-vocabulary pair(s):" + list);
        }
        in.pair_sets.emplace(name, std::move(filtered.kept));
    }
    for (const auto& m : c.methods) {
        std::vector<std::string> used = m.same ? c.attributes : m.dimensions;
        for (const auto& name : used) {
            const auto available = in.pair_sets.at(name).size();
            if (c.sample_size > available) {
                throw UsageError("method '" + m.name + "': sample size " + std::to_string(c.sample_size) +
                                 " exceeds the " + std::to_string(available) +
                                 " usable pairs of '" + name + "'");
            }
        }
        in.hd_neutral.push_back(m.hd_neutral ? std::optional(load_token_set(*m.hd_neutral)) : std::nullopt);
    }

    auto professions = filter_to_vocabulary(load_professions(c.professions), emb);
    if (!professions.dropped.empty()) {
        in.notes.push_back("professions: dropped " + std::to_string(professions.dropped.size()) +
                           " out-of-vocabulary token(s)");
    }
    if (professions.kept.tokens.size() < 2) {
        throw DataError("fewer than 2 professions are in the embedding vocabulary");
    }
    in.professions = std::move(professions.kept);
    in.lexicon = load_lexicon(c.lexicon);

    for (const auto& b : c.benchmarks) {
        LoadedBenchmark lb{b, {}, {}};
        if (b.kind == BenchmarkKind::Analogy) {
            lb.analogy = load_analogy_dataset(b.path, b.name);
        } else {
            lb.similarity = load_similarity_dataset(b.path, b.name);
        }
        in.benchmarks.push_back(std::move(lb));
    }
    return in;
}

}  // namespace

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("SCMDEBIAS_DATA_DIR"); env && *env) return env;
    return SCMDEBIAS_DATA_DIR;
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw UsageError("config: trials must be >= 1");
    if (sample_size < 1) throw UsageError("config: sample_size must be >= 1");
    if (!(ci_level > 0.0 && ci_level < 1.0)) throw UsageError("config: ci_level must be in (0, 1)");
    if (attributes.empty()) throw UsageError("config: at least one evaluation attribute is required");
    if (methods.empty()) throw UsageError("config: at least one method is required");
    for (const auto& metric : metrics) {
        if (metric != "ECT" && metric != "EQT") throw UsageError("config: unknown metric '" + metric + "'");
    }
    std::set<std::string> names;
    for (const auto& m : methods) {
        if (m.name.empty() || m.name == "vanilla") {
            throw UsageError("config: method name must be non-empty and not 'vanilla'");
        }
        if (!names.insert(m.name).second) throw UsageError("config: duplicate method name '" + m.name + "'");
        if (!m.same && m.dimensions.empty()) throw UsageError("config: method '" + m.name + "' has no dimensions");
        for (const auto& a : m.attributes) {
            if (std::find(attributes.begin(), attributes.end(), a) == attributes.end()) {
                throw UsageError("config: method '" + m.name + "' restricts to unknown attribute '" + a + "'");
            }
        }
        if (m.method == Method::PP && !(m.sigma > 0.0)) {
            throw UsageError("config: method '" + m.name + "': sigma must be positive");
        }
    }
}

ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("config: invalid JSON: ") + e.what());
    }
    ExperimentConfig c;
    try {
        c.embeddings = resolve(base_dir, j.at("embeddings").get<std::string>());
        if (j.contains("pair_sets")) {
            for (const auto& [name, path] : j.at("pair_sets").items()) {
                c.pair_sets[name] = resolve(base_dir, path.get<std::string>());
            }
        }
        const auto& methods = j.at("methods");
        if (methods.is_string()) {
            if (methods.get<std::string>() != "standard") {
                throw UsageError("config: methods must be a list or \"standard\"");
            }
            c.methods = standard_methods(j.value("sigma", 1.0));
        } else {
            for (const auto& m : methods) c.methods.push_back(parse_method_config(m, base_dir));
        }
        c.attributes = j.value("attributes", c.attributes);
        c.metrics = j.value("metrics", c.metrics);
        for (auto& metric : c.metrics) {
            std::transform(metric.begin(), metric.end(), metric.begin(),
                           [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
        }
        c.trials = j.value("trials", c.trials);
        c.sample_size = j.value("sample_size", c.sample_size);
        c.base_seed = j.value("base_seed", c.base_seed);
        c.ci_level = j.value("ci_level", c.ci_level);
        c.professions = j.contains("professions")
                            ? resolve(base_dir, j.at("professions").get<std::string>())
                            : default_data_dir() / "professions.txt";
        c.lexicon = j.contains("lexicon") ? resolve(base_dir, j.at("lexicon").get<std::string>())
                                          : default_data_dir() / "lexicon.tsv";
        if (j.contains("benchmarks")) {
            const auto& b = j.at("benchmarks");
            if (b.is_object()) {
                for (const auto& [name, path] : b.items()) {
                    c.benchmarks.push_back({name, kind_for(name), resolve(base_dir, path.get<std::string>())});
                }
            } else {
                for (const auto& item : b) {
                    BenchmarkConfig bc;
                    bc.name = item.at("name").get<std::string>();
                    if (item.contains("kind")) {
                        const auto kind = to_lower(item.at("kind").get<std::string>());
                        if (kind != "analogy" && kind != "similarity") {
                            throw UsageError("config: benchmark kind must be analogy or similarity");
                        }
                        bc.kind = kind == "analogy" ? BenchmarkKind::Analogy : BenchmarkKind::Similarity;
                    } else {
                        bc.kind = kind_for(bc.name);
                    }
                    bc.path = resolve(base_dir, item.at("path").get<std::string>());
                    c.benchmarks.push_back(std::move(bc));
                }
            }
        }
        c.threads = j.value("threads", c.threads);
        if (j.contains("output")) c.output = resolve(base_dir, j.at("output").get<std::string>());
        c.format = j.value("format", c.format);
    } catch (const json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_config(buffer.str(), path.parent_path());
}

std::vector<MethodConfig> standard_methods(double sigma) {
    const std::vector<std::string> scm{"warmth", "competence"};
    const std::vector<std::string> gra{"gender", "race", "age"};
    std::vector<MethodConfig> out;
    out.push_back({"HD_same", Method::HD, true, {}, sigma, {"gender"}, std::nullopt});
    for (Method m : {Method::Sub, Method::LP, Method::PP}) {
        const std::string base(method_name(m));
        out.push_back({base + "_same", m, true, {}, sigma, {}, std::nullopt});
        out.push_back({base + "_SCM", m, false, scm, sigma, {}, std::nullopt});
    }
    out.push_back({"PP_G+R+A", Method::PP, false, gra, sigma, {}, std::nullopt});
    return out;
}

const MetricSummary* ExperimentReport::find(const std::string& method, const std::string& attribute,
                                            const std::string& metric) const {
    for (const auto& r : rows) {
        if (r.method == method && r.attribute == attribute && r.metric == metric) return &r;
    }
    return nullptr;
}

MetricSummary summarize(std::string method, std::string attribute, std::string metric,
                        std::vector<double> values, double level) {
    MetricSummary s;
    s.method = std::move(method);
    s.attribute = std::move(attribute);
    s.metric = std::move(metric);
    s.n = values.size();
    s.mean = scmdebias::mean(values);
    s.stddev = sample_stddev(values);
    if (values.size() >= 2) {
        const auto ci = confidence_interval(values, level);
        s.ci_lower = std::min(ci.lower, s.mean);
        s.ci_upper = std::max(ci.upper, s.mean);
    } else {
        s.ci_lower = s.ci_upper = s.mean;
    }
    s.values = std::move(values);
    return s;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const Inputs in = load_inputs(config);
    for (const auto& note : in.notes) std::cerr << "warning: " << note << '\n';

    ExperimentReport report;
    report.ci_level = config.ci_level;
    report.base_seed = config.base_seed;
    report.trials = config.trials;
    report.sample_size = config.sample_size;
    report.config_echo = config_to_json(config).dump();
    report.notes = in.notes;

    // Vanilla baseline, measured once.
    {
        const Measurements vanilla = measure(in, config, in.embedding, config.attributes, true);
        for (const auto& [key, value] : vanilla) {
            const auto tab = key.find('\t');
            report.rows.push_back(summarize("vanilla", key.substr(0, tab), key.substr(tab + 1),
                                            {value}, config.ci_level));
        }
    }

    std::vector<Job> jobs;
    for (std::size_t t = 0; t < config.trials; ++t) {
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
            const auto& method = config.methods[m];
            if (method.same) {
                for (std::size_t a = 0; a < config.attributes.size(); ++a) {
                    const auto& attr = config.attributes[a];
                    if (!method.attributes.empty() &&
                        std::find(method.attributes.begin(), method.attributes.end(), attr) ==
                            method.attributes.end()) {
                        continue;
                    }
                    jobs.push_back({t, m, a});
                }
            } else {
                jobs.push_back({t, m, std::nullopt});
            }
        }
    }

    std::vector<Measurements> results(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const Job& job = jobs[i];
            const MethodConfig& mc = config.methods[job.method];
            try {
                DebiasSpec spec;
                spec.method = mc.method;
                spec.pp_sigma = mc.sigma;
                spec.hd_neutral = in.hd_neutral[job.method];
                std::vector<std::string> evaluated;
                if (job.attribute) {
                    const auto& attr = config.attributes[*job.attribute];
                    spec.dimensions.push_back(in.pair_sets.at(attr));
                    evaluated.push_back(attr);
                } else {
                    for (const auto& d : mc.dimensions) spec.dimensions.push_back(in.pair_sets.at(d));
                    for (const auto& attr : config.attributes) {
                        if (mc.attributes.empty() ||
                            std::find(mc.attributes.begin(), mc.attributes.end(), attr) != mc.attributes.end()) {
                            evaluated.push_back(attr);
                        }
                    }
                }
                const std::uint64_t seed = config.base_seed + job.trial;
                const EmbeddingMatrix debiased =
                    run_pipeline(in.embedding, spec, seed, config.sample_size);
                results[i] = measure(in, config, debiased, evaluated, true);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::size_t threads = config.threads ? config.threads : std::thread::hardware_concurrency();
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, jobs.size()));
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!errors[i]) continue;
        const Job& job = jobs[i];
        std::string context = "trial " + std::to_string(job.trial) + ", method " +
                              config.methods[job.method].name;
        if (job.attribute) context += ", attribute " + config.attributes[*job.attribute];
        rethrow_with_context(errors[i], context);
    }

    // Aggregate in a fixed order: method, attribute, metric; trials ascending.
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
        std::vector<std::string> keys;
        std::map<std::string, std::vector<double>> values;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].method != m) continue;
            for (const auto& [metric_key, value] : results[i]) {
                std::string key = metric_key;
                if (jobs[i].attribute && key.starts_with(kAllAttributes)) {
                    key = config.attributes[*jobs[i].attribute] + key.substr(std::string(kAllAttributes).size());
                }
                auto [it, inserted] = values.try_emplace(key);
                if (inserted) keys.push_back(key);
                it->second.push_back(value);
            }
        }
        // Bias metrics first (attribute order), then utility benchmarks.
        std::stable_sort(keys.begin(), keys.end(), [&](const std::string& a, const std::string& b) {
            auto rank = [&](const std::string& k) {
                const std::string metric = k.substr(k.find('\t') + 1);
                return (metric == "ECT" || metric == "EQT") ? 0 : 1;
            };
            return rank(a) < rank(b);
        });
        for (const auto& key : keys) {
            const auto tab = key.find('\t');
            report.rows.push_back(summarize(config.methods[m].name, key.substr(0, tab),
                                            key.substr(tab + 1), std::move(values[key]),
                                            config.ci_level));
        }
    }
    return report;
}

}  // namespace scmdebias
