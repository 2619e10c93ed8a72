// Command-line front end: debias, ect, eqt, bench, experiment.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scmdebias/bias_metrics.hpp"
#include "scmdebias/debias.hpp"
#include "scmdebias/errors.hpp"
#include "scmdebias/experiment.hpp"
#include "scmdebias/quality_bench.hpp"
#include "scmdebias/subspace.hpp"

namespace fs = std::filesystem;
using namespace scmdebias;

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kNumeric = 3;

WordPairSet load_usable_pairs(const fs::path& path, const EmbeddingMatrix& emb) {
    const auto raw = load_pair_set(path, path.stem().string());
    auto filtered = filter_to_vocabulary(raw, emb);
    for (const auto& p : filtered.dropped) {
        std::cerr << "warning: " << raw.name << ": dropping out-of-vocabulary pair " << p.plus
                  << "/" << p.minus << '\n';
    }
    return filtered.kept;
}

ProfessionList load_usable_professions(const fs::path& path, const EmbeddingMatrix& emb) {
    auto filtered = filter_to_vocabulary(load_professions(path), emb);
    if (!filtered.dropped.empty()) {
        std::cerr << "warning: dropped " << filtered.dropped.size()
                  << " out-of-vocabulary profession(s)\n";
    }
    return filtered.kept;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Remove social-group bias from word embeddings and measure what is left."};
    app.require_subcommand(1);

    const fs::path data = default_data_dir();

    fs::path embeddings;
    std::vector<fs::path> pair_files;
    std::string method = "pp";
    double sigma = 1.0;
    std::size_t sample_size = 8;
    std::uint64_t seed = 0;
    fs::path professions = data / "professions.txt";
    fs::path lexicon = data / "lexicon.tsv";
    fs::path out;
    fs::path neutral;

    auto* debias_cmd = app.add_subcommand(
        "debias",
        "Debias an embedding along one or more pair lists and write it in word2vec text format.\n"
        "Each --pairs file is one bias dimension, applied in the order given. Dimension i\n"
        "samples its pairs with seed splitmix64(seed + (i + 1) * 0x9E3779B97F4A7C15).");
    debias_cmd->add_option("--embeddings", embeddings, "word2vec text file")->required()->check(CLI::ExistingFile);
    debias_cmd->add_option("--pairs", pair_files, "pair list (TSV or JSON), repeatable")->required()->check(CLI::ExistingFile);
    debias_cmd->add_option("--method", method, "sub, lp, pp or hd")->capture_default_str();
    debias_cmd->add_option("--sigma", sigma, "PP smoothing sigma")->capture_default_str();
    debias_cmd->add_option("--sample-size", sample_size, "pairs sampled per dimension")->capture_default_str();
    debias_cmd->add_option("--seed", seed, "sampling seed")->capture_default_str();
    debias_cmd->add_option("--neutral", neutral, "HD neutral words, one per line (default: all words not in the pair list)")
        ->check(CLI::ExistingFile);
    debias_cmd->add_option("--out", out, "output embedding file")->required();

    fs::path ect_pairs;
    auto* ect_cmd = app.add_subcommand("ect", "Embedding Coherence Test for one attribute.");
    ect_cmd->add_option("--embeddings", embeddings)->required()->check(CLI::ExistingFile);
    ect_cmd->add_option("--pairs", ect_pairs, "attribute pair list")->required()->check(CLI::ExistingFile);
    ect_cmd->add_option("--professions", professions)->capture_default_str()->check(CLI::ExistingFile);

    auto* eqt_cmd = app.add_subcommand("eqt", "Embedding Quality Test for one attribute.");
    eqt_cmd->add_option("--embeddings", embeddings)->required()->check(CLI::ExistingFile);
    eqt_cmd->add_option("--pairs", ect_pairs, "attribute pair list")->required()->check(CLI::ExistingFile);
    eqt_cmd->add_option("--professions", professions)->capture_default_str()->check(CLI::ExistingFile);
    eqt_cmd->add_option("--lexicon", lexicon)->capture_default_str()->check(CLI::ExistingFile);

    fs::path google, msr, ws353, rg65;
    std::string analogy_method = "3cosadd";
    auto* bench_cmd = app.add_subcommand("bench", "Analogy accuracy and word-similarity correlation.");
    bench_cmd->add_option("--embeddings", embeddings)->required()->check(CLI::ExistingFile);
    bench_cmd->add_option("--google", google, "Google analogy file")->check(CLI::ExistingFile);
    bench_cmd->add_option("--msr", msr, "MSR analogy file")->check(CLI::ExistingFile);
    bench_cmd->add_option("--ws353", ws353, "WordSim-353 file")->check(CLI::ExistingFile);
    bench_cmd->add_option("--rg65", rg65, "RG-65 file")->check(CLI::ExistingFile);
    bench_cmd->add_option("--analogy-method", analogy_method, "3cosadd or 3cosmul")->capture_default_str();

    fs::path config_path;
    std::size_t trials = 0;
    std::size_t threads = 0;
    std::string format;
    auto* exp_cmd = app.add_subcommand("experiment", "Run the full seeded-trial protocol from a JSON config.");
    exp_cmd->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    auto* trials_opt = exp_cmd->add_option("--trials", trials, "override trial count");
    auto* seed_opt = exp_cmd->add_option("--seed", seed, "override base seed");
    auto* sample_opt = exp_cmd->add_option("--sample-size", sample_size, "override pairs per sample");
    auto* threads_opt = exp_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
    exp_cmd->add_option("--out", out, "report path (default: config 'output' or stdout)");
    exp_cmd->add_option("--format", format, "json or tsv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        std::cout << std::setprecision(10);
        if (*debias_cmd) {
            const EmbeddingMatrix emb = load_embeddings(embeddings);
            DebiasSpec spec;
            spec.method = parse_method(method);
            spec.pp_sigma = sigma;
            for (const auto& f : pair_files) spec.dimensions.push_back(load_usable_pairs(f, emb));
            if (!neutral.empty()) {
                std::unordered_set<std::string> tokens;
                std::ifstream in(neutral);
                for (std::string line; std::getline(in, line);) {
                    if (!line.empty()) tokens.insert(line);
                }
                spec.hd_neutral = std::move(tokens);
            }
            std::vector<BiasDirection> directions;
            const EmbeddingMatrix result = run_pipeline(emb, spec, seed, sample_size, &directions);
            save_embeddings(result, out);
            for (const auto& d : directions) {
                std::cerr << d.source.name << ": sampled " << d.source.size() << " pairs (seed " << d.seed << ")\n";
            }
        } else if (*ect_cmd || *eqt_cmd) {
            const EmbeddingMatrix emb = load_embeddings(embeddings);
            const WordPairSet attribute = load_usable_pairs(ect_pairs, emb);
            const ProfessionList profs = load_usable_professions(professions, emb);
            if (*ect_cmd) {
                std::cout << attribute.name << "\tECT\t" << ect(emb, attribute, profs) << '\n';
            } else {
                const SynonymLexicon lex = load_lexicon(lexicon);
                std::cout << attribute.name << "\tEQT\t" << eqt(emb, attribute, profs, lex) << '\n';
            }
        } else if (*bench_cmd) {
            const EmbeddingMatrix emb = load_embeddings(embeddings);
            const AnalogyMethod am = parse_analogy_method(analogy_method);
            bool any = false;
            for (const auto& [name, path] : {std::pair{"google", google}, std::pair{"msr", msr}}) {
                if (path.empty()) continue;
                any = true;
                const auto r = analogy_accuracy(emb, load_analogy_dataset(path, name), am);
                std::cout << name << "\taccuracy\t" << r.accuracy << "\tattempted\t" << r.attempted
                          << "\tskipped\t" << r.skipped << '\n';
            }
            for (const auto& [name, path] : {std::pair{"ws353", ws353}, std::pair{"rg65", rg65}}) {
                if (path.empty()) continue;
                any = true;
                const auto r = similarity_score(emb, load_similarity_dataset(path, name));
                std::cout << name << "\tspearman\t" << r.correlation << "\tused\t" << r.used
                          << "\tskipped\t" << r.skipped << '\n';
            }
            if (!any) throw UsageError("bench: supply at least one of --google, --msr, --ws353, --rg65");
        } else if (*exp_cmd) {
            ExperimentConfig config = load_experiment_config(config_path);
            if (*trials_opt) config.trials = trials;
            if (*seed_opt) config.base_seed = seed;
            if (*sample_opt) config.sample_size = sample_size;
            if (*threads_opt) config.threads = threads;
            if (!format.empty()) config.format = format;
            if (!out.empty()) config.output = out;
            const ExperimentReport report = run_experiment(config);
            if (config.output) {
                emit_report(report, config.format, *config.output);
            } else if (config.format == "tsv") {
                std::cout << report_to_tsv(report);
            } else if (config.format == "json") {
                std::cout << report_to_json(report);
            } else {
                throw UsageError("unknown report format '" + config.format + "'");
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    }
    return 0;
}
