#include "scmdebias/subspace.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "scmdebias/errors.hpp"

namespace scmdebias {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

WordPair make_pair(std::string plus, std::string minus, const std::string& where) {
    plus = to_lower(trim(plus));
    minus = to_lower(trim(minus));
    if (plus.empty() || minus.empty()) throw DataError(where + ": empty token in pair");
    if (plus == minus) throw DataError(where + ": pair has identical poles '" + plus + "'");
    return {std::move(plus), std::move(minus)};
}

// Unbiased draw in [0, bound) from a 64-bit engine. std::uniform_int_distribution
// is implementation-defined, which would make samples differ across toolchains.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw = 0;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % bound;
}

}  // namespace

std::string to_lower(std::string text) {
    std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return text;
}

std::vector<std::string> WordPairSet::tokens() const {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& p : pairs) {
        if (seen.insert(p.plus).second) out.push_back(p.plus);
        if (seen.insert(p.minus).second) out.push_back(p.minus);
    }
    return out;
}

WordPairSet parse_pair_set(const std::string& text, const std::string& name,
                           const std::string& source_name) {
    WordPairSet set{name, {}};
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw DataError(source_name + ": empty pair file");

    if (text[first] == '[') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError(source_name + ": invalid JSON: " + e.what());
        }
        if (!doc.is_array()) throw DataError(source_name + ": expected a JSON array of pairs");
        for (std::size_t i = 0; i < doc.size(); ++i) {
            const auto& item = doc[i];
            const std::string where = source_name + ": element " + std::to_string(i);
            if (!item.is_array() || item.size() != 2 || !item[0].is_string() || !item[1].is_string()) {
                throw DataError(where + ": expected [plus, minus]");
            }
            set.pairs.push_back(make_pair(item[0].get<std::string>(), item[1].get<std::string>(), where));
        }
    } else {
        std::istringstream in(text);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string stripped = trim(line);
            if (stripped.empty() || stripped.front() == '#') continue;
            const std::string where = source_name + ":" + std::to_string(line_no);
            const auto tab = stripped.find('\t');
            if (tab == std::string::npos || stripped.find('\t', tab + 1) != std::string::npos) {
                throw DataError(where + ": malformed row, expected 'plus<TAB>minus'");
            }
            set.pairs.push_back(make_pair(stripped.substr(0, tab), stripped.substr(tab + 1), where));
        }
    }
    if (set.pairs.empty()) throw DataError(source_name + ": no pairs found");
    return set;
}

WordPairSet load_pair_set(const std::filesystem::path& path, const std::string& name) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open pair file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_pair_set(buffer.str(), name, path.string());
}

FilteredPairs filter_to_vocabulary(const WordPairSet& set, const EmbeddingMatrix& emb) {
    FilteredPairs out{{set.name, {}}, {}};
    for (const auto& p : set.pairs) {
        if (emb.contains(p.plus) && emb.contains(p.minus)) {
            out.kept.pairs.push_back(p);
        } else {
            out.dropped.push_back(p);
        }
    }
    if (out.kept.pairs.empty()) {
        throw DataError("pair set '" + set.name + "': no pair has both tokens in the vocabulary");
    }
    return out;
}

WordPairSet sample_pairs(const WordPairSet& set, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw UsageError("sample_pairs: sample size must be positive");
    if (n > set.pairs.size()) {
        throw UsageError("sample_pairs: requested " + std::to_string(n) + " pairs from '" +
                         set.name + "' which has only " + std::to_string(set.pairs.size()));
    }
    std::vector<std::size_t> order(set.pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates: the first n slots become the sample.
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + bounded(rng, order.size() - i);
        std::swap(order[i], order[j]);
    }
    WordPairSet out{set.name, {}};
    out.pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.pairs.push_back(set.pairs[order[i]]);
    return out;
}

Matrix difference_matrix(const EmbeddingMatrix& emb, const WordPairSet& pairs) {
    if (pairs.pairs.empty()) throw UsageError("difference_matrix: empty pair set");
    Matrix diffs(static_cast<Eigen::Index>(pairs.size()), static_cast<Eigen::Index>(emb.dim()));
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& p = pairs.pairs[i];
        const auto plus = emb.find(p.plus);
        const auto minus = emb.find(p.minus);
        if (!plus) missing.push_back(p.plus);
        if (!minus) missing.push_back(p.minus);
        if (plus && minus) {
            diffs.row(static_cast<Eigen::Index>(i)) =
                emb.vectors().row(static_cast<Eigen::Index>(*plus)) -
                emb.vectors().row(static_cast<Eigen::Index>(*minus));
        }
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& t : missing) list += (list.empty() ? "" : ", ") + t;
        throw DataError("pair set '" + pairs.name + "': tokens not in vocabulary: " + list);
    }
    return diffs;
}

BiasDirection compute_bias_direction(const EmbeddingMatrix& emb, const WordPairSet& pairs,
                                     std::size_t k) {
    if (k != 1) throw UsageError("compute_bias_direction: only k = 1 is supported");
    const Matrix diffs = difference_matrix(emb, pairs);
    if (diffs.isZero(0.0)) {
        throw NumericError("pair set '" + pairs.name + "': all pair differences are zero");
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(diffs), Eigen::ComputeThinV);
    Vector direction = svd.matrixV().col(0);
    direction.normalize();
    if (direction.dot(diffs.row(0).transpose()) < 0.0) direction = -direction;

    Vector mean = Vector::Zero(static_cast<Eigen::Index>(emb.dim()));
    for (const auto& p : pairs.pairs) {
        mean += emb.row(emb.index_of(p.plus));
        mean += emb.row(emb.index_of(p.minus));
    }
    mean /= static_cast<double>(2 * pairs.size());

    return {std::move(direction), std::move(mean), pairs, 0};
}

}  // namespace scmdebias
