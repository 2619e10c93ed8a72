#include "scmdebias/bias_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "scmdebias/errors.hpp"

namespace scmdebias {

namespace {

std::string strip(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

void require_tokens(const EmbeddingMatrix& emb, const WordPairSet& attribute,
                    const ProfessionList& professions, const char* metric) {
    std::vector<std::string> missing;
    for (const auto& t : attribute.tokens()) {
        if (!emb.contains(t)) missing.push_back(t);
    }
    for (const auto& t : professions.tokens) {
        if (!emb.contains(t)) missing.push_back(t);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& t : missing) list += (list.empty() ? "" : ", ") + t;
        throw DataError(std::string(metric) + ": tokens not in vocabulary: " + list);
    }
    if (attribute.pairs.empty()) throw UsageError(std::string(metric) + ": empty attribute pair list");
}

}  // namespace

void SynonymLexicon::add(const std::string& token, const std::string& alternate) {
    entries_[token].insert(alternate);
}

bool SynonymLexicon::accepts(const std::string& token, const std::string& answer) const {
    if (token == answer) return true;
    auto it = entries_.find(token);
    return it != entries_.end() && it->second.contains(answer);
}

ProfessionList load_professions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open professions file: " + path.string());
    ProfessionList out;
    std::unordered_set<std::string> seen;
    std::string line;
    while (std::getline(in, line)) {
        const std::string token = to_lower(strip(line));
        if (token.empty() || token.front() == '#') continue;
        if (seen.insert(token).second) out.tokens.push_back(token);
    }
    if (out.tokens.empty()) throw DataError("professions file is empty: " + path.string());
    return out;
}

SynonymLexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open lexicon file: " + path.string());
    SynonymLexicon lexicon;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = strip(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto tab = stripped.find('\t');
        if (tab == std::string::npos) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": malformed lexicon row, expected 'token<TAB>alternates'");
        }
        const std::string token = to_lower(strip(stripped.substr(0, tab)));
        std::istringstream alternates(stripped.substr(tab + 1));
        std::string alt;
        lexicon.add(token, token);
        while (std::getline(alternates, alt, ',')) {
            alt = to_lower(strip(alt));
            if (!alt.empty()) lexicon.add(token, alt);
        }
    }
    return lexicon;
}

FilteredProfessions filter_to_vocabulary(const ProfessionList& professions,
                                         const EmbeddingMatrix& emb) {
    FilteredProfessions out;
    for (const auto& t : professions.tokens) {
        (emb.contains(t) ? out.kept.tokens : out.dropped).push_back(t);
    }
    return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw UsageError("spearman: length mismatch (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
    }
    if (x.size() < 2) throw UsageError("spearman: need at least 2 values");
    for (double v : x) if (!std::isfinite(v)) throw NumericError("spearman: non-finite value");
    for (double v : y) if (!std::isfinite(v)) throw NumericError("spearman: non-finite value");

    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mean = (n + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw NumericError("spearman: undefined for constant input");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double ect(const EmbeddingMatrix& emb, const WordPairSet& attribute,
           const ProfessionList& professions) {
    require_tokens(emb, attribute, professions, "ect");
    if (professions.tokens.size() < 2) throw UsageError("ect: need at least 2 professions");

    Vector plus_mean = Vector::Zero(static_cast<Eigen::Index>(emb.dim()));
    Vector minus_mean = plus_mean;
    for (const auto& p : attribute.pairs) {
        plus_mean += emb.row(emb.index_of(p.plus));
        minus_mean += emb.row(emb.index_of(p.minus));
    }
    plus_mean /= static_cast<double>(attribute.size());
    minus_mean /= static_cast<double>(attribute.size());

    std::vector<double> plus_sims;
    std::vector<double> minus_sims;
    plus_sims.reserve(professions.tokens.size());
    minus_sims.reserve(professions.tokens.size());
    for (const auto& p : professions.tokens) {
        const auto row = emb.row(emb.index_of(p));
        plus_sims.push_back(cosine(plus_mean, row));
        minus_sims.push_back(cosine(minus_mean, row));
    }
    return spearman(plus_sims, minus_sims);
}

double eqt(const EmbeddingMatrix& emb, const WordPairSet& attribute,
           const ProfessionList& professions, const SynonymLexicon& lexicon) {
    require_tokens(emb, attribute, professions, "eqt");
    if (professions.tokens.empty()) throw UsageError("eqt: empty profession list");

    const Matrix unit = unit_rows(emb.vectors());
    const std::size_t total = attribute.size() * professions.tokens.size();
    Matrix queries(static_cast<Eigen::Index>(total), unit.cols());
    std::vector<std::vector<std::size_t>> excluded;
    excluded.reserve(total);
    std::vector<const std::string*> expected;
    expected.reserve(total);

    Eigen::Index q = 0;
    for (const auto& pair : attribute.pairs) {
        const std::size_t plus = emb.index_of(pair.plus);
        const std::size_t minus = emb.index_of(pair.minus);
        for (const auto& profession : professions.tokens) {
            const std::size_t p = emb.index_of(profession);
            queries.row(q++) = unit.row(static_cast<Eigen::Index>(p)) -
                               unit.row(static_cast<Eigen::Index>(plus)) +
                               unit.row(static_cast<Eigen::Index>(minus));
            excluded.push_back({plus, minus});
            expected.push_back(&profession);
        }
    }
    // Ranking by cosine with the query equals ranking by dot product with a
    // unit query over unit rows.
    for (Eigen::Index i = 0; i < queries.rows(); ++i) {
        const double n = queries.row(i).norm();
        if (n > 0.0) queries.row(i) /= n;
    }
    const auto answers = argmax_dot_batch(unit, queries, excluded);

    std::size_t unbiased = 0;
    for (std::size_t i = 0; i < total; ++i) {
        if (lexicon.accepts(*expected[i], emb.token(answers[i]))) ++unbiased;
    }
    return static_cast<double>(unbiased) / static_cast<double>(total);
}

}  // namespace scmdebias
