#include "scmdebias/embedding_store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string_view>

#include "scmdebias/errors.hpp"

namespace scmdebias {

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        if (pos >= line.size()) break;
        std::size_t end = pos;
        while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
        fields.push_back(line.substr(pos, end - pos));
        pos = end;
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::string where(const std::string& source, std::size_t line_no) {
    return source + ":" + std::to_string(line_no);
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    if (tokens_.empty()) throw DataError("vocabulary must contain at least one token");
    index_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        auto [it, inserted] = index_.emplace(tokens_[i], i);
        if (!inserted) {
            throw DataError("duplicate token '" + tokens_[i] + "' at rows " +
                            std::to_string(it->second) + " and " + std::to_string(i));
        }
    }
}

std::optional<std::size_t> Vocabulary::find(const std::string& token) const {
    auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> tokens, Matrix vectors)
    : EmbeddingMatrix(std::make_shared<const Vocabulary>(std::move(tokens)), std::move(vectors)) {}

EmbeddingMatrix::EmbeddingMatrix(std::shared_ptr<const Vocabulary> vocab, Matrix vectors)
    : vocab_(std::move(vocab)), vectors_(std::move(vectors)) {
    if (static_cast<std::size_t>(vectors_.rows()) != vocab_->size()) {
        throw DataError("embedding has " + std::to_string(vectors_.rows()) + " rows for " +
                        std::to_string(vocab_->size()) + " tokens");
    }
    if (vectors_.cols() < 1) throw DataError("embedding dimension must be at least 1");
    if (!vectors_.allFinite()) {
        for (Eigen::Index i = 0; i < vectors_.rows(); ++i) {
            if (!vectors_.row(i).allFinite()) {
                throw NumericError("non-finite value in vector of '" + vocab_->token(i) + "'");
            }
        }
    }
}

EmbeddingMatrix EmbeddingMatrix::with_vectors(Matrix vectors) const {
    if (vectors.rows() != vectors_.rows() || vectors.cols() != vectors_.cols()) {
        throw UsageError("with_vectors: shape mismatch");
    }
    return EmbeddingMatrix(vocab_, std::move(vectors));
}

std::size_t EmbeddingMatrix::index_of(const std::string& token) const {
    auto row = vocab_->find(token);
    if (!row) throw DataError("token '" + token + "' not in vocabulary");
    return *row;
}

Vector EmbeddingMatrix::vector_of(const std::string& token) const {
    return row(index_of(token));
}

EmbeddingMatrix parse_embeddings(std::istream& in, const std::string& source_name) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw DataError(source_name + ": empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_spaces(line);
    std::size_t count = 0;
    std::size_t dim = 0;
    if (header.size() != 2 || !parse_number(header[0], count) || !parse_number(header[1], dim) ||
        count == 0 || dim == 0) {
        throw DataError(where(source_name, line_no) + ": malformed header, expected '<count> <dim>'");
    }

    std::vector<std::string> tokens;
    tokens.reserve(count);
    std::unordered_map<std::string, std::size_t> seen;
    seen.reserve(count);
    Matrix vectors(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dim));

    while (tokens.size() < count && std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto fields = split_spaces(line);
        if (fields.empty()) continue;
        if (fields.size() != dim + 1) {
            throw DataError(where(source_name, line_no) + ": row arity mismatch, expected " +
                            std::to_string(dim) + " values, found " +
                            std::to_string(fields.size() - 1));
        }
        std::string token(fields[0]);
        if (auto [it, inserted] = seen.emplace(token, line_no); !inserted) {
            throw DataError(where(source_name, line_no) + ": duplicate token '" + token +
                            "' (first seen at line " + std::to_string(it->second) + ")");
        }
        const auto row = static_cast<Eigen::Index>(tokens.size());
        for (std::size_t j = 0; j < dim; ++j) {
            double value = 0.0;
            if (!parse_number(fields[j + 1], value)) {
                throw DataError(where(source_name, line_no) + ": cannot parse value '" +
                                std::string(fields[j + 1]) + "'");
            }
            if (!std::isfinite(value)) {
                throw DataError(where(source_name, line_no) + ": non-finite value for '" + token + "'");
            }
            vectors(row, static_cast<Eigen::Index>(j)) = value;
        }
        tokens.push_back(std::move(token));
    }
    if (tokens.size() != count) {
        throw DataError(source_name + ": header declares " + std::to_string(count) +
                        " rows, found " + std::to_string(tokens.size()));
    }
    return EmbeddingMatrix(std::move(tokens), std::move(vectors));
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open embedding file: " + path.string());
    return parse_embeddings(in, path.string());
}

void write_embeddings(const EmbeddingMatrix& emb, std::ostream& out) {
    out << emb.size() << ' ' << emb.dim() << '\n';
    out << std::setprecision(6);
    const auto& vectors = emb.vectors();
    for (std::size_t i = 0; i < emb.size(); ++i) {
        out << emb.token(i);
        for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
            out << ' ' << vectors(static_cast<Eigen::Index>(i), j);
        }
        out << '\n';
    }
}

void save_embeddings(const EmbeddingMatrix& emb, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write embedding file: " + path.string());
    write_embeddings(emb, out);
    if (!out) throw DataError("write failed: " + path.string());
}

double cosine(const VectorRef& u, const VectorRef& v) {
    if (u.size() != v.size()) throw UsageError("cosine: dimension mismatch");
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) throw NumericError("cosine: zero-norm vector");
    return u.dot(v) / (nu * nv);
}

std::vector<Neighbor> nearest_neighbor(const EmbeddingMatrix& emb, const VectorRef& query,
                                       const std::unordered_set<std::string>& exclude,
                                       std::size_t k) {
    if (static_cast<std::size_t>(query.size()) != emb.dim()) {
        throw UsageError("nearest_neighbor: query dimension " + std::to_string(query.size()) +
                         " != embedding dimension " + std::to_string(emb.dim()));
    }
    std::vector<std::size_t> candidates;
    candidates.reserve(emb.size());
    for (std::size_t i = 0; i < emb.size(); ++i) {
        if (!exclude.contains(emb.token(i))) candidates.push_back(i);
    }
    if (k == 0 || k > candidates.size()) {
        throw UsageError("nearest_neighbor: k=" + std::to_string(k) + " but only " +
                         std::to_string(candidates.size()) + " candidates");
    }
    const double qnorm = query.norm();
    if (qnorm == 0.0) throw NumericError("nearest_neighbor: zero-norm query");

    std::vector<double> sims(emb.size(), 0.0);
    for (std::size_t i : candidates) sims[i] = cosine(emb.row(i), query);
    auto better = [&](std::size_t a, std::size_t b) {
        if (sims[a] != sims[b]) return sims[a] > sims[b];
        return a < b;
    };
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                      candidates.end(), better);
    std::vector<Neighbor> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.push_back({emb.token(candidates[i]), sims[candidates[i]]});
    }
    return out;
}

Matrix unit_rows(const Matrix& vectors) {
    Matrix out = vectors;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double n = out.row(i).norm();
        if (n > 0.0) out.row(i) /= n;
    }
    return out;
}

EmbeddingMatrix unit_normalized(const EmbeddingMatrix& emb) {
    Matrix out = emb.vectors();
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double n = out.row(i).norm();
        if (n == 0.0) {
            throw NumericError("cannot normalize zero-norm vector of '" +
                               emb.token(static_cast<std::size_t>(i)) + "'");
        }
        out.row(i) /= n;
    }
    return emb.with_vectors(std::move(out));
}

std::optional<std::size_t> argmax_dot(const Matrix& rows, const VectorRef& query,
                                      const std::vector<std::size_t>& excluded) {
    const Vector scores = rows * query;
    std::optional<std::size_t> best;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
        const auto row = static_cast<std::size_t>(i);
        if (std::find(excluded.begin(), excluded.end(), row) != excluded.end()) continue;
        if (!best || scores(i) > best_score) {
            best = row;
            best_score = scores(i);
        }
    }
    return best;
}

std::vector<std::size_t> argmax_dot_batch(const Matrix& rows, const Matrix& queries,
                                          const std::vector<std::vector<std::size_t>>& excluded) {
    if (queries.cols() != rows.cols()) throw UsageError("argmax_dot_batch: dimension mismatch");
    if (static_cast<Eigen::Index>(excluded.size()) != queries.rows()) {
        throw UsageError("argmax_dot_batch: one exclusion list per query required");
    }
    constexpr Eigen::Index kBlock = 256;
    std::vector<std::size_t> out(static_cast<std::size_t>(queries.rows()));
    Eigen::MatrixXd scores;
    for (Eigen::Index start = 0; start < queries.rows(); start += kBlock) {
        const Eigen::Index count = std::min(kBlock, queries.rows() - start);
        scores.noalias() = rows * queries.middleRows(start, count).transpose();
        for (Eigen::Index q = 0; q < count; ++q) {
            const auto& skip = excluded[static_cast<std::size_t>(start + q)];
            std::optional<Eigen::Index> best;
            double best_score = -std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < scores.rows(); ++i) {
                if (!best || scores(i, q) > best_score) {
                    if (std::find(skip.begin(), skip.end(), static_cast<std::size_t>(i)) != skip.end()) {
                        continue;
                    }
                    best = i;
                    best_score = scores(i, q);
                }
            }
            if (!best) throw UsageError("argmax_dot_batch: every row excluded");
            out[static_cast<std::size_t>(start + q)] = static_cast<std::size_t>(*best);
        }
    }
    return out;
}

}  // namespace scmdebias
