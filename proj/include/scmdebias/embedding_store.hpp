#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

namespace scmdebias {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VectorRef = Eigen::Ref<const Vector>;

// Ordered list of unique tokens with a token -> row index.
class Vocabulary {
public:
    explicit Vocabulary(std::vector<std::string> tokens);

    std::size_t size() const { return tokens_.size(); }
    const std::string& token(std::size_t row) const { return tokens_.at(row); }
    const std::vector<std::string>& tokens() const { return tokens_; }
    std::optional<std::size_t> find(const std::string& token) const;
    bool contains(const std::string& token) const { return index_.contains(token); }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Vocabulary-indexed dense word vectors, one row per token.
//
// Immutable once built. Transformations produce a new matrix that shares the
// vocabulary of the source.
class EmbeddingMatrix {
public:
    EmbeddingMatrix(std::vector<std::string> tokens, Matrix vectors);

    // Same vocabulary, new vectors. Shape must match.
    EmbeddingMatrix with_vectors(Matrix vectors) const;

    std::size_t size() const { return vocab_->size(); }
    std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }

    const Vocabulary& vocabulary() const { return *vocab_; }
    const std::vector<std::string>& tokens() const { return vocab_->tokens(); }
    const std::string& token(std::size_t row) const { return vocab_->token(row); }
    std::optional<std::size_t> find(const std::string& token) const { return vocab_->find(token); }
    bool contains(const std::string& token) const { return vocab_->contains(token); }

    const Matrix& vectors() const { return vectors_; }
    auto row(std::size_t i) const { return vectors_.row(static_cast<Eigen::Index>(i)).transpose(); }

    // Row of a token; throws DataError when absent.
    Vector vector_of(const std::string& token) const;
    std::size_t index_of(const std::string& token) const;

private:
    EmbeddingMatrix(std::shared_ptr<const Vocabulary> vocab, Matrix vectors);

    std::shared_ptr<const Vocabulary> vocab_;
    Matrix vectors_;
};

struct Neighbor {
    std::string token;
    double similarity = 0.0;
};

// word2vec text format: "<count> <dim>" header, then "token v1 ... vdim" per line.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);
EmbeddingMatrix parse_embeddings(std::istream& in, const std::string& source_name = "<stream>");

// Writes word2vec text format with 6 significant digits.
void save_embeddings(const EmbeddingMatrix& emb, const std::filesystem::path& path);
void write_embeddings(const EmbeddingMatrix& emb, std::ostream& out);

double cosine(const VectorRef& u, const VectorRef& v);

// Top-k tokens by cosine with the query. Ties resolve to the lower row index.
std::vector<Neighbor> nearest_neighbor(const EmbeddingMatrix& emb, const VectorRef& query,
                                       const std::unordered_set<std::string>& exclude,
                                       std::size_t k);

EmbeddingMatrix unit_normalized(const EmbeddingMatrix& emb);

// Row-normalized copy of the vectors, used by argmax-cosine searches.
Matrix unit_rows(const Matrix& vectors);

// Index of the row with the largest dot product with `query` among rows not in
// `excluded`. Ties resolve to the lower row index. Returns nullopt if all rows
// are excluded.
std::optional<std::size_t> argmax_dot(const Matrix& rows, const VectorRef& query,
                                      const std::vector<std::size_t>& excluded);

// Batched argmax_dot: one result per query row. `excluded[q]` lists the rows
// barred for query q.
std::vector<std::size_t> argmax_dot_batch(const Matrix& rows, const Matrix& queries,
                                          const std::vector<std::vector<std::size_t>>& excluded);

}  // namespace scmdebias
