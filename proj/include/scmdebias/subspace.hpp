#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scmdebias/embedding_store.hpp"

namespace scmdebias {

struct WordPair {
    std::string plus;
    std::string minus;

    bool operator==(const WordPair&) const = default;
};

// Named list of (high pole, low pole) pairs that defines one bias concept.
struct WordPairSet {
    std::string name;
    std::vector<WordPair> pairs;

    std::size_t size() const { return pairs.size(); }
    // Every token appearing on either side, in first-appearance order.
    std::vector<std::string> tokens() const;
};

// Unit bias direction plus the mean of the words that defined it.
struct BiasDirection {
    Vector direction;
    Vector anchor_mean;
    WordPairSet source;
    std::uint64_t seed = 0;
};

// Accepts two-column TSV (lines starting with '#' are comments) or a JSON
// array of [plus, minus] arrays. Tokens are lowercased.
WordPairSet load_pair_set(const std::filesystem::path& path, const std::string& name);
WordPairSet parse_pair_set(const std::string& text, const std::string& name,
                           const std::string& source_name = "<text>");

struct FilteredPairs {
    WordPairSet kept;
    std::vector<WordPair> dropped;
};

// Drops pairs with any out-of-vocabulary token. Throws DataError when no pair
// survives.
FilteredPairs filter_to_vocabulary(const WordPairSet& set, const EmbeddingMatrix& emb);

// n distinct pairs drawn without replacement; a given seed always yields the
// same sample on every platform.
WordPairSet sample_pairs(const WordPairSet& set, std::size_t n, std::uint64_t seed);

// Top right-singular vector of the n x d matrix whose rows are plus - minus
// differences. The sign is chosen so the first pair's difference has a
// non-negative projection. Only k = 1 is supported.
BiasDirection compute_bias_direction(const EmbeddingMatrix& emb, const WordPairSet& pairs,
                                     std::size_t k = 1);

// The n x d difference matrix used by compute_bias_direction.
Matrix difference_matrix(const EmbeddingMatrix& emb, const WordPairSet& pairs);

std::string to_lower(std::string text);

}  // namespace scmdebias
