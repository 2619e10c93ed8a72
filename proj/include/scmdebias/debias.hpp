#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "scmdebias/embedding_store.hpp"
#include "scmdebias/subspace.hpp"

namespace scmdebias {

enum class Method { Sub, LP, PP, HD };

std::string_view method_name(Method method);
// Case-insensitive: "sub", "lp", "pp", "hd".
Method parse_method(std::string_view name);

// Which debiasing algorithm to run and along which bias dimensions, in order.
struct DebiasSpec {
    Method method = Method::LP;
    std::vector<WordPairSet> dimensions;
    double pp_sigma = 1.0;
    // sigma = 0 collapses PP to a hard projection; only tests should want it.
    bool allow_zero_sigma = false;
    // HD neutral words. When unset, every vocabulary token that does not occur
    // in the dimension's full pair list is neutral.
    std::optional<std::unordered_set<std::string>> hd_neutral;

    void validate() const;
};

// w' = w - v
EmbeddingMatrix subtract(const EmbeddingMatrix& emb, const BiasDirection& dir);

// w' = w - <w, v> v
EmbeddingMatrix linear_project(const EmbeddingMatrix& emb, const BiasDirection& dir);

// Partial projection with smoothing f(eta) = sigma^2 / (eta + 1)^2:
//
//   r(w) = w - <w, v> v
//   beta = <w, v> - <mu, v>
//   w'   = mu + r(w) + beta * f(|r(w)|) * v
//
// where mu is dir.anchor_mean. Words with a large bias-orthogonal component
// keep almost none of their bias component.
EmbeddingMatrix partial_project(const EmbeddingMatrix& emb, const BiasDirection& dir,
                                double sigma);

// Hard debiasing on a unit-normalized copy of `emb`.
//
// Neutral tokens are projected orthogonal to the direction and renormalized.
// Equality pairs are equalized: for a pair (a, b) with midpoint m,
//   nu = m - <m, v> v,  z = sqrt(1 - |nu|^2)
//   a' = nu + z * s * v,  b' = nu - z * s * v,  s = sign(<a - b, v>)
// Pairs sharing a token (e.g. his/her and him/her) are merged into one
// equality set and equalized around the set mean, so every member is
// equidistant from every neutral word. Tokens in an equality pair are never
// neutralized. Neutral tokens missing from the vocabulary are ignored.
EmbeddingMatrix hard_debias(const EmbeddingMatrix& emb, const BiasDirection& dir,
                            const std::unordered_set<std::string>& neutral,
                            const WordPairSet& equality_pairs);

// Vocabulary minus every token in `pairs`.
std::unordered_set<std::string> complement_of_pairs(const EmbeddingMatrix& emb,
                                                    const WordPairSet& pairs);

// Sampling seed for dimension `index` of a pipeline run with `trial_seed`:
//   splitmix64(trial_seed + (index + 1) * 0x9E3779B97F4A7C15)
std::uint64_t dimension_seed(std::uint64_t trial_seed, std::size_t index);

// For each dimension in order: sample `sample_size` pairs, compute the bias
// direction on the current (partially debiased) embedding, apply the method.
// When `directions` is non-null the directions used are appended to it.
EmbeddingMatrix run_pipeline(const EmbeddingMatrix& emb, const DebiasSpec& spec,
                             std::uint64_t seed, std::size_t sample_size,
                             std::vector<BiasDirection>* directions = nullptr);

}  // namespace scmdebias
