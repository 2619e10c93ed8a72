#include <gtest/gtest.h>

#include <map>

#include "oracles.hpp"
#include "scmdebias/errors.hpp"
#include "scmdebias/subspace.hpp"
#include "test_support.hpp"

using namespace scmdebias;
using testing_support::random_embedding;

namespace {

WordPairSet numbered_pairs(std::size_t n) {
    WordPairSet set{"test", {}};
    for (std::size_t i = 0; i < n; ++i) {
        set.pairs.push_back({"w" + std::to_string(2 * i), "w" + std::to_string(2 * i + 1)});
    }
    return set;
}

const std::filesystem::path kData = SCMDEBIAS_DATA_DIR;

}  // namespace

TEST(PairSet, ParsesTsvWithCommentsAndLowercases) {
    const auto set = parse_pair_set("# header\nMan\twoman\n\n# note\nhe\tShe\n", "gender");
    ASSERT_EQ(set.size(), 2u);
    EXPECT_EQ(set.pairs[0], (WordPair{"man", "woman"}));
    EXPECT_EQ(set.pairs[1], (WordPair{"he", "she"}));
    EXPECT_EQ(set.name, "gender");
}

TEST(PairSet, ParsesJsonArray) {
    const auto set = parse_pair_set(R"([["Warm", "cold"], ["kind", "cruel"]])", "warmth");
    ASSERT_EQ(set.size(), 2u);
    EXPECT_EQ(set.pairs[0], (WordPair{"warm", "cold"}));
}

TEST(PairSet, RejectsMalformedInput) {
    EXPECT_THROW(parse_pair_set("man woman\n", "x"), DataError);
    EXPECT_THROW(parse_pair_set("a\tb\tc\n", "x"), DataError);
    EXPECT_THROW(parse_pair_set("# only comments\n", "x"), DataError);
    EXPECT_THROW(parse_pair_set("", "x"), DataError);
    EXPECT_THROW(parse_pair_set("he\tHe\n", "x"), DataError);
    EXPECT_THROW(parse_pair_set(R"([["a"]])", "x"), DataError);
    EXPECT_THROW(parse_pair_set(R"([["a", 3]])", "x"), DataError);
    EXPECT_THROW(parse_pair_set("[", "x"), DataError);
}

TEST(PairSet, TokensInFirstAppearanceOrder) {
    const auto set = parse_pair_set("his\ther\nhim\ther\n", "g");
    EXPECT_EQ(set.tokens(), (std::vector<std::string>{"his", "her", "him"}));
}

TEST(ShippedPairLists, HaveExpectedSizesAndNoDuplicates) {
    const std::map<std::string, std::size_t> expected{
        {"gender", 22}, {"race", 13}, {"age", 8}, {"warmth", 15}, {"competence", 15}};
    for (const auto& [name, count] : expected) {
        const auto set = load_pair_set(kData / (name + ".tsv"), name);
        EXPECT_EQ(set.size(), count) << name;
        for (std::size_t i = 0; i < set.size(); ++i)
            for (std::size_t j = i + 1; j < set.size(); ++j) EXPECT_NE(set.pairs[i], set.pairs[j]) << name;
    }
    const auto gender = load_pair_set(kData / "gender.tsv", "gender");
    EXPECT_EQ(gender.pairs.front(), (WordPair{"nephews", "nieces"}));
    const auto warmth = load_pair_set(kData / "warmth.tsv", "warmth");
    EXPECT_EQ(warmth.pairs.front(), (WordPair{"pleasant", "unpleasant"}));
}

TEST(FilterToVocabulary, ReportsDroppedPairs) {
    const auto emb = random_embedding(4, 3, 1);
    const WordPairSet set{"s", {{"w0", "w1"}, {"w2", "missing"}, {"w3", "w2"}}};
    const auto f = filter_to_vocabulary(set, emb);
    EXPECT_EQ(f.kept.size(), 2u);
    ASSERT_EQ(f.dropped.size(), 1u);
    EXPECT_EQ(f.dropped[0].minus, "missing");
    EXPECT_THROW(filter_to_vocabulary(WordPairSet{"s", {{"x", "y"}}}, emb), DataError);
}

TEST(SamplePairs, DeterministicDistinctAndSubset) {
    const auto set = numbered_pairs(22);
    const auto a = sample_pairs(set, 8, 42);
    const auto b = sample_pairs(set, 8, 42);
    EXPECT_EQ(a.pairs, b.pairs);
    ASSERT_EQ(a.size(), 8u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NE(std::find(set.pairs.begin(), set.pairs.end(), a.pairs[i]), set.pairs.end());
        for (std::size_t j = i + 1; j < a.size(); ++j) EXPECT_NE(a.pairs[i], a.pairs[j]);
    }
    EXPECT_NE(sample_pairs(set, 8, 43).pairs, a.pairs);
}

TEST(SamplePairs, FrozenSampleForSeedZero) {
    // Pins the cross-platform sampling stream.
    std::vector<std::string> got;
    for (const auto& p : sample_pairs(numbered_pairs(22), 8, 0).pairs) got.push_back(p.plus);
    EXPECT_EQ(got, (std::vector<std::string>{"w16", "w36", "w30", "w34", "w28", "w22", "w42", "w32"}));
}

TEST(SamplePairs, InclusionFrequencyIsUniform) {
    const auto set = numbered_pairs(22);
    std::map<std::string, int> hits;
    constexpr int kTrials = 20000;
    for (int t = 0; t < kTrials; ++t) {
        for (const auto& p : sample_pairs(set, 8, static_cast<std::uint64_t>(t)).pairs) ++hits[p.plus];
    }
    ASSERT_EQ(hits.size(), 22u);
    const double expected = 8.0 / 22.0;
    for (const auto& [token, count] : hits) {
        EXPECT_NEAR(static_cast<double>(count) / kTrials, expected, 0.015) << token;
    }
}

TEST(SamplePairs, WholeSetIsAPermutation) {
    const auto set = numbered_pairs(10);
    auto s = sample_pairs(set, 10, 5).pairs;
    auto sorted_set = set.pairs;
    auto key = [](const WordPair& a, const WordPair& b) { return a.plus < b.plus; };
    std::sort(s.begin(), s.end(), key);
    std::sort(sorted_set.begin(), sorted_set.end(), key);
    EXPECT_EQ(s, sorted_set);
}

TEST(SamplePairs, RejectsBadSizes) {
    EXPECT_THROW(sample_pairs(numbered_pairs(5), 6, 0), UsageError);
    EXPECT_THROW(sample_pairs(numbered_pairs(5), 0, 0), UsageError);
}

TEST(BiasDirection, MatchesEigenOracleOnRandomInstances) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t dim = 5 + seed % 20;
        const std::size_t n = 2 + seed % 9;
        const auto emb = random_embedding(2 * n, dim, 1000 + seed);
        const auto set = numbered_pairs(n);
        const auto dir = compute_bias_direction(emb, set);
        const Eigen::MatrixXd diffs = difference_matrix(emb, set);
        Eigen::VectorXd expected = oracle::top_eigenvector_of_gram(diffs);
        if (expected.dot(diffs.row(0).transpose()) < 0) expected = -expected;
        EXPECT_NEAR(dir.direction.norm(), 1.0, 1e-12);
        EXPECT_LE((dir.direction - expected).cwiseAbs().maxCoeff(), 1e-8) << "seed " << seed;
        EXPECT_GE(dir.direction.dot(diffs.row(0).transpose()), 0.0);
    }
}

TEST(BiasDirection, RankOneDifferencesRecoverTheAxis) {
    Matrix m = Matrix::Zero(4, 3);
    m.row(0) << 2, 1, 0;
    m.row(1) << 0, 1, 0;
    m.row(2) << 1, 5, 5;
    m.row(3) << 4, 5, 5;
    const EmbeddingMatrix emb({"a", "b", "c", "d"}, m);
    const auto dir = compute_bias_direction(emb, WordPairSet{"s", {{"a", "b"}, {"c", "d"}}});
    EXPECT_NEAR(std::abs(dir.direction(0)), 1.0, 1e-12);
    EXPECT_GT(dir.direction(0), 0.0);  // sign follows the first pair
    EXPECT_NEAR(dir.anchor_mean(1), 3.0, 1e-12);
    EXPECT_NEAR(dir.anchor_mean(0), 7.0 / 4.0, 1e-12);
}

TEST(BiasDirection, ScaleInvariantAndSignFollowsFirstPair) {
    const auto emb = random_embedding(12, 9, 77);
    const auto set = numbered_pairs(6);
    const auto base = compute_bias_direction(emb, set);
    const auto scaled = compute_bias_direction(emb.with_vectors(emb.vectors() * 3.5), set);
    EXPECT_LE((base.direction - scaled.direction).cwiseAbs().maxCoeff(), 1e-10);

    WordPairSet flipped = set;
    for (auto& p : flipped.pairs) std::swap(p.plus, p.minus);
    const auto neg = compute_bias_direction(emb, flipped);
    EXPECT_LE((base.direction + neg.direction).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BiasDirection, ErrorsOnDegenerateInput) {
    Matrix m = Matrix::Ones(2, 3);
    const EmbeddingMatrix same({"a", "b"}, m);
    EXPECT_THROW(compute_bias_direction(same, WordPairSet{"s", {{"a", "b"}}}), NumericError);
    EXPECT_THROW(compute_bias_direction(same, WordPairSet{"s", {{"a", "zz"}}}), DataError);
    EXPECT_THROW(compute_bias_direction(same, WordPairSet{"s", {{"a", "b"}}}, 2), UsageError);
}
