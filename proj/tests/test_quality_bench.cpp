#include <gtest/gtest.h>

#include "scmdebias/errors.hpp"
#include "scmdebias/quality_bench.hpp"
#include "test_support.hpp"

using namespace scmdebias;
using testing_support::TempDir;
using testing_support::write_text;

namespace {

// Twelve random words plus, for each question, an answer row placed exactly
// on the normalized 3CosAdd query.
struct ForcedAnalogies {
    EmbeddingMatrix emb;
    AnalogyDataset ds;
};

ForcedAnalogies forced_analogies() {
    const Matrix base = testing_support::random_matrix(12, 8, 90);
    const Matrix unit = unit_rows(base);
    std::vector<std::string> tokens = testing_support::numbered_tokens(12);
    std::vector<Vector> answers;
    AnalogyDataset ds{"forced", {}};
    for (int q = 0; q < 4; ++q) {
        const int a = 3 * q, b = 3 * q + 1, c = 3 * q + 2;
        const Vector v = (unit.row(b) - unit.row(a) + unit.row(c)).transpose();
        answers.push_back(v.normalized() * 2.0);
        tokens.push_back("ans" + std::to_string(q));
        ds.questions.push_back({tokens[a], tokens[b], tokens[c], tokens.back(), "s"});
    }
    Matrix m(16, 8);
    m.topRows(12) = base;
    for (int q = 0; q < 4; ++q) m.row(12 + q) = answers[q].transpose();
    return {EmbeddingMatrix(tokens, m), ds};
}

}  // namespace

TEST(Analogy, ForcedArgmaxGivesPerfectAccuracy) {
    const auto f = forced_analogies();
    for (auto method : {AnalogyMethod::CosAdd}) {
        const auto r = analogy_accuracy(f.emb, f.ds, method);
        EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
        EXPECT_EQ(r.correct, 4u);
        EXPECT_EQ(r.attempted, 4u);
        EXPECT_EQ(r.skipped, 0u);
    }
}

TEST(Analogy, MatchesBruteForceSearch) {
    const auto emb = testing_support::random_embedding(70, 5, 91);
    const auto unit = unit_normalized(emb);
    AnalogyDataset ds{"rand", {}};
    for (int q = 0; q < 40; ++q) {
        ds.questions.push_back({"w" + std::to_string(q), "w" + std::to_string(q + 1),
                                "w" + std::to_string(q + 2), "w" + std::to_string(q + 3), ""});
    }
    std::size_t correct = 0;
    for (const auto& q : ds.questions) {
        const Vector query = unit.vector_of(q.b) - unit.vector_of(q.a) + unit.vector_of(q.c);
        if (nearest_neighbor(unit, query, {q.a, q.b, q.c}, 1)[0].token == q.expected) ++correct;
    }
    const auto r = analogy_accuracy(emb, ds);
    EXPECT_EQ(r.correct, correct);
    EXPECT_GE(r.accuracy, 0.0);
    EXPECT_LE(r.accuracy, 1.0);
}

TEST(Analogy, SkipAccountingAndRescaleInvariance) {
    auto f = forced_analogies();
    f.ds.questions.push_back({"w0", "w1", "w2", "missing", "s"});
    f.ds.questions.push_back({"oov", "w1", "w2", "w3", "s"});
    const auto r = analogy_accuracy(f.emb, f.ds);
    EXPECT_EQ(r.attempted + r.skipped, f.ds.questions.size());
    EXPECT_EQ(r.skipped, 2u);
    const auto scaled = analogy_accuracy(f.emb.with_vectors(f.emb.vectors() * 0.01), f.ds);
    EXPECT_EQ(scaled.correct, r.correct);
    const auto mul = analogy_accuracy(f.emb, f.ds, AnalogyMethod::CosMul);
    const auto mul_scaled = analogy_accuracy(f.emb.with_vectors(f.emb.vectors() * 7.0), f.ds, AnalogyMethod::CosMul);
    EXPECT_EQ(mul.correct, mul_scaled.correct);
}

TEST(Analogy, AllOovIsAnError) {
    const auto f = forced_analogies();
    const AnalogyDataset ds{"oov", {{"x", "y", "z", "q", ""}}};
    EXPECT_THROW(analogy_accuracy(f.emb, ds), DataError);
}

TEST(Analogy, MethodNames) {
    EXPECT_EQ(parse_analogy_method("3CosAdd"), AnalogyMethod::CosAdd);
    EXPECT_EQ(parse_analogy_method("3cosmul"), AnalogyMethod::CosMul);
    EXPECT_THROW(parse_analogy_method("pairdirection"), UsageError);
}

TEST(AnalogyFile, ParsesSectionsAndLowercases) {
    TempDir dir;
    write_text(dir / "q.txt", ": capital-common-countries\nAthens Greece Baghdad Iraq\n: family\nboy girl brother sister\n");
    const auto ds = load_analogy_dataset(dir / "q.txt", "google");
    ASSERT_EQ(ds.questions.size(), 2u);
    EXPECT_EQ(ds.questions[0].a, "athens");
    EXPECT_EQ(ds.questions[0].expected, "iraq");
    EXPECT_EQ(ds.questions[0].section, "capital-common-countries");
    EXPECT_EQ(ds.questions[1].section, "family");

    write_text(dir / "msr.txt", "good better bad worse\n");
    EXPECT_EQ(load_analogy_dataset(dir / "msr.txt", "msr").questions.size(), 1u);

    write_text(dir / "bad.txt", "a b c\n");
    EXPECT_THROW(load_analogy_dataset(dir / "bad.txt", "x"), DataError);
    write_text(dir / "rep.txt", "a b a c\n");
    EXPECT_THROW(load_analogy_dataset(dir / "rep.txt", "x"), DataError);
    EXPECT_THROW(load_analogy_dataset(dir / "absent.txt", "x"), DataError);
}

TEST(SimilarityFile, AcceptsTabCommaAndHeader) {
    TempDir dir;
    write_text(dir / "ws.tsv", "Word 1\tWord 2\tHuman (mean)\nLove\tsex\t6.77\ntiger\tcat\t7.35\n");
    const auto ws = load_similarity_dataset(dir / "ws.tsv", "ws353");
    ASSERT_EQ(ws.items.size(), 2u);
    EXPECT_EQ(ws.items[0].w1, "love");
    EXPECT_DOUBLE_EQ(ws.items[1].human_score, 7.35);

    write_text(dir / "ws.csv", "w1,w2,score\ncord,smile,0.02\n");
    EXPECT_EQ(load_similarity_dataset(dir / "ws.csv", "x").items.size(), 1u);
    write_text(dir / "rg.txt", "# rg65\ncord smile 0.02\nrooster voyage 0.04\n");
    EXPECT_EQ(load_similarity_dataset(dir / "rg.txt", "rg65").items.size(), 2u);
    write_text(dir / "bad.txt", "a\tb\t1\nc\td\tnope\n");
    EXPECT_THROW(load_similarity_dataset(dir / "bad.txt", "x"), DataError);
}

TEST(Similarity, ExactCosinesAndInversion) {
    const auto emb = testing_support::random_embedding(20, 6, 92);
    SimilarityDataset same{"s", {}};
    SimilarityDataset inverted{"s", {}};
    for (int i = 0; i < 10; ++i) {
        const std::string a = "w" + std::to_string(i), b = "w" + std::to_string(i + 10);
        const double c = cosine(emb.vector_of(a), emb.vector_of(b));
        same.items.push_back({a, b, c});
        inverted.items.push_back({a, b, -c});
    }
    EXPECT_DOUBLE_EQ(similarity_score(emb, same).correlation, 1.0);
    EXPECT_DOUBLE_EQ(similarity_score(emb, inverted).correlation, -1.0);
    EXPECT_DOUBLE_EQ(similarity_score(emb.with_vectors(emb.vectors() * 3.0), same).correlation, 1.0);

    const SimilarityDataset two{"s", {{"w0", "w1", 1.0}, {"w2", "w3", 2.0}}};
    const double c01 = cosine(emb.vector_of("w0"), emb.vector_of("w1"));
    const double c23 = cosine(emb.vector_of("w2"), emb.vector_of("w3"));
    EXPECT_DOUBLE_EQ(similarity_score(emb, two).correlation, c01 < c23 ? 1.0 : -1.0);
}

TEST(Similarity, SkipsOovAndNeedsTwoItems) {
    const auto emb = testing_support::random_embedding(10, 4, 93);
    const SimilarityDataset ds{"s", {{"w0", "w1", 1}, {"w2", "zz", 2}, {"w3", "w4", 3}, {"w5", "w6", 0}}};
    const auto r = similarity_score(emb, ds);
    EXPECT_EQ(r.used, 3u);
    EXPECT_EQ(r.skipped, 1u);
    EXPECT_THROW(similarity_score(emb, SimilarityDataset{"s", {{"w0", "w1", 1}, {"a", "b", 2}}}), DataError);
}
