#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "scmdebias/embedding_store.hpp"
#include "scmdebias/subspace.hpp"

namespace scmdebias {

struct ProfessionList {
    std::vector<std::string> tokens;
};

// token -> acceptable analogy answers (synonyms and plural forms). A token is
// always an acceptable alternate of itself, whether or not it has an entry.
class SynonymLexicon {
public:
    SynonymLexicon() = default;

    void add(const std::string& token, const std::string& alternate);
    bool accepts(const std::string& token, const std::string& answer) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, std::unordered_set<std::string>> entries_;
};

// One token per line; blank lines and '#' comments ignored; lowercased.
ProfessionList load_professions(const std::filesystem::path& path);
// TSV: token TAB comma-separated alternates.
SynonymLexicon load_lexicon(const std::filesystem::path& path);

struct FilteredProfessions {
    ProfessionList kept;
    std::vector<std::string> dropped;
};
FilteredProfessions filter_to_vocabulary(const ProfessionList& professions,
                                         const EmbeddingMatrix& emb);

// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Spearman rank correlation with average ranks for ties, computed as the
// Pearson correlation of the rank vectors. Throws NumericError if either
// input is constant.
double spearman(std::span<const double> x, std::span<const double> y);

// Embedding Coherence Test: Spearman correlation between the cosine
// similarities of each profession with the mean vector of the plus pole and
// with the mean vector of the minus pole.
double ect(const EmbeddingMatrix& emb, const WordPairSet& attribute,
           const ProfessionList& professions);

// Embedding Quality Test: fraction of analogies plus : minus :: p : x whose
// 3CosAdd answer x (over unit vectors, excluding only plus and minus) is an
// accepted alternate of p.
double eqt(const EmbeddingMatrix& emb, const WordPairSet& attribute,
           const ProfessionList& professions, const SynonymLexicon& lexicon);

}  // namespace scmdebias
