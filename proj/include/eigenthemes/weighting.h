#ifndef EIGENTHEMES_WEIGHTING_H_
#define EIGENTHEMES_WEIGHTING_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eigenthemes/candidate_index.h"
#include "eigenthemes/dataset.h"
#include "eigenthemes/embeddings.h"

namespace eigenthemes {

enum class WeightKind { kNone, kDegreeRr, kLocalCtxtRr, kGlobalCtxtRr };

WeightKind ParseWeightKind(std::string_view name);
std::string_view WeightKindName(WeightKind kind);

struct WeightScheme {
  WeightKind kind = WeightKind::kDegreeRr;
  double delta = 1.0;  // must be > 0; ignored for kNone
};

// rank^(-delta). Throws kDomain for rank < 1 or delta <= 0.
double ReciprocalRankWeight(size_t rank, double delta);

// qid -> 1-based rank.
using Ranking = std::unordered_map<std::string, size_t>;

// Position in the degree-sorted candidate list, starting at 1.
Ranking DegreeRanking(const CandidateList& candidates);

enum class ContextMode { kLocal, kGlobal };

inline constexpr size_t kDefaultContextWindow = 5;

// Word vectors plus the entity description vectors derived from them.
struct TextResources {
  const EmbeddingStore* words = nullptr;
  const EmbeddingStore* descriptions = nullptr;
  size_t window = kDefaultContextWindow;
  // Prefer a document's own noun list over the stopword approximation.
  bool use_noun_lists = true;
};

// Descriptions JSONL: {"qid": str, "description": str}.
std::vector<std::pair<std::string, std::string>> LoadDescriptions(
    const std::filesystem::path& path);

// Mean word vector of the description tokens; entities whose description has
// no known word are left out.
EmbeddingStore BuildDescriptionEmbeddings(
    const std::vector<std::pair<std::string, std::string>>& descriptions,
    const EmbeddingStore& words);

// Mean of the known word vectors among `tokens`; nullopt if none is known.
std::optional<std::vector<double>> MeanWordVector(
    const std::vector<std::string>& tokens, const EmbeddingStore& words);

bool IsStopword(std::string_view token);

// Tokens within `window` positions left and right of the mention span.
// Mentions without a span have no local context.
std::vector<std::string> LocalContextTokens(const DocumentTask& doc,
                                            size_t mention_index,
                                            size_t window);

// The document's noun list when present and allowed, otherwise every
// non-stopword token.
std::vector<std::string> GlobalContextTokens(const DocumentTask& doc,
                                             bool use_noun_lists);

// Cosine between each candidate's description vector and the context
// vector; nullopt for candidates without a description. Empty result when
// the context has no known words.
std::vector<std::optional<double>> ContextSimilarities(
    const DocumentTask& doc, size_t mention_index, const TextResources& text,
    ContextMode mode);

// Candidate indices ordered by descending similarity. Ties and candidates
// without descriptions keep degree order, the latter after all others. With
// no usable context the result is plain degree order.
std::vector<size_t> OrderBySimilarity(
    const std::vector<std::optional<double>>& similarities,
    size_t candidate_count);

Ranking ContextRanking(const DocumentTask& doc, size_t mention_index,
                       const TextResources& text, ContextMode mode);

// Reciprocal-rank weight per candidate of one mention under `scheme`.
std::vector<double> CandidateWeights(const DocumentTask& doc,
                                     size_t mention_index,
                                     const WeightScheme& scheme,
                                     const TextResources* text);

}  // namespace eigenthemes

#endif  // EIGENTHEMES_WEIGHTING_H_
