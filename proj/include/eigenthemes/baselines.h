#ifndef EIGENTHEMES_BASELINES_H_
#define EIGENTHEMES_BASELINES_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eigenthemes/dataset.h"
#include "eigenthemes/eigenthemes.h"
#include "eigenthemes/embeddings.h"
#include "eigenthemes/kg_catalog.h"
#include "eigenthemes/weighting.h"

namespace eigenthemes {

// Lowercase with runs of whitespace collapsed to one space and trimmed.
std::string NormalizeName(std::string_view text);

// Exact-name lookup: the highest-degree entity whose canonical name (and
// optionally an alias) equals the mention after normalization.
class NameMatcher {
 public:
  explicit NameMatcher(const EntityCatalog& catalog, bool include_aliases = false);

  // Ranking holds all exact matches scored by degree; no match, no
  // prediction.
  MentionLink Match(std::string_view mention) const;

 private:
  const EntityCatalog* catalog_;
  std::unordered_map<std::string, std::vector<std::string>> by_name_;
};

// The candidate list as is, scored by degree.
MentionLink DegreeBaseline(const CandidateList& list,
                           const EntityCatalog& catalog);

// Cosine between each candidate and the weighted mean of the document rows.
// A zero centroid scores everything 0 and falls back to degree order.
LinkResult AvgBaseline(const DocumentTask& doc, const EmbeddingStore& store,
                       const WeightScheme& weighting,
                       const TextResources* text = nullptr);

// Ranks by cosine between description vectors and the mean word vector of
// the context. No usable context falls back to degree order.
MentionLink LocalContextBaseline(const DocumentTask& doc, size_t mention_index,
                                 const TextResources& text);
MentionLink GlobalContextBaseline(const DocumentTask& doc, size_t mention_index,
                                  const TextResources& text);

}  // namespace eigenthemes

#endif  // EIGENTHEMES_BASELINES_H_
