#ifndef EIGENTHEMES_EIGENTHEMES_H_
#define EIGENTHEMES_EIGENTHEMES_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eigenthemes/candidate_index.h"
#include "eigenthemes/dataset.h"
#include "eigenthemes/embeddings.h"
#include "eigenthemes/linalg.h"
#include "eigenthemes/weighting.h"

namespace eigenthemes {

inline constexpr size_t kDefaultComponents = 10;

// Candidate space of one document: the union of all mentions' candidates
// that have an embedding, in first-seen order, one unit-norm row each.
struct DocumentMatrix {
  std::vector<std::string> entity_ids;
  Matrix matrix;
  std::vector<double> weights;

  size_t size() const { return entity_ids.size(); }
};

// An entity listed by several mentions keeps its largest weight. Throws
// kEmptyDocument when no candidate has an embedding.
DocumentMatrix BuildDocumentMatrix(const DocumentTask& doc,
                                   const EmbeddingStore& store,
                                   const WeightScheme& weighting,
                                   const TextResources* text = nullptr);

// Subspace of the weighted rows; its rank may be below `k`.
Subspace LearnSubspace(const DocumentMatrix& dm, size_t k);

// || (e^T V) * sigma ||_2, or the plain projection norm when
// `scale_by_strength` is false. `e` is expected to be unit-norm or zero.
double ScoreCandidate(const Subspace& subspace, std::span<const double> e,
                      bool scale_by_strength = true);

struct RankedCandidate {
  std::string qid;
  double score = 0.0;
};

struct MentionLink {
  std::optional<std::string> predicted;
  // Score descending; see RankByScore for tie handling.
  std::vector<RankedCandidate> ranking;
  // True when the prediction came from degree order rather than scores.
  bool fallback = false;
};

struct LinkResult {
  std::vector<MentionLink> mentions;
  size_t effective_k = 0;
};

// Orders candidates by score descending. Equal scores put non-degenerate
// candidates first, then keep degree order (list position). Candidates
// scored -inf never outrank a scored one; if every score is -inf the
// result is degree order and `fallback` is set.
MentionLink RankByScore(const CandidateList& list,
                        const std::vector<double>& scores,
                        const std::vector<bool>& degenerate = {});

struct EigenOptions {
  size_t k = kDefaultComponents;
  WeightScheme weighting;
  bool scale_by_strength = true;
};

// One subspace per document; each mention's candidates are scored against
// it independently.
LinkResult LinkDocument(const DocumentTask& doc, const EmbeddingStore& store,
                        const EigenOptions& options,
                        const TextResources* text = nullptr);

}  // namespace eigenthemes

#endif  // EIGENTHEMES_EIGENTHEMES_H_
