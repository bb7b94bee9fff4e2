#include "eigenthemes/eigenthemes.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "eigenthemes/errors.h"

namespace eigenthemes {

DocumentMatrix BuildDocumentMatrix(const DocumentTask& doc,
                                   const EmbeddingStore& store,
                                   const WeightScheme& weighting,
                                   const TextResources* text) {
  DocumentMatrix dm;
  std::unordered_map<std::string, size_t> row_of;
  for (size_t m = 0; m < doc.mentions.size(); ++m) {
    const CandidateList& list = doc.mentions[m].candidates;
    if (list.candidates.empty()) continue;
    const std::vector<double> weights =
        CandidateWeights(doc, m, weighting, text);
    for (size_t i = 0; i < list.candidates.size(); ++i) {
      const std::string& qid = list.candidates[i];
      auto it = row_of.find(qid);
      if (it != row_of.end()) {
        dm.weights[it->second] = std::max(dm.weights[it->second], weights[i]);
        continue;
      }
      auto vec = store.Find(qid);
      if (vec.empty()) continue;
      row_of.emplace(qid, dm.entity_ids.size());
      dm.entity_ids.push_back(qid);
      dm.matrix.AppendRow(UnitNormalize(vec));
      dm.weights.push_back(weights[i]);
    }
  }
  if (dm.entity_ids.empty()) {
    throw Error(ErrorKind::kEmptyDocument,
                "document " + doc.doc_id + " has no embeddable candidates");
  }
  return dm;
}

Subspace LearnSubspace(const DocumentMatrix& dm, size_t k) {
  return TruncatedSvd(dm.matrix, dm.weights, k);
}

double ScoreCandidate(const Subspace& subspace, std::span<const double> e,
                      bool scale_by_strength) {
  if (e.size() != subspace.dim()) {
    throw Error(ErrorKind::kDimension,
                "candidate vector has length " + std::to_string(e.size()) +
                    ", subspace dimension is " +
                    std::to_string(subspace.dim()));
  }
  double sum = 0.0;
  for (size_t c = 0; c < subspace.rank(); ++c) {
    double proj = 0.0;
    for (size_t r = 0; r < e.size(); ++r) proj += e[r] * subspace.basis(r, c);
    if (scale_by_strength) proj *= subspace.strengths[c];
    sum += proj * proj;
  }
  return std::sqrt(sum);
}

MentionLink RankByScore(const CandidateList& list,
                        const std::vector<double>& scores,
                        const std::vector<bool>& degenerate) {
  const size_t n = list.candidates.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto is_degenerate = [&](size_t i) {
    return !degenerate.empty() && degenerate[i];
  };
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return !is_degenerate(a) && is_degenerate(b);
  });

  MentionLink link;
  link.ranking.reserve(n);
  for (size_t i : order) link.ranking.push_back({list.candidates[i], scores[i]});
  if (!link.ranking.empty()) link.predicted = link.ranking.front().qid;
  link.fallback =
      n > 0 && std::all_of(scores.begin(), scores.end(), [](double s) {
        return s == -std::numeric_limits<double>::infinity();
      });
  return link;
}

LinkResult LinkDocument(const DocumentTask& doc, const EmbeddingStore& store,
                        const EigenOptions& options,
                        const TextResources* text) {
  constexpr double kMissing = -std::numeric_limits<double>::infinity();
  LinkResult result;
  result.mentions.reserve(doc.mentions.size());

  std::optional<Subspace> subspace;
  try {
    subspace = LearnSubspace(
        BuildDocumentMatrix(doc, store, options.weighting, text), options.k);
    result.effective_k = subspace->rank();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kEmptyDocument) throw;
  }

  for (const MentionTask& mention : doc.mentions) {
    const CandidateList& list = mention.candidates;
    std::vector<double> scores(list.candidates.size(), kMissing);
    std::vector<bool> degenerate(list.candidates.size(), false);
    if (subspace) {
      for (size_t i = 0; i < list.candidates.size(); ++i) {
        auto vec = store.Find(list.candidates[i]);
        if (vec.empty()) continue;
        const std::vector<double> unit = UnitNormalize(vec);
        degenerate[i] = L2Norm(unit) <= kZeroNormEpsilon;
        scores[i] = ScoreCandidate(*subspace, unit, options.scale_by_strength);
      }
    }
    result.mentions.push_back(RankByScore(list, scores, degenerate));
  }
  return result;
}

}  // namespace eigenthemes
