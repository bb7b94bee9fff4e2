#include "eigenthemes/baselines.h"

#include <algorithm>
#include <cctype>
#include <limits>

#include "eigenthemes/errors.h"

namespace eigenthemes {
namespace {

constexpr double kMissing = -std::numeric_limits<double>::infinity();

MentionLink ContextBaseline(const DocumentTask& doc, size_t mention_index,
                            const TextResources& text, ContextMode mode) {
  const CandidateList& list = doc.mentions.at(mention_index).candidates;
  const auto sims = ContextSimilarities(doc, mention_index, text, mode);
  std::vector<double> scores(list.candidates.size(), kMissing);
  if (sims.empty()) {
    std::fill(scores.begin(), scores.end(), 0.0);
    MentionLink link = RankByScore(list, scores);
    link.fallback = !list.candidates.empty();
    return link;
  }
  for (size_t i = 0; i < scores.size(); ++i) {
    if (sims[i]) scores[i] = *sims[i];
  }
  return RankByScore(list, scores);
}

}  // namespace

std::string NormalizeName(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

NameMatcher::NameMatcher(const EntityCatalog& catalog, bool include_aliases)
    : catalog_(&catalog) {
  for (const EntityRecord& r : catalog.records()) {
    by_name_[NormalizeName(r.name)].push_back(r.qid);
    if (!include_aliases) continue;
    for (const std::string& alias : r.aliases) {
      auto& list = by_name_[NormalizeName(alias)];
      if (std::find(list.begin(), list.end(), r.qid) == list.end()) {
        list.push_back(r.qid);
      }
    }
  }
}

MentionLink NameMatcher::Match(std::string_view mention) const {
  MentionLink link;
  auto it = by_name_.find(NormalizeName(mention));
  if (it == by_name_.end()) return link;
  CandidateList matches =
      RankByDegree(mention, it->second, *catalog_, kUnlimitedCandidates);
  return DegreeBaseline(matches, *catalog_);
}

MentionLink DegreeBaseline(const CandidateList& list,
                           const EntityCatalog& catalog) {
  MentionLink link;
  for (const std::string& qid : list.candidates) {
    link.ranking.push_back(
        {qid, static_cast<double>(catalog.DegreeOf(qid))});
  }
  if (!link.ranking.empty()) link.predicted = link.ranking.front().qid;
  return link;
}

LinkResult AvgBaseline(const DocumentTask& doc, const EmbeddingStore& store,
                       const WeightScheme& weighting,
                       const TextResources* text) {
  std::vector<double> centroid;
  bool degenerate_centroid = true;
  try {
    const DocumentMatrix dm = BuildDocumentMatrix(doc, store, weighting, text);
    centroid.assign(dm.matrix.cols(), 0.0);
    double total = 0.0;
    for (size_t i = 0; i < dm.size(); ++i) {
      const auto row = dm.matrix.row(i);
      for (size_t c = 0; c < centroid.size(); ++c) {
        centroid[c] += dm.weights[i] * row[c];
      }
      total += dm.weights[i];
    }
    if (total > 0.0) {
      for (double& x : centroid) x /= total;
      degenerate_centroid = L2Norm(centroid) <= kZeroNormEpsilon;
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kEmptyDocument) throw;
  }

  LinkResult result;
  for (const MentionTask& mention : doc.mentions) {
    const CandidateList& list = mention.candidates;
    std::vector<double> scores(list.candidates.size(), kMissing);
    for (size_t i = 0; i < scores.size(); ++i) {
      auto vec = store.Find(list.candidates[i]);
      if (vec.empty()) continue;
      scores[i] = degenerate_centroid ? 0.0 : Cosine(vec, centroid);
    }
    MentionLink link = RankByScore(list, scores);
    if (degenerate_centroid && !list.candidates.empty()) link.fallback = true;
    result.mentions.push_back(std::move(link));
  }
  return result;
}

MentionLink LocalContextBaseline(const DocumentTask& doc, size_t mention_index,
                                 const TextResources& text) {
  return ContextBaseline(doc, mention_index, text, ContextMode::kLocal);
}

MentionLink GlobalContextBaseline(const DocumentTask& doc, size_t mention_index,
                                  const TextResources& text) {
  return ContextBaseline(doc, mention_index, text, ContextMode::kGlobal);
}

}  // namespace eigenthemes
