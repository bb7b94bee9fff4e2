#ifndef EIGENTHEMES_EVALUATION_H_
#define EIGENTHEMES_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eigenthemes/candidate_index.h"
#include "eigenthemes/dataset.h"
#include "eigenthemes/eigenthemes.h"
#include "json.hpp"

namespace eigenthemes {

// easy: gold is the top-degree candidate; hard: gold is a lower candidate;
// not_found: gold is missing from the truncated candidate list.
enum class Bucket { kEasy, kHard, kNotFound };

std::string_view BucketName(Bucket bucket);
Bucket ParseBucket(std::string_view name);

// Which mentions a metric is computed over. Overall includes not_found
// mentions as misses.
enum class BucketSelector { kEasy, kHard, kOverall };

Bucket Classify(const CandidateList& candidates, const std::string& gold_qid);

struct MentionOutcome {
  std::string doc_id;
  size_t mention_index = 0;
  std::string surface;
  std::string gold_qid;
  Bucket bucket = Bucket::kNotFound;
  std::optional<std::string> predicted_qid;
  // 1-based position of the gold entity in the method's ranking.
  std::optional<size_t> rank_of_gold;
  std::optional<double> predicted_score;
  // Only filled when the gold entity was scored.
  std::optional<double> gold_score;
  std::vector<double> other_scores;

  bool correct() const { return predicted_qid && *predicted_qid == gold_qid; }
};

struct OutcomeSet {
  std::vector<MentionOutcome> outcomes;
  // Mentions without a gold annotation; linked but not scored.
  size_t excluded_unannotated = 0;
};

OutcomeSet EvaluateDocuments(const std::vector<DocumentTask>& docs,
                             const std::vector<LinkResult>& results);

double PrecisionAtOne(std::span<const MentionOutcome> outcomes,
                      BucketSelector selector);
double MeanReciprocalRank(std::span<const MentionOutcome> outcomes,
                          BucketSelector selector);

struct BucketMetrics {
  size_t count = 0;
  double precision_at_1 = 0.0;
  double mrr = 0.0;
};

struct MetricsReport {
  BucketMetrics easy;
  BucketMetrics hard;
  BucketMetrics overall;
  size_t not_found = 0;
  double oracle_recall = 0.0;
  size_t excluded_unannotated = 0;
};

MetricsReport Summarize(const OutcomeSet& set);
nlohmann::json MetricsToJson(const MetricsReport& report);

struct ScoreGapResult {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  size_t mentions = 0;  // mentions that entered the average
};

inline constexpr size_t kBootstrapResamples = 10000;

// Relative gap (G - N) / N between the gold score and the mean non-gold
// score, averaged over mentions with a found, scored gold, at least one
// other candidate and N > 0. The interval is the percentile bootstrap 95%
// interval of the mean.
ScoreGapResult ScoreGap(std::span<const MentionOutcome> outcomes,
                        uint64_t seed,
                        size_t resamples = kBootstrapResamples);

// Predictions CSV with header
// doc_id,mention_idx,surface,gold_qid,predicted_qid,bucket,rank_of_gold,score
void WritePredictionsCsv(std::span<const MentionOutcome> outcomes,
                         std::ostream& out);
std::vector<MentionOutcome> ReadPredictionsCsv(std::istream& in);
std::vector<MentionOutcome> ReadPredictionsCsv(
    const std::filesystem::path& path);

// Produces one LinkResult per document, in order.
using CorpusLinker =
    std::function<std::vector<LinkResult>(const std::vector<DocumentTask>&)>;

struct MutilationPoint {
  double fraction = 1.0;
  size_t easy_kept = 0;
  size_t easy_total = 0;
  std::vector<double> mean_overall_p_at_1;  // one per linker
};

inline constexpr size_t kDefaultMutilationRepeats = 10;

// For each fraction f, keeps round(f * #easy) easy mentions chosen
// uniformly at random (all hard and not_found mentions stay), relinks and
// averages overall P@1 over `repeats` independent draws. A fraction that
// keeps all or none of the easy mentions is evaluated once.
std::vector<MutilationPoint> Mutilation(const std::vector<DocumentTask>& docs,
                                        std::span<const double> fractions,
                                        uint64_t seed, size_t repeats,
                                        std::span<const CorpusLinker> linkers);

// Removes mention m of document d when keep[d][m] is false; documents left
// without mentions are removed.
std::vector<DocumentTask> DropMentions(
    const std::vector<DocumentTask>& docs,
    const std::vector<std::vector<bool>>& keep);

}  // namespace eigenthemes

#endif  // EIGENTHEMES_EVALUATION_H_
