#include "eigenthemes/evaluation.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "eigenthemes/errors.h"
#include "eigenthemes/seeding.h"

namespace eigenthemes {
namespace {

using nlohmann::json;

bool Selected(const MentionOutcome& o, BucketSelector selector) {
  switch (selector) {
    case BucketSelector::kEasy: return o.bucket == Bucket::kEasy;
    case BucketSelector::kHard: return o.bucket == Bucket::kHard;
    case BucketSelector::kOverall: return true;
  }
  return false;
}

std::string FormatDouble(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void WriteField(std::ostream& out, std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

// Splits one CSV record; quoted fields may span lines.
bool ReadRecord(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (in_quotes) throw Error(ErrorKind::kParse, "unterminated quoted field");
  if (any) fields.push_back(std::move(field));
  return any;
}

constexpr std::string_view kCsvHeader =
    "doc_id,mention_idx,surface,gold_qid,predicted_qid,bucket,rank_of_gold,"
    "score";

template <typename T>
T ParseField(const std::string& s, size_t line_no) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::kParse, "record " + std::to_string(line_no) +
                                       ": bad number '" + s + "'");
  }
  return value;
}

double Quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string_view BucketName(Bucket bucket) {
  switch (bucket) {
    case Bucket::kEasy: return "easy";
    case Bucket::kHard: return "hard";
    case Bucket::kNotFound: return "not_found";
  }
  return "not_found";
}

Bucket ParseBucket(std::string_view name) {
  if (name == "easy") return Bucket::kEasy;
  if (name == "hard") return Bucket::kHard;
  if (name == "not_found") return Bucket::kNotFound;
  throw Error(ErrorKind::kParse, "unknown bucket '" + std::string(name) + "'");
}

Bucket Classify(const CandidateList& candidates, const std::string& gold_qid) {
  const auto& c = candidates.candidates;
  auto it = std::find(c.begin(), c.end(), gold_qid);
  if (it == c.end()) return Bucket::kNotFound;
  return it == c.begin() ? Bucket::kEasy : Bucket::kHard;
}

OutcomeSet EvaluateDocuments(const std::vector<DocumentTask>& docs,
                             const std::vector<LinkResult>& results) {
  if (docs.size() != results.size()) {
    throw Error(ErrorKind::kDimension, "one link result per document expected");
  }
  OutcomeSet set;
  for (size_t d = 0; d < docs.size(); ++d) {
    const DocumentTask& doc = docs[d];
    if (results[d].mentions.size() != doc.mentions.size()) {
      throw Error(ErrorKind::kDimension,
                  "link result of " + doc.doc_id + " has the wrong length");
    }
    for (size_t m = 0; m < doc.mentions.size(); ++m) {
      const MentionTask& mention = doc.mentions[m];
      if (!mention.gold_qid) {
        ++set.excluded_unannotated;
        continue;
      }
      const MentionLink& link = results[d].mentions[m];
      MentionOutcome o;
      o.doc_id = doc.doc_id;
      o.mention_index = m;
      o.surface = mention.surface;
      o.gold_qid = *mention.gold_qid;
      o.bucket = Classify(mention.candidates, o.gold_qid);
      o.predicted_qid = link.predicted;
      for (size_t r = 0; r < link.ranking.size(); ++r) {
        const RankedCandidate& rc = link.ranking[r];
        if (link.predicted && rc.qid == *link.predicted &&
            std::isfinite(rc.score)) {
          o.predicted_score = rc.score;
        }
        if (rc.qid == o.gold_qid) {
          if (o.bucket != Bucket::kNotFound) o.rank_of_gold = r + 1;
          if (std::isfinite(rc.score)) o.gold_score = rc.score;
        } else {
          o.other_scores.push_back(rc.score);
        }
      }
      set.outcomes.push_back(std::move(o));
    }
  }
  return set;
}

double PrecisionAtOne(std::span<const MentionOutcome> outcomes,
                      BucketSelector selector) {
  size_t total = 0;
  size_t correct = 0;
  for (const MentionOutcome& o : outcomes) {
    if (!Selected(o, selector)) continue;
    ++total;
    if (o.bucket != Bucket::kNotFound && o.correct()) ++correct;
  }
  return total == 0 ? 0.0
                    : static_cast<double>(correct) / static_cast<double>(total);
}

double MeanReciprocalRank(std::span<const MentionOutcome> outcomes,
                          BucketSelector selector) {
  size_t total = 0;
  double sum = 0.0;
  for (const MentionOutcome& o : outcomes) {
    if (!Selected(o, selector)) continue;
    ++total;
    if (o.bucket != Bucket::kNotFound && o.rank_of_gold) {
      sum += 1.0 / static_cast<double>(*o.rank_of_gold);
    }
  }
  return total == 0 ? 0.0 : sum / static_cast<double>(total);
}

MetricsReport Summarize(const OutcomeSet& set) {
  MetricsReport report;
  auto fill = [&](BucketMetrics& m, BucketSelector selector) {
    m.count = static_cast<size_t>(std::count_if(
        set.outcomes.begin(), set.outcomes.end(),
        [&](const MentionOutcome& o) { return Selected(o, selector); }));
    m.precision_at_1 = PrecisionAtOne(set.outcomes, selector);
    m.mrr = MeanReciprocalRank(set.outcomes, selector);
  };
  fill(report.easy, BucketSelector::kEasy);
  fill(report.hard, BucketSelector::kHard);
  fill(report.overall, BucketSelector::kOverall);
  report.not_found = report.overall.count - report.easy.count - report.hard.count;
  report.oracle_recall =
      report.overall.count == 0
          ? 0.0
          : static_cast<double>(report.easy.count + report.hard.count) /
                static_cast<double>(report.overall.count);
  report.excluded_unannotated = set.excluded_unannotated;
  return report;
}

json MetricsToJson(const MetricsReport& report) {
  auto bucket = [](const BucketMetrics& m) {
    return json{{"count", m.count},
                {"precision_at_1", m.precision_at_1},
                {"mrr", m.mrr}};
  };
  return json{{"easy", bucket(report.easy)},
              {"hard", bucket(report.hard)},
              {"overall", bucket(report.overall)},
              {"not_found", report.not_found},
              {"oracle_recall", report.oracle_recall},
              {"excluded_unannotated", report.excluded_unannotated}};
}

ScoreGapResult ScoreGap(std::span<const MentionOutcome> outcomes,
                        uint64_t seed, size_t resamples) {
  std::vector<double> gaps;
  for (const MentionOutcome& o : outcomes) {
    if (o.bucket == Bucket::kNotFound || !o.gold_score || o.other_scores.empty()) {
      continue;
    }
    if (!std::all_of(o.other_scores.begin(), o.other_scores.end(),
                     [](double s) { return std::isfinite(s); })) {
      continue;
    }
    const double n = std::accumulate(o.other_scores.begin(),
                                     o.other_scores.end(), 0.0) /
                     static_cast<double>(o.other_scores.size());
    if (!(n > 0.0)) continue;
    gaps.push_back((*o.gold_score - n) / n);
  }
  ScoreGapResult result;
  result.mentions = gaps.size();
  if (gaps.empty()) return result;
  result.mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) /
                static_cast<double>(gaps.size());
  if (resamples == 0) {
    result.ci_low = result.ci_high = result.mean;
    return result;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, gaps.size() - 1);
  std::vector<double> means(resamples);
  for (double& mean : means) {
    double sum = 0.0;
    for (size_t i = 0; i < gaps.size(); ++i) sum += gaps[pick(rng)];
    mean = sum / static_cast<double>(gaps.size());
  }
  std::sort(means.begin(), means.end());
  result.ci_low = Quantile(means, 0.025);
  result.ci_high = Quantile(means, 0.975);
  return result;
}

void WritePredictionsCsv(std::span<const MentionOutcome> outcomes,
                         std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const MentionOutcome& o : outcomes) {
    WriteField(out, o.doc_id);
    out << ',' << o.mention_index << ',';
    WriteField(out, o.surface);
    out << ',';
    WriteField(out, o.gold_qid);
    out << ',';
    if (o.predicted_qid) WriteField(out, *o.predicted_qid);
    out << ',' << BucketName(o.bucket) << ',';
    if (o.rank_of_gold) out << *o.rank_of_gold;
    out << ',';
    if (o.predicted_score) out << FormatDouble(*o.predicted_score);
    out << '\n';
  }
}

std::vector<MentionOutcome> ReadPredictionsCsv(std::istream& in) {
  std::vector<std::string> fields;
  if (!ReadRecord(in, fields)) {
    throw Error(ErrorKind::kFormat, "predictions file is empty");
  }
  std::string header;
  for (size_t i = 0; i < fields.size(); ++i) {
    header += (i ? "," : "") + fields[i];
  }
  if (header != kCsvHeader) {
    throw Error(ErrorKind::kFormat, "unexpected predictions header");
  }
  std::vector<MentionOutcome> outcomes;
  size_t record = 1;
  while (ReadRecord(in, fields)) {
    ++record;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 8) {
      throw Error(ErrorKind::kFormat,
                  "record " + std::to_string(record) + ": expected 8 fields");
    }
    MentionOutcome o;
    o.doc_id = fields[0];
    o.mention_index = ParseField<size_t>(fields[1], record);
    o.surface = fields[2];
    o.gold_qid = fields[3];
    if (!fields[4].empty()) o.predicted_qid = fields[4];
    o.bucket = ParseBucket(fields[5]);
    if (!fields[6].empty()) o.rank_of_gold = ParseField<size_t>(fields[6], record);
    if (!fields[7].empty()) o.predicted_score = ParseField<double>(fields[7], record);
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

std::vector<MentionOutcome> ReadPredictionsCsv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return ReadPredictionsCsv(in);
}

std::vector<DocumentTask> DropMentions(
    const std::vector<DocumentTask>& docs,
    const std::vector<std::vector<bool>>& keep) {
  std::vector<DocumentTask> out;
  for (size_t d = 0; d < docs.size(); ++d) {
    DocumentTask doc = docs[d];
    doc.mentions.clear();
    for (size_t m = 0; m < docs[d].mentions.size(); ++m) {
      if (keep[d][m]) doc.mentions.push_back(docs[d].mentions[m]);
    }
    if (!doc.mentions.empty()) out.push_back(std::move(doc));
  }
  return out;
}

std::vector<MutilationPoint> Mutilation(const std::vector<DocumentTask>& docs,
                                        std::span<const double> fractions,
                                        uint64_t seed, size_t repeats,
                                        std::span<const CorpusLinker> linkers) {
  if (repeats == 0) throw Error(ErrorKind::kDomain, "repeats must be >= 1");
  std::vector<std::pair<size_t, size_t>> easy;
  for (size_t d = 0; d < docs.size(); ++d) {
    for (size_t m = 0; m < docs[d].mentions.size(); ++m) {
      const MentionTask& mention = docs[d].mentions[m];
      if (mention.gold_qid &&
          Classify(mention.candidates, *mention.gold_qid) == Bucket::kEasy) {
        easy.emplace_back(d, m);
      }
    }
  }

  auto overall_p1 = [&](const std::vector<DocumentTask>& subset,
                        const CorpusLinker& linker) {
    const OutcomeSet set = EvaluateDocuments(subset, linker(subset));
    return PrecisionAtOne(set.outcomes, BucketSelector::kOverall);
  };

  std::vector<MutilationPoint> points;
  for (size_t fi = 0; fi < fractions.size(); ++fi) {
    const double f = fractions[fi];
    if (!(f >= 0.0 && f <= 1.0)) {
      throw Error(ErrorKind::kDomain, "fractions must lie in [0, 1]");
    }
    MutilationPoint point;
    point.fraction = f;
    point.easy_total = easy.size();
    point.easy_kept = static_cast<size_t>(
        std::llround(f * static_cast<double>(easy.size())));
    point.mean_overall_p_at_1.assign(linkers.size(), 0.0);

    const bool deterministic =
        point.easy_kept == easy.size() || point.easy_kept == 0;
    const size_t draws = deterministic ? 1 : repeats;
    for (size_t r = 0; r < draws; ++r) {
      std::vector<std::vector<bool>> keep(docs.size());
      for (size_t d = 0; d < docs.size(); ++d) {
        keep[d].assign(docs[d].mentions.size(), true);
      }
      std::vector<std::pair<size_t, size_t>> order = easy;
      if (!deterministic) {
        std::mt19937_64 rng(DeriveSeed(DeriveSeed(seed, fi), r));
        std::shuffle(order.begin(), order.end(), rng);
      }
      for (size_t i = point.easy_kept; i < order.size(); ++i) {
        keep[order[i].first][order[i].second] = false;
      }
      const std::vector<DocumentTask> subset = DropMentions(docs, keep);
      for (size_t l = 0; l < linkers.size(); ++l) {
        point.mean_overall_p_at_1[l] += overall_p1(subset, linkers[l]);
      }
    }
    if (draws > 1) {
      for (double& v : point.mean_overall_p_at_1) {
        v /= static_cast<double>(draws);
      }
    }
    points.push_back(std::move(point));
  }
  return points;
}

}  // namespace eigenthemes
