#include "eigenthemes/weighting.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>

#include "eigenthemes/errors.h"
#include "json.hpp"

namespace eigenthemes {
namespace {

// Sorted for binary search.
constexpr std::array<std::string_view, 127> kStopwords = {
    "a",       "about",   "above",   "after",   "again",   "against",
    "all",     "am",      "an",      "and",     "any",     "are",
    "as",      "at",      "be",      "because", "been",    "before",
    "being",   "below",   "between", "both",    "but",     "by",
    "can",     "could",   "did",     "do",      "does",    "doing",
    "down",    "during",  "each",    "few",     "for",     "from",
    "further", "had",     "has",     "have",    "having",  "he",
    "her",     "here",    "hers",    "herself", "him",     "himself",
    "his",     "how",     "i",       "if",      "in",      "into",
    "is",      "it",      "its",     "itself",  "just",    "me",
    "more",    "most",    "my",      "myself",  "no",      "nor",
    "not",     "now",     "of",      "off",     "on",      "once",
    "only",    "or",      "other",   "our",     "ours",    "ourselves",
    "out",     "over",    "own",     "s",       "same",    "she",
    "should",  "so",      "some",    "such",    "t",       "than",
    "that",    "the",     "their",   "theirs",  "them",    "themselves",
    "then",    "there",   "these",   "they",    "this",    "those",
    "through", "to",      "too",     "under",   "until",   "up",
    "very",    "was",     "we",      "were",    "what",    "when",
    "where",   "which",   "while",   "who",     "whom",    "why",
    "will",    "with",    "would",   "you",     "your",    "yours",
    "yourself",
};

// Doc tokens may carry case or punctuation; normalize them like names.
std::vector<std::string> NormalizeTokens(const std::vector<std::string>& raw,
                                         size_t begin, size_t end) {
  std::vector<std::string> out;
  for (size_t i = begin; i < end; ++i) {
    for (std::string& t : Tokenize(raw[i])) out.push_back(std::move(t));
  }
  return out;
}

Ranking RankingFromOrder(const CandidateList& candidates,
                         const std::vector<size_t>& order) {
  Ranking ranks;
  for (size_t pos = 0; pos < order.size(); ++pos) {
    ranks.emplace(candidates.candidates[order[pos]], pos + 1);
  }
  return ranks;
}

}  // namespace

WeightKind ParseWeightKind(std::string_view name) {
  if (name == "none") return WeightKind::kNone;
  if (name == "degree_rr") return WeightKind::kDegreeRr;
  if (name == "local_ctxt_rr") return WeightKind::kLocalCtxtRr;
  if (name == "global_ctxt_rr") return WeightKind::kGlobalCtxtRr;
  throw Error(ErrorKind::kConfig, "unknown weighting '" + std::string(name) + "'");
}

std::string_view WeightKindName(WeightKind kind) {
  switch (kind) {
    case WeightKind::kNone: return "none";
    case WeightKind::kDegreeRr: return "degree_rr";
    case WeightKind::kLocalCtxtRr: return "local_ctxt_rr";
    case WeightKind::kGlobalCtxtRr: return "global_ctxt_rr";
  }
  return "none";
}

double ReciprocalRankWeight(size_t rank, double delta) {
  if (rank < 1) throw Error(ErrorKind::kDomain, "rank must be >= 1");
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorKind::kDomain, "delta must be a positive finite number");
  }
  return std::pow(static_cast<double>(rank), -delta);
}

Ranking DegreeRanking(const CandidateList& candidates) {
  Ranking ranks;
  for (size_t i = 0; i < candidates.candidates.size(); ++i) {
    ranks.emplace(candidates.candidates[i], i + 1);
  }
  return ranks;
}

std::vector<std::pair<std::string, std::string>> LoadDescriptions(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out.emplace_back(j.at("qid").get<std::string>(),
                       j.at("description").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kParse,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::optional<std::vector<double>> MeanWordVector(
    const std::vector<std::string>& tokens, const EmbeddingStore& words) {
  std::vector<double> sum(words.dim(), 0.0);
  size_t known = 0;
  for (const std::string& t : tokens) {
    auto v = words.Find(t);
    if (v.empty()) continue;
    for (size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
    ++known;
  }
  if (known == 0) return std::nullopt;
  for (double& x : sum) x /= static_cast<double>(known);
  return sum;
}

EmbeddingStore BuildDescriptionEmbeddings(
    const std::vector<std::pair<std::string, std::string>>& descriptions,
    const EmbeddingStore& words) {
  EmbeddingStore out(words.dim());
  for (const auto& [qid, text] : descriptions) {
    if (auto mean = MeanWordVector(Tokenize(text), words)) out.Add(qid, *mean);
  }
  return out;
}

bool IsStopword(std::string_view token) {
  return std::binary_search(kStopwords.begin(), kStopwords.end(), token);
}

std::vector<std::string> LocalContextTokens(const DocumentTask& doc,
                                            size_t mention_index,
                                            size_t window) {
  const auto& span = doc.mentions.at(mention_index).span;
  if (!span) return {};
  const size_t left = span->begin >= window ? span->begin - window : 0;
  const size_t right = std::min(doc.tokens.size(), span->end + window);
  std::vector<std::string> out = NormalizeTokens(doc.tokens, left, span->begin);
  for (std::string& t : NormalizeTokens(doc.tokens, span->end, right)) {
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::string> GlobalContextTokens(const DocumentTask& doc,
                                             bool use_noun_lists) {
  if (use_noun_lists && doc.nouns) {
    return NormalizeTokens(*doc.nouns, 0, doc.nouns->size());
  }
  std::vector<std::string> out;
  for (std::string& t : NormalizeTokens(doc.tokens, 0, doc.tokens.size())) {
    if (!IsStopword(t)) out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::optional<double>> ContextSimilarities(
    const DocumentTask& doc, size_t mention_index, const TextResources& text,
    ContextMode mode) {
  if (text.words == nullptr || text.descriptions == nullptr) {
    throw Error(ErrorKind::kConfig,
                "context ranking needs word and description embeddings");
  }
  const auto tokens = mode == ContextMode::kLocal
                          ? LocalContextTokens(doc, mention_index, text.window)
                          : GlobalContextTokens(doc, text.use_noun_lists);
  const auto context = MeanWordVector(tokens, *text.words);
  if (!context) return {};
  const CandidateList& list = doc.mentions[mention_index].candidates;
  std::vector<std::optional<double>> sims(list.candidates.size());
  for (size_t i = 0; i < sims.size(); ++i) {
    auto desc = text.descriptions->Find(list.candidates[i]);
    if (!desc.empty()) sims[i] = Cosine(desc, *context);
  }
  return sims;
}

std::vector<size_t> OrderBySimilarity(
    const std::vector<std::optional<double>>& similarities,
    size_t candidate_count) {
  std::vector<size_t> order(candidate_count);
  std::iota(order.begin(), order.end(), 0);
  if (similarities.empty()) return order;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const auto& sa = similarities[a];
    const auto& sb = similarities[b];
    if (sa.has_value() != sb.has_value()) return sa.has_value();
    return sa.has_value() && *sa > *sb;
  });
  return order;
}

Ranking ContextRanking(const DocumentTask& doc, size_t mention_index,
                       const TextResources& text, ContextMode mode) {
  const CandidateList& list = doc.mentions.at(mention_index).candidates;
  auto sims = ContextSimilarities(doc, mention_index, text, mode);
  return RankingFromOrder(list, OrderBySimilarity(sims, list.candidates.size()));
}

std::vector<double> CandidateWeights(const DocumentTask& doc,
                                     size_t mention_index,
                                     const WeightScheme& scheme,
                                     const TextResources* text) {
  const CandidateList& list = doc.mentions.at(mention_index).candidates;
  std::vector<double> weights(list.candidates.size(), 1.0);
  if (scheme.kind == WeightKind::kNone) return weights;

  Ranking ranks;
  switch (scheme.kind) {
    case WeightKind::kDegreeRr:
      ranks = DegreeRanking(list);
      break;
    case WeightKind::kLocalCtxtRr:
    case WeightKind::kGlobalCtxtRr:
      if (text == nullptr) {
        throw Error(ErrorKind::kConfig,
                    "context weighting needs word and description embeddings");
      }
      ranks = ContextRanking(doc, mention_index, *text,
                             scheme.kind == WeightKind::kLocalCtxtRr
                                 ? ContextMode::kLocal
                                 : ContextMode::kGlobal);
      break;
    case WeightKind::kNone:
      break;
  }
  for (size_t i = 0; i < weights.size(); ++i) {
    weights[i] = ReciprocalRankWeight(ranks.at(list.candidates[i]), scheme.delta);
  }
  return weights;
}

}  // namespace eigenthemes
