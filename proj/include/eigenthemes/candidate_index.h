#ifndef EIGENTHEMES_CANDIDATE_INDEX_H_
#define EIGENTHEMES_CANDIDATE_INDEX_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eigenthemes/kg_catalog.h"

namespace eigenthemes {

// Maximum candidates per mention used throughout the evaluation protocol.
inline constexpr size_t kDefaultMaxCandidates = 20;
inline constexpr size_t kUnlimitedCandidates =
    std::numeric_limits<size_t>::max();

// Lowercased maximal runs of alphanumeric characters. ASCII punctuation,
// ASCII whitespace and the common Unicode space/punctuation blocks separate
// tokens; other non-ASCII code points are kept as token characters.
std::vector<std::string> Tokenize(std::string_view text);

// token -> entities whose name or one of whose aliases contains the token.
// Entities are interned into a qid table sorted ascending, so posting lists
// of table positions are also sorted by qid.
class InvertedIndex {
 public:
  static constexpr int kFormatVersion = 1;

  static InvertedIndex Build(const EntityCatalog& catalog);

  std::span<const uint32_t> Postings(std::string_view token) const;
  std::vector<std::string> PostingQids(std::string_view token) const;
  const std::string& EntityAt(uint32_t id) const { return entity_ids_[id]; }

  size_t vocabulary_size() const { return postings_.size(); }
  size_t entity_count() const { return entity_ids_.size(); }

  // JSONL: one header line, then {"token": ..., "postings": [qid, ...]} per
  // token in ascending token order.
  void Save(std::ostream& out) const;
  void Save(const std::filesystem::path& path) const;
  static InvertedIndex Load(std::istream& in);
  static InvertedIndex Load(const std::filesystem::path& path);

 private:
  std::vector<std::string> entity_ids_;
  std::unordered_map<std::string, std::vector<uint32_t>> postings_;
};

struct CandidateList {
  std::string mention_surface;
  // Degree descending, qid ascending among equal degrees.
  std::vector<std::string> candidates;
  bool truncated = false;
};

// Entities for which all mention tokens occur within a single name or a
// single alias, sorted by degree and cut to `max_candidates`.
CandidateList GenerateCandidates(const InvertedIndex& index,
                                 const EntityCatalog& catalog,
                                 std::string_view mention,
                                 size_t max_candidates = kDefaultMaxCandidates);

// Sorts `qids` by degree descending then qid ascending and truncates.
CandidateList RankByDegree(std::string_view mention_surface,
                           std::vector<std::string> qids,
                           const EntityCatalog& catalog,
                           size_t max_candidates);

struct LinkingQuery {
  std::string mention;
  std::string gold_qid;
};

// Fraction of queries whose gold entity survives candidate generation.
double OracleRecall(const std::vector<LinkingQuery>& queries,
                    const InvertedIndex& index, const EntityCatalog& catalog,
                    size_t max_candidates = kDefaultMaxCandidates);

}  // namespace eigenthemes

#endif  // EIGENTHEMES_CANDIDATE_INDEX_H_
