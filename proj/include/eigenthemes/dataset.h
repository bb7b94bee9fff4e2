#ifndef EIGENTHEMES_DATASET_H_
#define EIGENTHEMES_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eigenthemes/candidate_index.h"
#include "eigenthemes/kg_catalog.h"

namespace eigenthemes {

struct TokenSpan {
  size_t begin = 0;  // first token of the mention
  size_t end = 0;    // one past the last token

  bool operator==(const TokenSpan&) const = default;
};

struct MentionTask {
  std::string surface;
  std::optional<std::string> gold_qid;
  std::optional<TokenSpan> span;
  // Candidates given verbatim by the dataset, if any. PrepareCandidates
  // re-sorts them by degree instead of querying the index.
  std::optional<std::vector<std::string>> given_candidates;
  CandidateList candidates;
};

struct DocumentTask {
  std::string doc_id;
  std::vector<MentionTask> mentions;
  std::vector<std::string> tokens;
  // External noun list for the global context; absent means "approximate".
  std::optional<std::vector<std::string>> nouns;
};

// Dataset JSONL, one document per line:
// {"doc_id": str, "tokens": [str], "nouns": [str]?,
//  "mentions": [{"surface": str, "gold": str|null, "start": int?,
//                "end": int?, "candidates": [str]?}]}
std::vector<DocumentTask> ParseDataset(std::istream& in);
std::vector<DocumentTask> LoadDataset(const std::filesystem::path& path);
void WriteDataset(const std::vector<DocumentTask>& docs, std::ostream& out);
void WriteDataset(const std::vector<DocumentTask>& docs,
                  const std::filesystem::path& path);

// Fills every mention's candidate list: given candidates are degree-sorted
// and truncated, the rest are generated from the index.
void PrepareCandidates(std::vector<DocumentTask>& docs,
                       const InvertedIndex* index, const EntityCatalog& catalog,
                       size_t max_candidates);

}  // namespace eigenthemes

#endif  // EIGENTHEMES_DATASET_H_
