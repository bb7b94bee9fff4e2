#ifndef EIGENTHEMES_SYNTH_H_
#define EIGENTHEMES_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eigenthemes/dataset.h"
#include "eigenthemes/embeddings.h"
#include "eigenthemes/kg_catalog.h"
#include "json.hpp"

namespace eigenthemes {

struct SynthConfig {
  uint64_t seed = 17;
  size_t dim = 64;
  size_t rank = 3;  // dimension of each document's planted gold subspace
  size_t docs = 50;
  size_t mentions_per_doc = 8;
  size_t candidates_per_mention = 10;
  double noise = 0.3;          // expected norm of the noise added to gold
  double easy_fraction = 0.4;  // share of mentions whose gold is top-degree
  double not_found_fraction = 0.0;  // share whose gold is not retrievable
  // 0: gold points spread over the whole subspace; c > 0: gold points sit
  // around c mutually orthogonal directions of it (c <= rank). Cluster j
  // holds a share of each document's mentions proportional to 1/(j+1).
  size_t topic_clusters = 0;
  double cluster_spread = 0.2;
  // Distractors projected off the planted subspace, and off each other
  // while at most dim - rank of them exist in a document.
  bool orthogonal_distractors = false;
  // Per document, this many distractors come from a second planted
  // subspace of the same rank instead of the sphere.
  size_t adversarial_distractors = 0;
  // 0: fresh distractors per mention. Otherwise distractors are drawn from
  // a shared pool of this many entities.
  size_t distractor_pool = 0;

  // Placeholder text for the context baselines.
  size_t vocabulary = 400;
  size_t word_dim = 32;
  size_t description_words = 6;
  size_t context_words = 3;
  size_t filler_words = 4;  // per mention
};

// Parses "key=value" pairs separated by newlines or commas; '#' starts a
// comment. Unknown keys and bad values throw kConfig.
SynthConfig ParseSynthConfig(std::string_view text, SynthConfig base = {});
void ValidateSynthConfig(const SynthConfig& config);
nlohmann::json SynthConfigToJson(const SynthConfig& config);

struct SynthCorpus {
  EntityCatalog catalog;
  EmbeddingStore entities;
  std::vector<DocumentTask> docs;
  std::vector<std::pair<std::string, std::string>> descriptions;
  EmbeddingStore words;
  // Planted ground truth: per-document basis, gold qids and buckets.
  nlohmann::json manifest;
};

SynthCorpus GenerateSynth(const SynthConfig& config);

// Writes catalog.jsonl, embeddings.txt, dataset.jsonl, descriptions.jsonl,
// words.txt and manifest.json into `dir`.
void WriteSynthCorpus(const SynthCorpus& corpus,
                      const std::filesystem::path& dir);

}  // namespace eigenthemes

#endif  // EIGENTHEMES_SYNTH_H_
