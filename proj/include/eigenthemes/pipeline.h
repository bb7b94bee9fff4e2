#ifndef EIGENTHEMES_PIPELINE_H_
#define EIGENTHEMES_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eigenthemes/baselines.h"
#include "eigenthemes/candidate_index.h"
#include "eigenthemes/dataset.h"
#include "eigenthemes/eigenthemes.h"
#include "eigenthemes/embeddings.h"
#include "eigenthemes/evaluation.h"
#include "eigenthemes/kg_catalog.h"
#include "eigenthemes/weighting.h"
#include "json.hpp"

namespace eigenthemes {

inline constexpr int kArtifactFormatVersion = 1;

enum class Method { kEigen, kAvg, kDegree, kNameMatch, kLocal, kGlobal };

Method ParseMethod(std::string_view name);
std::string_view MethodName(Method method);

struct MethodConfig {
  Method method = Method::kEigen;
  size_t k = kDefaultComponents;
  WeightScheme weighting;
  bool scale_by_strength = true;
};

// Read-only stores shared by all workers.
struct Resources {
  const EntityCatalog* catalog = nullptr;
  const EmbeddingStore* entities = nullptr;
  const TextResources* text = nullptr;
  const NameMatcher* names = nullptr;
};

LinkResult LinkWithMethod(const DocumentTask& doc, const Resources& resources,
                          const MethodConfig& config);

// Parallel map over documents; the output does not depend on `jobs`.
// jobs == 0 uses the hardware concurrency.
std::vector<LinkResult> LinkCorpus(const std::vector<DocumentTask>& docs,
                                   const Resources& resources,
                                   const MethodConfig& config, size_t jobs);

struct RunConfig {
  Method method = Method::kEigen;
  size_t max_candidates = kDefaultMaxCandidates;
  size_t k = kDefaultComponents;
  double delta = 1.0;
  WeightKind weighting = WeightKind::kDegreeRr;
  size_t window = kDefaultContextWindow;
  uint64_t seed = 0;
  bool unscaled = false;
  bool namematch_aliases = false;
  bool use_noun_lists = true;
  size_t jobs = 0;

  std::filesystem::path catalog;
  std::filesystem::path edges;
  std::filesystem::path index;
  std::filesystem::path embeddings;
  std::filesystem::path dataset;
  std::filesystem::path descriptions;
  std::filesystem::path words;
  std::filesystem::path out_dir;
};

// Throws kConfig on contradictory or out-of-range settings.
void ValidateRunConfig(const RunConfig& config);
nlohmann::json RunConfigToJson(const RunConfig& config);
MethodConfig ToMethodConfig(const RunConfig& config);

// Everything a run reads, loaded once before fan-out. Holds pointers into
// itself, so it lives behind a unique_ptr.
struct LoadedInputs {
  LoadedInputs() = default;
  LoadedInputs(const LoadedInputs&) = delete;
  LoadedInputs& operator=(const LoadedInputs&) = delete;

  EntityCatalog catalog;
  std::optional<InvertedIndex> index;
  std::optional<EmbeddingStore> entities;
  std::optional<EmbeddingStore> words;
  std::optional<EmbeddingStore> descriptions;
  std::optional<TextResources> text;
  std::unique_ptr<NameMatcher> names;
  std::vector<DocumentTask> docs;

  Resources resources() const;
};

// Loads the stores `methods` need and prepares candidate lists.
std::unique_ptr<LoadedInputs> LoadInputs(const RunConfig& config,
                                         const std::vector<Method>& methods);

struct RunOutput {
  OutcomeSet outcomes;
  MetricsReport report;
  nlohmann::json metrics;
};

// Links and evaluates the dataset. When out_dir is set, writes
// predictions.csv and metrics.json there.
RunOutput RunLink(const RunConfig& config);

// Metrics JSON recomputed from a predictions CSV.
nlohmann::json EvaluatePredictions(const std::vector<MentionOutcome>& outcomes);

// Mutilation curves for several methods on the same draws.
nlohmann::json RunMutilation(const RunConfig& config,
                             const std::vector<Method>& methods,
                             const std::vector<double>& fractions,
                             size_t repeats);

}  // namespace eigenthemes

#endif  // EIGENTHEMES_PIPELINE_H_
