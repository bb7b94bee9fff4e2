#include "eigenthemes/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "eigenthemes/errors.h"
#include "eigenthemes/seeding.h"

namespace eigenthemes {
namespace {

using nlohmann::json;

bool NeedsEntityEmbeddings(Method m) {
  return m == Method::kEigen || m == Method::kAvg;
}

bool NeedsText(Method m, WeightKind weighting) {
  if (m == Method::kLocal || m == Method::kGlobal) return true;
  return NeedsEntityEmbeddings(m) && (weighting == WeightKind::kLocalCtxtRr ||
                                      weighting == WeightKind::kGlobalCtxtRr);
}

void RequireFile(const std::filesystem::path& path, std::string_view what) {
  if (path.empty()) {
    throw Error(ErrorKind::kConfig, "missing --" + std::string(what));
  }
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorKind::kIo, path.string() + " does not exist");
  }
}

json Header(std::string_view format, const RunConfig& config) {
  return json{{"format", format},
              {"version", kArtifactFormatVersion},
              {"seed", config.seed},
              {"config", RunConfigToJson(config)}};
}

}  // namespace

Method ParseMethod(std::string_view name) {
  if (name == "eigen") return Method::kEigen;
  if (name == "avg") return Method::kAvg;
  if (name == "degree") return Method::kDegree;
  if (name == "namematch") return Method::kNameMatch;
  if (name == "local") return Method::kLocal;
  if (name == "global") return Method::kGlobal;
  throw Error(ErrorKind::kConfig, "unknown method '" + std::string(name) + "'");
}

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kEigen: return "eigen";
    case Method::kAvg: return "avg";
    case Method::kDegree: return "degree";
    case Method::kNameMatch: return "namematch";
    case Method::kLocal: return "local";
    case Method::kGlobal: return "global";
  }
  return "eigen";
}

LinkResult LinkWithMethod(const DocumentTask& doc, const Resources& resources,
                          const MethodConfig& config) {
  auto require = [](const void* ptr, std::string_view what) {
    if (ptr == nullptr) {
      throw Error(ErrorKind::kConfig, std::string(what) + " not loaded");
    }
  };
  require(resources.catalog, "catalog");
  LinkResult result;
  switch (config.method) {
    case Method::kEigen: {
      require(resources.entities, "entity embeddings");
      EigenOptions options{config.k, config.weighting, config.scale_by_strength};
      return LinkDocument(doc, *resources.entities, options, resources.text);
    }
    case Method::kAvg:
      require(resources.entities, "entity embeddings");
      return AvgBaseline(doc, *resources.entities, config.weighting,
                         resources.text);
    case Method::kDegree:
      for (const MentionTask& m : doc.mentions) {
        result.mentions.push_back(
            DegreeBaseline(m.candidates, *resources.catalog));
      }
      return result;
    case Method::kNameMatch:
      require(resources.names, "name matcher");
      for (const MentionTask& m : doc.mentions) {
        result.mentions.push_back(resources.names->Match(m.surface));
      }
      return result;
    case Method::kLocal:
    case Method::kGlobal:
      require(resources.text, "word and description embeddings");
      for (size_t i = 0; i < doc.mentions.size(); ++i) {
        result.mentions.push_back(
            config.method == Method::kLocal
                ? LocalContextBaseline(doc, i, *resources.text)
                : GlobalContextBaseline(doc, i, *resources.text));
      }
      return result;
  }
  return result;
}

std::vector<LinkResult> LinkCorpus(const std::vector<DocumentTask>& docs,
                                   const Resources& resources,
                                   const MethodConfig& config, size_t jobs) {
  std::vector<LinkResult> results(docs.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<size_t>(docs.size(), 1));
  if (jobs <= 1) {
    for (size_t i = 0; i < docs.size(); ++i) {
      results[i] = LinkWithMethod(docs[i], resources, config);
    }
    return results;
  }

  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (size_t i = next++; i < docs.size(); i = next++) {
          results[i] = LinkWithMethod(docs[i], resources, config);
        }
      } catch (...) {
        errors[w] = std::current_exception();
        next = docs.size();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

void ValidateRunConfig(const RunConfig& config) {
  if (config.k < 1) throw Error(ErrorKind::kConfig, "--k must be at least 1");
  if (config.max_candidates < 1) {
    throw Error(ErrorKind::kConfig, "--T must be at least 1");
  }
  if (!(config.delta > 0.0) || !std::isfinite(config.delta)) {
    throw Error(ErrorKind::kConfig, "--delta must be positive");
  }
  if (config.window < 1 && config.method == Method::kLocal) {
    throw Error(ErrorKind::kConfig, "--window must be at least 1");
  }
}

json RunConfigToJson(const RunConfig& c) {
  return json{{"method", MethodName(c.method)},
              {"T", c.max_candidates},
              {"k", c.k},
              {"delta", c.delta},
              {"weighting", WeightKindName(c.weighting)},
              {"window", c.window},
              {"seed", c.seed},
              {"unscaled", c.unscaled},
              {"namematch_aliases", c.namematch_aliases},
              {"use_noun_lists", c.use_noun_lists},
              {"catalog", c.catalog.string()},
              {"edges", c.edges.string()},
              {"index", c.index.string()},
              {"embeddings", c.embeddings.string()},
              {"dataset", c.dataset.string()},
              {"descriptions", c.descriptions.string()},
              {"words", c.words.string()}};
}

MethodConfig ToMethodConfig(const RunConfig& config) {
  MethodConfig m;
  m.method = config.method;
  m.k = config.k;
  m.weighting = WeightScheme{config.weighting, config.delta};
  m.scale_by_strength = !config.unscaled;
  return m;
}

Resources LoadedInputs::resources() const {
  Resources r;
  r.catalog = &catalog;
  r.entities = entities ? &*entities : nullptr;
  r.text = text ? &*text : nullptr;
  r.names = names.get();
  return r;
}

std::unique_ptr<LoadedInputs> LoadInputs(const RunConfig& config,
                                         const std::vector<Method>& methods) {
  ValidateRunConfig(config);
  auto in = std::make_unique<LoadedInputs>();

  RequireFile(config.catalog, "catalog");
  in->catalog = LoadCatalog(config.catalog);
  if (!config.edges.empty()) {
    RequireFile(config.edges, "edges");
    in->catalog.FillMissingDegrees(ComputeDegrees(LoadEdgeList(config.edges)));
  }

  bool need_entities = false;
  bool need_text = false;
  bool need_names = false;
  for (Method m : methods) {
    need_entities |= NeedsEntityEmbeddings(m);
    need_text |= NeedsText(m, config.weighting);
    need_names |= m == Method::kNameMatch;
  }
  if (need_entities) {
    RequireFile(config.embeddings, "embeddings");
    in->entities = LoadEmbeddings(config.embeddings);
  }
  if (need_text) {
    RequireFile(config.words, "words");
    RequireFile(config.descriptions, "descriptions");
    in->words = LoadEmbeddings(config.words);
    in->descriptions = BuildDescriptionEmbeddings(
        LoadDescriptions(config.descriptions), *in->words);
    in->text = TextResources{&*in->words, &*in->descriptions, config.window,
                             config.use_noun_lists};
  }
  if (need_names) {
    in->names =
        std::make_unique<NameMatcher>(in->catalog, config.namematch_aliases);
  }

  RequireFile(config.dataset, "dataset");
  in->docs = LoadDataset(config.dataset);
  bool all_given = true;
  for (const auto& doc : in->docs) {
    for (const auto& m : doc.mentions) all_given &= m.given_candidates.has_value();
  }
  if (!config.index.empty()) {
    RequireFile(config.index, "index");
    in->index = InvertedIndex::Load(config.index);
  } else if (!all_given && !in->catalog.empty()) {
    in->index = InvertedIndex::Build(in->catalog);
  }
  PrepareCandidates(in->docs, in->index ? &*in->index : nullptr, in->catalog,
                    config.max_candidates);
  return in;
}

RunOutput RunLink(const RunConfig& config) {
  auto inputs = LoadInputs(config, {config.method});
  const MethodConfig method = ToMethodConfig(config);
  const auto results =
      LinkCorpus(inputs->docs, inputs->resources(), method, config.jobs);

  RunOutput out;
  out.outcomes = EvaluateDocuments(inputs->docs, results);
  out.report = Summarize(out.outcomes);
  out.metrics = Header("eigenthemes-metrics", config);
  out.metrics["method"] = MethodName(config.method);
  out.metrics["metrics"] = MetricsToJson(out.report);
  if (config.method == Method::kEigen || config.method == Method::kAvg) {
    const ScoreGapResult gap =
        ScoreGap(out.outcomes.outcomes, DeriveSeed(config.seed, 0));
    out.metrics["score_gap"] = {{"mean", gap.mean},
                                {"ci_low", gap.ci_low},
                                {"ci_high", gap.ci_high},
                                {"mentions", gap.mentions},
                                {"resamples", kBootstrapResamples}};
  }
  size_t fallbacks = 0;
  for (const auto& r : results) {
    for (const auto& m : r.mentions) fallbacks += m.fallback;
  }
  out.metrics["fallback_mentions"] = fallbacks;
  out.metrics["documents"] = inputs->docs.size();

  if (!config.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) {
      throw Error(ErrorKind::kIo, "cannot create " + config.out_dir.string());
    }
    std::ofstream csv(config.out_dir / "predictions.csv");
    std::ofstream js(config.out_dir / "metrics.json");
    if (!csv || !js) {
      throw Error(ErrorKind::kIo, "cannot write to " + config.out_dir.string());
    }
    WritePredictionsCsv(out.outcomes.outcomes, csv);
    js << out.metrics.dump(2) << '\n';
  }
  return out;
}

json EvaluatePredictions(const std::vector<MentionOutcome>& outcomes) {
  OutcomeSet set;
  set.outcomes = outcomes;
  json j{{"format", "eigenthemes-metrics"},
         {"version", kArtifactFormatVersion},
         {"metrics", MetricsToJson(Summarize(set))}};
  return j;
}

json RunMutilation(const RunConfig& config, const std::vector<Method>& methods,
                   const std::vector<double>& fractions, size_t repeats) {
  auto inputs = LoadInputs(config, methods);
  const Resources resources = inputs->resources();
  std::vector<CorpusLinker> linkers;
  for (Method m : methods) {
    RunConfig c = config;
    c.method = m;
    MethodConfig mc = ToMethodConfig(c);
    linkers.push_back([resources, mc, jobs = config.jobs](
                          const std::vector<DocumentTask>& docs) {
      return LinkCorpus(docs, resources, mc, jobs);
    });
  }
  const auto points =
      Mutilation(inputs->docs, fractions, config.seed, repeats, linkers);

  json j = Header("eigenthemes-mutilation", config);
  j["repeats"] = repeats;
  json names = json::array();
  for (Method m : methods) names.push_back(MethodName(m));
  j["methods"] = names;
  json curve = json::array();
  for (const auto& p : points) {
    json row{{"fraction", p.fraction},
             {"easy_kept", p.easy_kept},
             {"easy_total", p.easy_total}};
    for (size_t i = 0; i < methods.size(); ++i) {
      row["overall_precision_at_1"][std::string(MethodName(methods[i]))] =
          p.mean_overall_p_at_1[i];
    }
    curve.push_back(std::move(row));
  }
  j["curve"] = std::move(curve);
  return j;
}

}  // namespace eigenthemes
