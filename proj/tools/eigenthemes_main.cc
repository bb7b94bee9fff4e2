// Command-line entry point: build-index, link, eval, mutilate, synth.
//
// Exit codes: 0 success, 1 internal failure, 2 I/O error, 3 malformed input,
// 4 invalid configuration.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eigenthemes/candidate_index.h"
#include "eigenthemes/errors.h"
#include "eigenthemes/kg_catalog.h"
#include "eigenthemes/pipeline.h"
#include "eigenthemes/synth.h"

namespace et = eigenthemes;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitIo = 2;
constexpr int kExitInput = 3;
constexpr int kExitConfig = 4;

int ExitCodeFor(et::ErrorKind kind) {
  switch (kind) {
    case et::ErrorKind::kIo: return kExitIo;
    case et::ErrorKind::kParse:
    case et::ErrorKind::kIntegrity:
    case et::ErrorKind::kFormat:
    case et::ErrorKind::kData:
    case et::ErrorKind::kDimension:
    case et::ErrorKind::kUndefinedInput: return kExitInput;
    case et::ErrorKind::kConfig:
    case et::ErrorKind::kDomain: return kExitConfig;
    case et::ErrorKind::kNumerical:
    case et::ErrorKind::kEmptyDocument: return kExitInternal;
  }
  return kExitInternal;
}

struct LinkFlags {
  std::string method = "eigen";
  std::string weighting = "degree_rr";
  bool no_noun_lists = false;
};

void AddInputOptions(CLI::App* cmd, et::RunConfig& c, LinkFlags& f) {
  cmd->add_option("--catalog", c.catalog, "Entity catalog (JSONL)")->required();
  cmd->add_option("--dataset", c.dataset, "Documents with mentions (JSONL)")
      ->required();
  cmd->add_option("--embeddings", c.embeddings, "Entity embeddings (text)");
  cmd->add_option("--edges", c.edges, "Edge list used for missing degrees");
  cmd->add_option("--index", c.index, "Prebuilt inverted index");
  cmd->add_option("--descriptions", c.descriptions, "Entity descriptions (JSONL)");
  cmd->add_option("--words", c.words, "Word embeddings (text)");
  cmd->add_option("--T", c.max_candidates, "Max candidates per mention")
      ->capture_default_str();
  cmd->add_option("--k", c.k, "Number of eigenthemes")->capture_default_str();
  cmd->add_option("--delta", c.delta, "Rank-weight exponent")
      ->capture_default_str();
  cmd->add_option("--weighting", f.weighting,
                  "none|degree_rr|local_ctxt_rr|global_ctxt_rr")
      ->capture_default_str();
  cmd->add_option("--window", c.window, "Local context window")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "Root seed")->capture_default_str();
  cmd->add_option("--jobs", c.jobs, "Worker threads (0 = all cores)")
      ->capture_default_str();
  cmd->add_flag("--unscaled", c.unscaled,
                "Score by projection norm without singular-value scaling");
  cmd->add_flag("--namematch-aliases", c.namematch_aliases,
                "Let NameMatch also match aliases");
  cmd->add_flag("--no-noun-lists", f.no_noun_lists,
                "Ignore per-document noun lists");
}

void Finish(et::RunConfig& c, const LinkFlags& f) {
  c.method = et::ParseMethod(f.method);
  c.weighting = et::ParseWeightKind(f.weighting);
  c.use_noun_lists = !f.no_noun_lists;
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void WriteJson(const nlohmann::json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw et::Error(et::ErrorKind::kIo, "cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised entity linking with per-document eigenthemes"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file; [link] or [mutilate] sections")
      ->check(CLI::ExistingFile);

  // build-index
  auto* build = app.add_subcommand("build-index", "Build the token index");
  std::string build_catalog, build_out, build_edges;
  build->add_option("--catalog", build_catalog, "Entity catalog")->required();
  build->add_option("--out", build_out, "Index output path")->required();
  build->add_option("--edges", build_edges, "Edge list used for missing degrees");

  // link
  auto* link = app.add_subcommand("link", "Link a dataset and score it");
  et::RunConfig link_cfg;
  LinkFlags link_flags;
  AddInputOptions(link, link_cfg, link_flags);
  link->add_option("--method", link_flags.method,
                   "eigen|avg|degree|namematch|local|global")
      ->capture_default_str();
  link->add_option("--out", link_cfg.out_dir, "Output directory")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Recompute metrics from predictions");
  std::string eval_in, eval_out;
  eval->add_option("--predictions", eval_in, "Predictions CSV")->required();
  eval->add_option("--out", eval_out, "Metrics JSON (default stdout)");

  // mutilate
  auto* mutilate =
      app.add_subcommand("mutilate", "Remove easy mentions and relink");
  et::RunConfig mut_cfg;
  LinkFlags mut_flags;
  std::string methods = "eigen,degree";
  std::string fractions = "1,0.9,0.8,0.7,0.6,0.5,0.4,0.3,0.2,0.1,0";
  size_t repeats = et::kDefaultMutilationRepeats;
  std::string mut_out;
  AddInputOptions(mutilate, mut_cfg, mut_flags);
  mutilate->add_option("--methods", methods, "Comma-separated methods")
      ->capture_default_str();
  mutilate->add_option("--fractions", fractions, "Comma-separated fractions")
      ->capture_default_str();
  mutilate->add_option("--repeats", repeats, "Draws per fraction")
      ->capture_default_str();
  mutilate->add_option("--out", mut_out, "Curve JSON (default stdout)");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a planted corpus");
  std::string synth_config, synth_out;
  synth->add_option("--config", synth_config,
                    "key=value file, or an inline comma-separated list");
  synth->add_option("--out", synth_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*build) {
      et::EntityCatalog catalog = et::LoadCatalog(build_catalog);
      if (!build_edges.empty()) {
        catalog.FillMissingDegrees(
            et::ComputeDegrees(et::LoadEdgeList(build_edges)));
      }
      const auto index = et::InvertedIndex::Build(catalog);
      index.Save(build_out);
      std::cerr << "indexed " << index.entity_count() << " entities, "
                << index.vocabulary_size() << " tokens\n";
    } else if (*link) {
      Finish(link_cfg, link_flags);
      const et::RunOutput out = et::RunLink(link_cfg);
      const auto& r = out.report;
      std::cerr << et::MethodName(link_cfg.method)
                << ": overall P@1=" << r.overall.precision_at_1
                << " MRR=" << r.overall.mrr << " (easy " << r.easy.count
                << ", hard " << r.hard.count << ", not found " << r.not_found
                << ")\n";
      if (r.excluded_unannotated > 0) {
        std::cerr << "excluded " << r.excluded_unannotated
                  << " mentions without gold annotation\n";
      }
    } else if (*eval) {
      WriteJson(et::EvaluatePredictions(et::ReadPredictionsCsv(eval_in)),
                eval_out);
    } else if (*mutilate) {
      Finish(mut_cfg, mut_flags);
      std::vector<et::Method> ms;
      for (const auto& m : SplitList(methods)) ms.push_back(et::ParseMethod(m));
      std::vector<double> fs;
      for (const auto& f : SplitList(fractions)) {
        try {
          fs.push_back(std::stod(f));
        } catch (const std::exception&) {
          throw et::Error(et::ErrorKind::kConfig, "bad fraction '" + f + "'");
        }
      }
      if (ms.empty() || fs.empty()) {
        throw et::Error(et::ErrorKind::kConfig, "need methods and fractions");
      }
      WriteJson(et::RunMutilation(mut_cfg, ms, fs, repeats), mut_out);
    } else if (*synth) {
      std::string text = synth_config;
      if (!synth_config.empty() && std::filesystem::is_regular_file(synth_config)) {
        std::ifstream in(synth_config);
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
      }
      const et::SynthCorpus corpus =
          et::GenerateSynth(et::ParseSynthConfig(text));
      et::WriteSynthCorpus(corpus, synth_out);
      std::cerr << "wrote " << corpus.catalog.size() << " entities, "
                << corpus.docs.size() << " documents to " << synth_out << '\n';
    }
  } catch (const et::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
