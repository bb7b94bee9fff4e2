#include "eigenthemes/synth.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "eigenthemes/errors.h"
#include "eigenthemes/evaluation.h"
#include "eigenthemes/seeding.h"

namespace eigenthemes {
namespace {

using nlohmann::json;
using Rng = std::mt19937_64;

enum class Role { kEasy, kHard, kNotFound };

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\"'");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\"'");
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseValue(std::string_view key, std::string_view value) {
  std::istringstream in{std::string(value)};
  T out{};
  if constexpr (std::is_same_v<T, bool>) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw Error(ErrorKind::kConfig, "bad boolean for " + std::string(key));
  } else {
    in >> out;
    if (!in || !in.eof()) {
      throw Error(ErrorKind::kConfig, "bad value '" + std::string(value) +
                                          "' for " + std::string(key));
    }
    if constexpr (std::is_unsigned_v<T>) {
      if (value.find('-') != std::string_view::npos) {
        throw Error(ErrorKind::kConfig, std::string(key) + " must be >= 0");
      }
    }
  }
  return out;
}

std::vector<double> Gaussian(Rng& rng, size_t n, double stddev = 1.0) {
  std::normal_distribution<double> normal(0.0, stddev);
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return v;
}

std::vector<double> RandomUnit(Rng& rng, size_t n) {
  std::vector<double> v;
  do {
    v = UnitNormalize(Gaussian(rng, n));
  } while (L2Norm(v) == 0.0);
  return v;
}

// Columns of an orthonormal d x r basis, via modified Gram-Schmidt applied
// twice.
std::vector<std::vector<double>> RandomBasis(Rng& rng, size_t d, size_t r) {
  std::vector<std::vector<double>> basis;
  while (basis.size() < r) {
    std::vector<double> v = Gaussian(rng, d);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double p = Dot(v, b);
        for (size_t i = 0; i < d; ++i) v[i] -= p * b[i];
      }
    }
    if (L2Norm(v) < 1e-6) continue;
    basis.push_back(UnitNormalize(v));
  }
  return basis;
}

std::vector<double> Combine(const std::vector<std::vector<double>>& basis,
                            const std::vector<double>& coeffs, size_t d) {
  std::vector<double> v(d, 0.0);
  for (size_t c = 0; c < basis.size(); ++c) {
    for (size_t i = 0; i < d; ++i) v[i] += coeffs[c] * basis[c][i];
  }
  return v;
}

// Unit gold-like point: subspace point plus noise of expected norm `noise`.
std::vector<double> PlantedPoint(Rng& rng,
                                 const std::vector<std::vector<double>>& basis,
                                 const SynthConfig& cfg, size_t cluster) {
  const size_t r = basis.size();
  std::vector<double> coeffs;
  if (cfg.topic_clusters == 0) {
    coeffs = RandomUnit(rng, r);
  } else {
    coeffs = Gaussian(rng, r, cfg.cluster_spread / std::sqrt(double(r)));
    coeffs[cluster % cfg.topic_clusters] += 1.0;
    coeffs = UnitNormalize(coeffs);
  }
  std::vector<double> v = Combine(basis, coeffs, cfg.dim);
  if (cfg.noise > 0.0) {
    const auto g = Gaussian(rng, cfg.dim, cfg.noise / std::sqrt(double(cfg.dim)));
    for (size_t i = 0; i < cfg.dim; ++i) v[i] += g[i];
  }
  return UnitNormalize(v);
}

// Topic of mention m: cluster j takes a share of the document proportional to
// 1/(j+1), so each document has a dominant theme and weaker ones.
size_t TopicCluster(size_t m, size_t mentions, size_t clusters) {
  if (clusters <= 1) return 0;
  double total = 0.0;
  for (size_t j = 0; j < clusters; ++j) total += 1.0 / double(j + 1);
  double cumulative = 0.0;
  for (size_t j = 0; j + 1 < clusters; ++j) {
    cumulative += 1.0 / double(j + 1) / total;
    if (double(m) + 0.5 < cumulative * double(mentions)) return j;
  }
  return clusters - 1;
}

std::vector<double> OffSubspace(Rng& rng,
                                const std::vector<std::vector<double>>& basis,
                                size_t d) {
  for (;;) {
    std::vector<double> v = Gaussian(rng, d);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double p = Dot(v, b);
        for (size_t i = 0; i < d; ++i) v[i] -= p * b[i];
      }
    }
    if (L2Norm(v) > 1e-6) return UnitNormalize(v);
  }
}

// `count` distinct multiples of 10, so any two leave room for a value in
// between.
std::vector<int64_t> DistinctDegrees(Rng& rng, size_t count) {
  std::uniform_int_distribution<int64_t> pick(1, 100000);
  std::set<int64_t> seen;
  std::vector<int64_t> out;
  while (out.size() < count) {
    const int64_t v = 10 * pick(rng);
    if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

// Degree that places the gold entity at `position` among distractors whose
// degrees are sorted descending.
int64_t GoldDegree(Rng& rng, const std::vector<int64_t>& sorted_desc,
                   size_t position) {
  std::uniform_int_distribution<int64_t> jitter(1, 9);
  if (sorted_desc.empty()) return 10 * jitter(rng);
  if (position == 0) return sorted_desc.front() + jitter(rng);
  if (position >= sorted_desc.size()) return sorted_desc.back() - jitter(rng);
  return (sorted_desc[position - 1] + sorted_desc[position]) / 2;
}

std::vector<std::string> PickWords(Rng& rng, size_t vocabulary, size_t n) {
  std::uniform_int_distribution<size_t> pick(0, vocabulary - 1);
  std::vector<std::string> words(n);
  for (auto& w : words) w = "w" + std::to_string(pick(rng));
  return words;
}

std::string Join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
  return out;
}

json BasisToJson(const std::vector<std::vector<double>>& basis, size_t d) {
  json rows = json::array();
  for (size_t i = 0; i < d; ++i) {
    json row = json::array();
    for (const auto& col : basis) row.push_back(col[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

SynthConfig ParseSynthConfig(std::string_view text, SynthConfig cfg) {
  std::string normalized(text);
  for (char& c : normalized) {
    if (c == ',' || c == ';') c = '\n';
  }
  std::istringstream in(normalized);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string_view sv = Trim(line);
    if (sv.empty() || sv.front() == '[') continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kConfig, "expected key=value, got '" +
                                          std::string(sv) + "'");
    }
    const std::string key(Trim(sv.substr(0, eq)));
    const std::string_view value = Trim(sv.substr(eq + 1));
    if (key == "seed") cfg.seed = ParseValue<uint64_t>(key, value);
    else if (key == "d" || key == "dim") cfg.dim = ParseValue<size_t>(key, value);
    else if (key == "rank" || key == "r") cfg.rank = ParseValue<size_t>(key, value);
    else if (key == "docs") cfg.docs = ParseValue<size_t>(key, value);
    else if (key == "mentions_per_doc") cfg.mentions_per_doc = ParseValue<size_t>(key, value);
    else if (key == "candidates_per_mention") cfg.candidates_per_mention = ParseValue<size_t>(key, value);
    else if (key == "noise" || key == "noise_amplitude") cfg.noise = ParseValue<double>(key, value);
    else if (key == "easy_fraction") cfg.easy_fraction = ParseValue<double>(key, value);
    else if (key == "not_found_fraction") cfg.not_found_fraction = ParseValue<double>(key, value);
    else if (key == "topic_clusters") cfg.topic_clusters = ParseValue<size_t>(key, value);
    else if (key == "cluster_spread") cfg.cluster_spread = ParseValue<double>(key, value);
    else if (key == "orthogonal_distractors") cfg.orthogonal_distractors = ParseValue<bool>(key, value);
    else if (key == "adversarial_distractors") cfg.adversarial_distractors = ParseValue<size_t>(key, value);
    else if (key == "distractor_pool") cfg.distractor_pool = ParseValue<size_t>(key, value);
    else if (key == "vocabulary") cfg.vocabulary = ParseValue<size_t>(key, value);
    else if (key == "word_dim") cfg.word_dim = ParseValue<size_t>(key, value);
    else if (key == "description_words") cfg.description_words = ParseValue<size_t>(key, value);
    else if (key == "context_words") cfg.context_words = ParseValue<size_t>(key, value);
    else if (key == "filler_words") cfg.filler_words = ParseValue<size_t>(key, value);
    else throw Error(ErrorKind::kConfig, "unknown synth key '" + key + "'");
  }
  return cfg;
}

void ValidateSynthConfig(const SynthConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::kConfig, msg); };
  if (c.dim < 2) fail("d must be at least 2");
  if (c.rank < 1 || c.rank >= c.dim) fail("rank must satisfy 1 <= rank < d");
  if (c.docs < 1 || c.mentions_per_doc < 1 || c.candidates_per_mention < 1) {
    fail("docs, mentions_per_doc and candidates_per_mention must be >= 1");
  }
  if (!(c.noise >= 0.0)) fail("noise must be >= 0");
  if (!(c.easy_fraction >= 0.0 && c.easy_fraction <= 1.0)) {
    fail("easy_fraction must lie in [0, 1]");
  }
  if (!(c.not_found_fraction >= 0.0 &&
        c.easy_fraction + c.not_found_fraction <= 1.0)) {
    fail("easy_fraction + not_found_fraction must lie in [0, 1]");
  }
  if (c.topic_clusters > c.rank) fail("topic_clusters must not exceed rank");
  if (!(c.cluster_spread >= 0.0)) fail("cluster_spread must be >= 0");
  const size_t distractors = c.candidates_per_mention - 1;
  if (c.distractor_pool > 0 && distractors > c.distractor_pool) {
    fail("candidates_per_mention exceeds the distractor pool");
  }
  if (c.adversarial_distractors > c.mentions_per_doc * distractors) {
    fail("more adversarial distractors than distractor slots");
  }
  if (c.vocabulary < 1 || c.word_dim < 1) fail("vocabulary and word_dim must be >= 1");
  const size_t total = c.docs * c.mentions_per_doc;
  const auto hard = total - static_cast<size_t>(std::llround(
                                c.easy_fraction * double(total))) -
                    static_cast<size_t>(std::llround(c.not_found_fraction *
                                                     double(total)));
  if (c.candidates_per_mention == 1 && hard > 0) {
    fail("hard mentions need at least two candidates");
  }
}

json SynthConfigToJson(const SynthConfig& c) {
  return json{{"seed", c.seed},
              {"d", c.dim},
              {"rank", c.rank},
              {"docs", c.docs},
              {"mentions_per_doc", c.mentions_per_doc},
              {"candidates_per_mention", c.candidates_per_mention},
              {"noise", c.noise},
              {"easy_fraction", c.easy_fraction},
              {"not_found_fraction", c.not_found_fraction},
              {"topic_clusters", c.topic_clusters},
              {"cluster_spread", c.cluster_spread},
              {"orthogonal_distractors", c.orthogonal_distractors},
              {"adversarial_distractors", c.adversarial_distractors},
              {"distractor_pool", c.distractor_pool},
              {"vocabulary", c.vocabulary},
              {"word_dim", c.word_dim},
              {"description_words", c.description_words},
              {"context_words", c.context_words},
              {"filler_words", c.filler_words}};
}

SynthCorpus GenerateSynth(const SynthConfig& cfg) {
  ValidateSynthConfig(cfg);
  SynthCorpus corpus{EntityCatalog{}, EmbeddingStore(cfg.dim), {}, {},
                     EmbeddingStore(cfg.word_dim), json::object()};
  const size_t total = cfg.docs * cfg.mentions_per_doc;
  const size_t distractors_per_mention = cfg.candidates_per_mention - 1;

  // Stratified bucket assignment keeps the realized shares exact.
  std::vector<Role> roles(total, Role::kHard);
  {
    Rng rng(DeriveSeed(cfg.seed, 1));
    const auto n_easy =
        static_cast<size_t>(std::llround(cfg.easy_fraction * double(total)));
    const auto n_nf = static_cast<size_t>(
        std::llround(cfg.not_found_fraction * double(total)));
    std::fill(roles.begin(), roles.begin() + n_easy, Role::kEasy);
    std::fill(roles.begin() + n_easy, roles.begin() + n_easy + n_nf,
              Role::kNotFound);
    std::shuffle(roles.begin(), roles.end(), rng);
  }

  Rng text_rng(DeriveSeed(cfg.seed, 2));
  for (size_t w = 0; w < cfg.vocabulary; ++w) {
    corpus.words.Add("w" + std::to_string(w), Gaussian(text_rng, cfg.word_dim));
  }

  size_t next_qid = 1;
  auto new_qid = [&] { return "Q" + std::to_string(next_qid++); };

  // Shared pool: entity records are added at the end once their aliases
  // (one per mention they serve) are known.
  struct PoolEntity {
    std::string qid;
    int64_t degree;
    std::vector<std::string> aliases;
  };
  std::vector<PoolEntity> pool;
  if (cfg.distractor_pool > 0) {
    Rng rng(DeriveSeed(cfg.seed, 3));
    const auto degrees = DistinctDegrees(rng, cfg.distractor_pool);
    for (size_t i = 0; i < cfg.distractor_pool; ++i) {
      PoolEntity p{new_qid(), degrees[i], {}};
      corpus.entities.Add(p.qid, RandomUnit(rng, cfg.dim));
      corpus.descriptions.emplace_back(
          p.qid, Join(PickWords(text_rng, cfg.vocabulary, cfg.description_words)));
      pool.push_back(std::move(p));
    }
  }

  json documents = json::array();
  size_t counts[3] = {0, 0, 0};
  for (size_t d = 0; d < cfg.docs; ++d) {
    Rng rng(DeriveSeed(cfg.seed, 1000 + d));
    const auto basis = RandomBasis(rng, cfg.dim, cfg.rank);
    std::vector<std::vector<double>> adversarial_basis;
    if (cfg.adversarial_distractors > 0) {
      adversarial_basis = RandomBasis(rng, cfg.dim, cfg.rank);
    }
    // The last `adversarial_distractors` distractor slots of the document.
    const size_t first_adversarial =
        cfg.mentions_per_doc * distractors_per_mention -
        cfg.adversarial_distractors;

    // Orthogonal distractors also avoid each other while the complement of
    // the planted subspace has room.
    std::vector<std::vector<double>> taken = basis;

    DocumentTask doc;
    doc.doc_id = "doc" + std::to_string(d);
    json golds = json::array();
    json buckets = json::array();
    for (size_t m = 0; m < cfg.mentions_per_doc; ++m) {
      const Role role = roles[d * cfg.mentions_per_doc + m];
      const std::string surface =
          "d" + std::to_string(d) + "m" + std::to_string(m);

      // Distractors.
      std::vector<std::pair<std::string, int64_t>> distractors;
      if (!pool.empty()) {
        std::vector<size_t> ids(pool.size());
        std::iota(ids.begin(), ids.end(), 0);
        std::shuffle(ids.begin(), ids.end(), rng);
        for (size_t i = 0; i < distractors_per_mention; ++i) {
          PoolEntity& p = pool[ids[i]];
          p.aliases.push_back(surface);
          distractors.emplace_back(p.qid, p.degree);
        }
      } else {
        const auto degrees = DistinctDegrees(rng, distractors_per_mention);
        for (size_t i = 0; i < distractors_per_mention; ++i) {
          const std::string qid = new_qid();
          std::vector<double> v;
          if (m * distractors_per_mention + i >= first_adversarial) {
            v = PlantedPoint(rng, adversarial_basis, cfg, i);
          } else if (cfg.orthogonal_distractors) {
            if (taken.size() < cfg.dim) {
              v = OffSubspace(rng, taken, cfg.dim);
              taken.push_back(v);
            } else {
              v = OffSubspace(rng, basis, cfg.dim);
            }
          } else {
            v = RandomUnit(rng, cfg.dim);
          }
          corpus.entities.Add(qid, v);
          corpus.catalog.Add(EntityRecord{
              qid, surface, {surface + " variant " + std::to_string(i + 1)},
              degrees[i]});
          corpus.descriptions.emplace_back(
              qid, Join(PickWords(text_rng, cfg.vocabulary,
                                  cfg.description_words)));
          distractors.emplace_back(qid, degrees[i]);
        }
      }

      // Gold entity.
      std::vector<int64_t> sorted;
      for (const auto& [qid, deg] : distractors) sorted.push_back(deg);
      std::sort(sorted.rbegin(), sorted.rend());
      size_t position = 0;
      if (role == Role::kHard) {
        std::uniform_int_distribution<size_t> pick(1, distractors_per_mention);
        position = pick(rng);
      }
      const std::string gold = new_qid();
      const int64_t gold_degree = GoldDegree(rng, sorted, position);
      corpus.entities.Add(
          gold, PlantedPoint(rng, basis, cfg,
                             TopicCluster(m, cfg.mentions_per_doc,
                                          cfg.topic_clusters)));
      const std::string gold_name =
          role == Role::kNotFound ? "g" + surface : surface;
      corpus.catalog.Add(EntityRecord{gold, gold_name, {}, gold_degree});
      const auto gold_description =
          PickWords(text_rng, cfg.vocabulary, cfg.description_words);
      corpus.descriptions.emplace_back(gold, Join(gold_description));

      // Text: filler, words from the gold description, then the mention.
      std::uniform_int_distribution<size_t> pick_desc(
          0, gold_description.size() - 1);
      for (size_t i = 0; i < cfg.filler_words; ++i) {
        doc.tokens.push_back(i % 2 == 0 ? "the"
                                        : PickWords(text_rng, cfg.vocabulary, 1)[0]);
      }
      for (size_t i = 0; i < cfg.context_words && !gold_description.empty(); ++i) {
        doc.tokens.push_back(gold_description[pick_desc(text_rng)]);
      }
      MentionTask mention;
      mention.surface = surface;
      mention.gold_qid = gold;
      mention.span = TokenSpan{doc.tokens.size(), doc.tokens.size() + 1};
      doc.tokens.push_back(surface);
      doc.mentions.push_back(std::move(mention));

      golds.push_back(gold);
      const Bucket bucket = role == Role::kEasy   ? Bucket::kEasy
                            : role == Role::kHard ? Bucket::kHard
                                                  : Bucket::kNotFound;
      ++counts[static_cast<int>(bucket)];
      buckets.push_back(bucket == Bucket::kEasy   ? "easy"
                        : bucket == Bucket::kHard ? "hard"
                                                  : "not_found");
    }
    json entry{{"doc_id", doc.doc_id},
               {"planted_basis", BasisToJson(basis, cfg.dim)},
               {"gold", std::move(golds)},
               {"buckets", std::move(buckets)}};
    if (!adversarial_basis.empty()) {
      entry["adversarial_basis"] = BasisToJson(adversarial_basis, cfg.dim);
    }
    documents.push_back(std::move(entry));
    corpus.docs.push_back(std::move(doc));
  }

  for (PoolEntity& p : pool) {
    corpus.catalog.Add(
        EntityRecord{p.qid, "pool " + p.qid, std::move(p.aliases), p.degree});
  }

  corpus.manifest = json{{"format", "eigenthemes-synth-manifest"},
                         {"version", 1},
                         {"seed", cfg.seed},
                         {"config", SynthConfigToJson(cfg)},
                         {"counts",
                          {{"easy", counts[0]},
                           {"hard", counts[1]},
                           {"not_found", counts[2]}}},
                         {"documents", std::move(documents)}};
  return corpus;
}

void WriteSynthCorpus(const SynthCorpus& corpus,
                      const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + dir.string());
  WriteCatalog(corpus.catalog, dir / "catalog.jsonl");
  WriteEmbeddings(corpus.entities, dir / "embeddings.txt");
  WriteEmbeddings(corpus.words, dir / "words.txt");
  WriteDataset(corpus.docs, dir / "dataset.jsonl");
  {
    std::ofstream out(dir / "descriptions.jsonl");
    if (!out) throw Error(ErrorKind::kIo, "cannot write descriptions");
    for (const auto& [qid, text] : corpus.descriptions) {
      out << json{{"qid", qid}, {"description", text}}.dump() << '\n';
    }
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error(ErrorKind::kIo, "cannot write manifest");
  out << corpus.manifest.dump(2) << '\n';
}

}  // namespace eigenthemes
