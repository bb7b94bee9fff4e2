#include "eigenthemes/candidate_index.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "eigenthemes/errors.h"
#include "json.hpp"

namespace eigenthemes {
namespace {

using nlohmann::json;

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one UTF-8 sequence starting at text[pos]; advances pos.
char32_t DecodeUtf8(std::string_view text, size_t& pos) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  size_t extra = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    ++pos;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    extra = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3;
    cp = lead & 0x07;
  } else {
    ++pos;
    return kInvalid;
  }
  if (pos + extra >= text.size()) {
    ++pos;
    return kInvalid;
  }
  for (size_t i = 1; i <= extra; ++i) {
    const auto c = static_cast<unsigned char>(text[pos + i]);
    if ((c & 0xC0) != 0x80) {
      ++pos;
      return kInvalid;
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  pos += extra + 1;
  return cp;
}

bool IsSeparator(char32_t cp) {
  if (cp == kInvalid) return true;
  if (cp < 0x80) {
    return !((cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
             (cp >= 'A' && cp <= 'Z'));
  }
  return (cp >= 0x80 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 ||
         (cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x3000 && cp <= 0x303F) ||
         (cp >= 0xFE30 && cp <= 0xFE4F) || (cp >= 0xFF00 && cp <= 0xFF0F) ||
         cp == 0xFEFF;
}

char32_t ToLower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  return cp;
}

void AppendUtf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool ContainsAll(const std::vector<std::string>& haystack,
                 const std::vector<std::string>& needles) {
  return std::all_of(needles.begin(), needles.end(), [&](const auto& n) {
    return std::find(haystack.begin(), haystack.end(), n) != haystack.end();
  });
}

// True when every query token occurs in the name or in one alias alone.
bool MatchesSingleSource(const EntityRecord& record,
                         const std::vector<std::string>& tokens) {
  if (ContainsAll(Tokenize(record.name), tokens)) return true;
  return std::any_of(record.aliases.begin(), record.aliases.end(),
                     [&](const std::string& alias) {
                       return ContainsAll(Tokenize(alias), tokens);
                     });
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = DecodeUtf8(text, pos);
    if (IsSeparator(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      AppendUtf8(current, ToLower(cp));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

InvertedIndex InvertedIndex::Build(const EntityCatalog& catalog) {
  if (catalog.empty()) {
    throw Error(ErrorKind::kUndefinedInput, "cannot index an empty catalog");
  }
  InvertedIndex index;
  index.entity_ids_.reserve(catalog.size());
  for (const EntityRecord& r : catalog.records()) {
    index.entity_ids_.push_back(r.qid);
  }
  std::sort(index.entity_ids_.begin(), index.entity_ids_.end());
  for (uint32_t id = 0; id < index.entity_ids_.size(); ++id) {
    const EntityRecord& r = catalog.Get(index.entity_ids_[id]);
    auto add = [&](std::string_view text) {
      for (std::string& token : Tokenize(text)) {
        auto& list = index.postings_[std::move(token)];
        // Entities are visited in ascending id order, so a duplicate can
        // only be the last element.
        if (list.empty() || list.back() != id) list.push_back(id);
      }
    };
    add(r.name);
    for (const std::string& alias : r.aliases) add(alias);
  }
  return index;
}

std::span<const uint32_t> InvertedIndex::Postings(
    std::string_view token) const {
  auto it = postings_.find(std::string(token));
  if (it == postings_.end()) return {};
  return it->second;
}

std::vector<std::string> InvertedIndex::PostingQids(
    std::string_view token) const {
  std::vector<std::string> qids;
  for (uint32_t id : Postings(token)) qids.push_back(entity_ids_[id]);
  return qids;
}

void InvertedIndex::Save(std::ostream& out) const {
  json header = {{"format", "eigenthemes-index"},
                 {"version", kFormatVersion},
                 {"entities", entity_ids_.size()},
                 {"vocabulary_size", postings_.size()}};
  out << header.dump() << '\n';
  std::vector<const std::string*> tokens;
  tokens.reserve(postings_.size());
  for (const auto& [token, list] : postings_) tokens.push_back(&token);
  std::sort(tokens.begin(), tokens.end(),
            [](const auto* a, const auto* b) { return *a < *b; });
  for (const std::string* token : tokens) {
    json line = {{"token", *token}, {"postings", PostingQids(*token)}};
    out << line.dump() << '\n';
  }
}

void InvertedIndex::Save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  Save(out);
}

InvertedIndex InvertedIndex::Load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::kFormat, "index file is empty");
  }
  size_t declared_entities = 0;
  size_t declared_vocabulary = 0;
  try {
    json header = json::parse(line);
    if (header.at("format") != "eigenthemes-index") {
      throw Error(ErrorKind::kFormat, "not an index file");
    }
    if (header.at("version").get<int>() != kFormatVersion) {
      throw Error(ErrorKind::kFormat, "unsupported index version");
    }
    declared_entities = header.at("entities").get<size_t>();
    declared_vocabulary = header.at("vocabulary_size").get<size_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("bad index header: ") + e.what());
  }

  std::map<std::string, std::vector<std::string>> raw;
  std::set<std::string> qids;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      auto list = j.at("postings").get<std::vector<std::string>>();
      if (!std::is_sorted(list.begin(), list.end()) ||
          std::adjacent_find(list.begin(), list.end()) != list.end()) {
        throw Error(ErrorKind::kFormat, "line " + std::to_string(line_no) +
                                            ": postings not strictly ascending");
      }
      qids.insert(list.begin(), list.end());
      raw.emplace(j.at("token").get<std::string>(), std::move(list));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kFormat,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (raw.size() != declared_vocabulary || qids.size() > declared_entities) {
    throw Error(ErrorKind::kFormat, "index header does not match contents");
  }

  InvertedIndex index;
  index.entity_ids_.assign(qids.begin(), qids.end());
  for (auto& [token, list] : raw) {
    std::vector<uint32_t> ids;
    ids.reserve(list.size());
    for (const std::string& qid : list) {
      auto it = std::lower_bound(index.entity_ids_.begin(),
                                 index.entity_ids_.end(), qid);
      ids.push_back(static_cast<uint32_t>(it - index.entity_ids_.begin()));
    }
    index.postings_.emplace(token, std::move(ids));
  }
  return index;
}

InvertedIndex InvertedIndex::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return Load(in);
}

CandidateList RankByDegree(std::string_view mention_surface,
                           std::vector<std::string> qids,
                           const EntityCatalog& catalog,
                           size_t max_candidates) {
  std::vector<std::pair<int64_t, std::string>> keyed;
  keyed.reserve(qids.size());
  for (std::string& qid : qids) {
    keyed.emplace_back(catalog.DegreeOf(qid), std::move(qid));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  keyed.erase(std::unique(keyed.begin(), keyed.end()), keyed.end());
  CandidateList out;
  out.mention_surface = std::string(mention_surface);
  out.truncated = keyed.size() > max_candidates;
  const size_t n = std::min(keyed.size(), max_candidates);
  out.candidates.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    out.candidates.push_back(std::move(keyed[i].second));
  }
  return out;
}

CandidateList GenerateCandidates(const InvertedIndex& index,
                                 const EntityCatalog& catalog,
                                 std::string_view mention,
                                 size_t max_candidates) {
  if (max_candidates < 1) {
    throw Error(ErrorKind::kDomain, "max_candidates must be at least 1");
  }
  std::vector<std::string> tokens = Tokenize(mention);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  if (tokens.empty()) return CandidateList{std::string(mention), {}, false};

  std::vector<std::span<const uint32_t>> lists;
  lists.reserve(tokens.size());
  for (const std::string& token : tokens) lists.push_back(index.Postings(token));
  std::sort(lists.begin(), lists.end(),
            [](const auto& a, const auto& b) { return a.size() < b.size(); });

  std::vector<uint32_t> acc(lists.front().begin(), lists.front().end());
  std::vector<uint32_t> next;
  for (size_t i = 1; i < lists.size() && !acc.empty(); ++i) {
    next.clear();
    std::set_intersection(acc.begin(), acc.end(), lists[i].begin(),
                          lists[i].end(), std::back_inserter(next));
    acc.swap(next);
  }

  std::vector<std::string> matched;
  for (uint32_t id : acc) {
    const std::string& qid = index.EntityAt(id);
    const EntityRecord* record = catalog.Find(qid);
    if (record == nullptr) {
      throw Error(ErrorKind::kIntegrity,
                  "index references " + qid + " which is not in the catalog");
    }
    if (tokens.size() == 1 || MatchesSingleSource(*record, tokens)) {
      matched.push_back(qid);
    }
  }
  return RankByDegree(mention, std::move(matched), catalog, max_candidates);
}

double OracleRecall(const std::vector<LinkingQuery>& queries,
                    const InvertedIndex& index, const EntityCatalog& catalog,
                    size_t max_candidates) {
  if (queries.empty()) {
    throw Error(ErrorKind::kUndefinedInput, "oracle recall of no queries");
  }
  size_t hits = 0;
  for (const LinkingQuery& q : queries) {
    CandidateList list =
        GenerateCandidates(index, catalog, q.mention, max_candidates);
    if (std::find(list.candidates.begin(), list.candidates.end(), q.gold_qid) !=
        list.candidates.end()) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(queries.size());
}

}  // namespace eigenthemes
