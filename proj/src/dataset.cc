#include "eigenthemes/dataset.h"

#include <fstream>

#include "eigenthemes/errors.h"
#include "json.hpp"

namespace eigenthemes {
namespace {

using nlohmann::json;

MentionTask ParseMention(const json& j, size_t token_count) {
  MentionTask m;
  m.surface = j.at("surface").get<std::string>();
  if (auto it = j.find("gold"); it != j.end() && !it->is_null()) {
    m.gold_qid = it->get<std::string>();
  }
  const bool has_start = j.contains("start") && !j["start"].is_null();
  const bool has_end = j.contains("end") && !j["end"].is_null();
  if (has_start != has_end) {
    throw Error(ErrorKind::kParse, "mention needs both start and end");
  }
  if (has_start) {
    TokenSpan span{j["start"].get<size_t>(), j["end"].get<size_t>()};
    if (span.begin >= span.end || span.end > token_count) {
      throw Error(ErrorKind::kParse, "mention span out of range");
    }
    m.span = span;
  }
  if (auto it = j.find("candidates"); it != j.end() && !it->is_null()) {
    m.given_candidates = it->get<std::vector<std::string>>();
  }
  return m;
}

}  // namespace

std::vector<DocumentTask> ParseDataset(std::istream& in) {
  std::vector<DocumentTask> docs;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j = json::parse(line);
      DocumentTask doc;
      doc.doc_id = j.at("doc_id").get<std::string>();
      if (auto it = j.find("tokens"); it != j.end() && !it->is_null()) {
        doc.tokens = it->get<std::vector<std::string>>();
      }
      if (auto it = j.find("nouns"); it != j.end() && !it->is_null()) {
        doc.nouns = it->get<std::vector<std::string>>();
      }
      for (const json& m : j.at("mentions")) {
        doc.mentions.push_back(ParseMention(m, doc.tokens.size()));
      }
      docs.push_back(std::move(doc));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParse,
                  "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

std::vector<DocumentTask> LoadDataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return ParseDataset(in);
}

void WriteDataset(const std::vector<DocumentTask>& docs, std::ostream& out) {
  for (const DocumentTask& doc : docs) {
    json mentions = json::array();
    for (const MentionTask& m : doc.mentions) {
      json jm = {{"surface", m.surface}};
      jm["gold"] = m.gold_qid ? json(*m.gold_qid) : json(nullptr);
      if (m.span) {
        jm["start"] = m.span->begin;
        jm["end"] = m.span->end;
      }
      if (m.given_candidates) jm["candidates"] = *m.given_candidates;
      mentions.push_back(std::move(jm));
    }
    json j = {{"doc_id", doc.doc_id}, {"tokens", doc.tokens}};
    if (doc.nouns) j["nouns"] = *doc.nouns;
    j["mentions"] = std::move(mentions);
    out << j.dump() << '\n';
  }
}

void WriteDataset(const std::vector<DocumentTask>& docs,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  WriteDataset(docs, out);
}

void PrepareCandidates(std::vector<DocumentTask>& docs,
                       const InvertedIndex* index, const EntityCatalog& catalog,
                       size_t max_candidates) {
  for (DocumentTask& doc : docs) {
    for (MentionTask& m : doc.mentions) {
      if (m.given_candidates) {
        m.candidates = RankByDegree(m.surface, *m.given_candidates, catalog,
                                    max_candidates);
      } else if (index != nullptr) {
        m.candidates =
            GenerateCandidates(*index, catalog, m.surface, max_candidates);
      } else {
        throw Error(ErrorKind::kConfig,
                    "mention '" + m.surface +
                        "' has no candidates and no index was supplied");
      }
    }
  }
}

}  // namespace eigenthemes
