#include "eigenthemes/kg_catalog.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "eigenthemes/errors.h"
#include "json.hpp"

namespace eigenthemes {
namespace {

using nlohmann::json;

std::string LineError(size_t line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

bool IsBlank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

void EntityCatalog::Add(EntityRecord record, bool degree_supplied) {
  if (record.qid.empty()) throw Error(ErrorKind::kData, "empty qid");
  if (record.name.empty()) {
    throw Error(ErrorKind::kData, "empty name for " + record.qid);
  }
  if (record.degree < 0) {
    throw Error(ErrorKind::kData, "negative degree for " + record.qid);
  }
  auto [it, inserted] = index_.emplace(record.qid, records_.size());
  if (!inserted) {
    throw Error(ErrorKind::kIntegrity, "duplicate qid " + record.qid);
  }
  records_.push_back(std::move(record));
  degree_supplied_.push_back(degree_supplied);
}

const EntityRecord* EntityCatalog::Find(const std::string& qid) const {
  auto it = index_.find(qid);
  return it == index_.end() ? nullptr : &records_[it->second];
}

const EntityRecord& EntityCatalog::Get(const std::string& qid) const {
  const EntityRecord* record = Find(qid);
  if (record == nullptr) {
    throw Error(ErrorKind::kIntegrity, "unknown qid " + qid);
  }
  return *record;
}

int64_t EntityCatalog::DegreeOf(const std::string& qid) const {
  const EntityRecord* record = Find(qid);
  return record == nullptr ? 0 : record->degree;
}

void EntityCatalog::FillMissingDegrees(
    const std::unordered_map<std::string, int64_t>& degrees) {
  for (size_t i = 0; i < records_.size(); ++i) {
    if (degree_supplied_[i]) continue;
    auto it = degrees.find(records_[i].qid);
    records_[i].degree = it == degrees.end() ? 0 : it->second;
  }
}

EntityCatalog ParseCatalog(std::istream& in) {
  EntityCatalog catalog;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::kParse, LineError(line_no, e.what()));
    }
    if (!j.is_object()) {
      throw Error(ErrorKind::kParse, LineError(line_no, "expected an object"));
    }
    EntityRecord record;
    bool degree_supplied = false;
    try {
      record.qid = j.at("qid").get<std::string>();
      record.name = j.at("name").get<std::string>();
      if (auto it = j.find("aliases"); it != j.end() && !it->is_null()) {
        record.aliases = it->get<std::vector<std::string>>();
      }
      if (auto it = j.find("degree"); it != j.end() && !it->is_null()) {
        if (!it->is_number_integer()) {
          throw Error(ErrorKind::kParse,
                      LineError(line_no, "degree must be an integer"));
        }
        record.degree = it->get<int64_t>();
        degree_supplied = true;
      }
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParse, LineError(line_no, e.what()));
    }
    try {
      catalog.Add(std::move(record), degree_supplied);
    } catch (const Error& e) {
      throw Error(e.kind(), LineError(line_no, e.what()));
    }
  }
  return catalog;
}

EntityCatalog LoadCatalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return ParseCatalog(in);
}

void WriteCatalog(const EntityCatalog& catalog, std::ostream& out) {
  for (const EntityRecord& r : catalog.records()) {
    json j = {{"qid", r.qid},
              {"name", r.name},
              {"aliases", r.aliases},
              {"degree", r.degree}};
    out << j.dump() << '\n';
  }
}

void WriteCatalog(const EntityCatalog& catalog,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  WriteCatalog(catalog, out);
}

std::unordered_map<std::string, int64_t> ComputeDegrees(
    const std::vector<Edge>& edges) {
  std::set<std::pair<std::string, std::string>> unique_edges;
  for (const auto& [a, b] : edges) {
    unique_edges.emplace(std::min(a, b), std::max(a, b));
  }
  std::unordered_map<std::string, int64_t> degrees;
  for (const auto& [a, b] : unique_edges) {
    ++degrees[a];
    if (a != b) ++degrees[b];
  }
  return degrees;
}

std::vector<Edge> LoadEdgeList(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<Edge> edges;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsBlank(line)) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw Error(ErrorKind::kParse,
                  LineError(line_no, "expected two tab-separated ids"));
    }
    std::string a = line.substr(0, tab);
    std::string b = line.substr(tab + 1);
    if (a.empty() || b.empty()) {
      throw Error(ErrorKind::kParse, LineError(line_no, "empty identifier"));
    }
    edges.emplace_back(std::move(a), std::move(b));
  }
  return edges;
}

}  // namespace eigenthemes
