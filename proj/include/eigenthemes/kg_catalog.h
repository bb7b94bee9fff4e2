#ifndef EIGENTHEMES_KG_CATALOG_H_
#define EIGENTHEMES_KG_CATALOG_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace eigenthemes {

// One knowledge-graph entity. Identifiers are opaque strings.
struct EntityRecord {
  std::string qid;
  std::string name;
  std::vector<std::string> aliases;
  int64_t degree = 0;

  bool operator==(const EntityRecord&) const = default;
};

// Immutable after construction; records keep their insertion order so a
// catalog can be written back out in the order it was read.
class EntityCatalog {
 public:
  EntityCatalog() = default;

  // Throws kIntegrity on a duplicate qid and kData on an invalid record.
  // `degree_supplied` is false when the source did not state a degree.
  void Add(EntityRecord record, bool degree_supplied = true);

  const EntityRecord* Find(const std::string& qid) const;
  const EntityRecord& Get(const std::string& qid) const;
  bool Contains(const std::string& qid) const { return index_.count(qid) > 0; }

  // Degree of a known entity, 0 for unknown qids.
  int64_t DegreeOf(const std::string& qid) const;

  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::vector<EntityRecord>& records() const { return records_; }

  // Overwrites degrees of entities that did not carry one in the source
  // file. Supplied degrees win.
  void FillMissingDegrees(
      const std::unordered_map<std::string, int64_t>& degrees);

 private:
  std::vector<EntityRecord> records_;
  std::vector<bool> degree_supplied_;
  std::unordered_map<std::string, size_t> index_;
};

// JSONL catalog: {"qid": str, "name": str, "aliases": [str], "degree": int}.
EntityCatalog ParseCatalog(std::istream& in);
EntityCatalog LoadCatalog(const std::filesystem::path& path);
void WriteCatalog(const EntityCatalog& catalog, std::ostream& out);
void WriteCatalog(const EntityCatalog& catalog,
                  const std::filesystem::path& path);

using Edge = std::pair<std::string, std::string>;

// Vertex degrees of the undirected simple graph spanned by `edges`.
// Parallel and reversed edges collapse; a self-loop adds one to its vertex.
std::unordered_map<std::string, int64_t> ComputeDegrees(
    const std::vector<Edge>& edges);

// Two tab-separated identifiers per line.
std::vector<Edge> LoadEdgeList(const std::filesystem::path& path);

}  // namespace eigenthemes

#endif  // EIGENTHEMES_KG_CATALOG_H_
