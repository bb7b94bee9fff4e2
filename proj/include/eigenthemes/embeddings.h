#ifndef EIGENTHEMES_EMBEDDINGS_H_
#define EIGENTHEMES_EMBEDDINGS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace eigenthemes {

// Norms at or below this are treated as zero vectors.
inline constexpr double kZeroNormEpsilon = 1e-12;

// Fixed-dimension vectors keyed by identifier (entities or words).
class EmbeddingStore {
 public:
  explicit EmbeddingStore(size_t dim = 0) : dim_(dim) {}

  // Throws kDimension on a length mismatch, kData on non-finite values and
  // kFormat on a duplicate identifier.
  void Add(const std::string& id, std::span<const double> values);

  // Empty span when `id` is unknown.
  std::span<const double> Find(const std::string& id) const;
  bool Contains(const std::string& id) const { return index_.count(id) > 0; }

  size_t dim() const { return dim_; }
  size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  size_t dim_;
  std::vector<std::string> ids_;
  std::vector<double> data_;
  std::unordered_map<std::string, size_t> index_;
};

// Text format: first line "N D", then N lines "id v1 ... vD".
EmbeddingStore ParseEmbeddings(std::istream& in);
EmbeddingStore LoadEmbeddings(const std::filesystem::path& path);
void WriteEmbeddings(const EmbeddingStore& store, std::ostream& out);
void WriteEmbeddings(const EmbeddingStore& store,
                     const std::filesystem::path& path);

double L2Norm(std::span<const double> v);
double Dot(std::span<const double> a, std::span<const double> b);

// v / ||v||, or v unchanged when ||v|| <= kZeroNormEpsilon.
std::vector<double> UnitNormalize(std::span<const double> v);

// Cosine similarity; 0 when either side is a zero vector.
double Cosine(std::span<const double> a, std::span<const double> b);

}  // namespace eigenthemes

#endif  // EIGENTHEMES_EMBEDDINGS_H_
