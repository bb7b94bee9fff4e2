#include "eigenthemes/embeddings.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "eigenthemes/errors.h"

namespace eigenthemes {
namespace {

std::vector<std::string_view> SplitSpaces(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    const size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    if (pos > start) fields.push_back(line.substr(start, pos - start));
  }
  return fields;
}

template <typename T>
bool ParseNumber(std::string_view field, T& out) {
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string At(size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

}  // namespace

void EmbeddingStore::Add(const std::string& id, std::span<const double> values) {
  if (values.size() != dim_) {
    throw Error(ErrorKind::kDimension,
                "vector for " + id + " has length " +
                    std::to_string(values.size()) + ", expected " +
                    std::to_string(dim_));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kData, "non-finite value in vector for " + id);
    }
  }
  auto [it, inserted] = index_.emplace(id, ids_.size());
  if (!inserted) throw Error(ErrorKind::kFormat, "duplicate identifier " + id);
  ids_.push_back(id);
  data_.insert(data_.end(), values.begin(), values.end());
}

std::span<const double> EmbeddingStore::Find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return {};
  return std::span<const double>(data_).subspan(it->second * dim_, dim_);
}

EmbeddingStore ParseEmbeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::kFormat, "missing \"N D\" header");
  }
  auto header = SplitSpaces(line);
  size_t count = 0;
  size_t dim = 0;
  if (header.size() != 2 || !ParseNumber(header[0], count) ||
      !ParseNumber(header[1], dim) || dim == 0) {
    throw Error(ErrorKind::kFormat, At(1) + "expected \"N D\" header");
  }
  EmbeddingStore store(dim);
  std::vector<double> values(dim);
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = SplitSpaces(line);
    if (fields.empty()) continue;
    if (fields.size() != dim + 1) {
      throw Error(ErrorKind::kFormat,
                  At(line_no) + "expected identifier and " +
                      std::to_string(dim) + " values, got " +
                      std::to_string(fields.size() - 1));
    }
    for (size_t i = 0; i < dim; ++i) {
      // from_chars accepts "inf"/"nan", which Add then rejects as data.
      if (!ParseNumber(fields[i + 1], values[i])) {
        throw Error(ErrorKind::kFormat, At(line_no) + "bad number '" +
                                            std::string(fields[i + 1]) + "'");
      }
    }
    if (store.size() == count) {
      throw Error(ErrorKind::kFormat,
                  At(line_no) + "more rows than the declared " +
                      std::to_string(count));
    }
    try {
      store.Add(std::string(fields[0]), values);
    } catch (const Error& e) {
      throw Error(e.kind(), At(line_no) + e.what());
    }
  }
  if (store.size() != count) {
    throw Error(ErrorKind::kFormat, "header declares " + std::to_string(count) +
                                        " rows, file has " +
                                        std::to_string(store.size()));
  }
  return store;
}

EmbeddingStore LoadEmbeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return ParseEmbeddings(in);
}

void WriteEmbeddings(const EmbeddingStore& store, std::ostream& out) {
  out << store.size() << ' ' << store.dim() << '\n';
  char buf[32];
  for (const std::string& id : store.ids()) {
    out << id;
    for (double v : store.Find(id)) {
      // Shortest form that parses back to the same double.
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      out << ' ' << std::string_view(buf, ptr - buf);
    }
    out << '\n';
  }
}

void WriteEmbeddings(const EmbeddingStore& store,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  WriteEmbeddings(store, out);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kDimension, "dot product of mismatched lengths");
  }
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double L2Norm(std::span<const double> v) { return std::sqrt(Dot(v, v)); }

std::vector<double> UnitNormalize(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  const double norm = L2Norm(v);
  if (norm <= kZeroNormEpsilon) return out;
  for (double& x : out) x /= norm;
  return out;
}

double Cosine(std::span<const double> a, std::span<const double> b) {
  const double na = L2Norm(a);
  const double nb = L2Norm(b);
  if (na <= kZeroNormEpsilon || nb <= kZeroNormEpsilon) return 0.0;
  return Dot(a, b) / (na * nb);
}

}  // namespace eigenthemes
