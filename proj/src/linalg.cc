#include "eigenthemes/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eigenthemes/errors.h"

namespace eigenthemes {
namespace {

constexpr double kSymmetryTolerance = 1e-10;
constexpr double kOffDiagonalTolerance = 1e-12;
constexpr int kMaxSweeps = 100;

double OffDiagonalNorm(const Matrix& a) {
  double s = 0.0;
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

// Zeroes a(p, q) with one Jacobi rotation and accumulates it into vt, the
// transposed eigenvector matrix. Only rows and columns p and q change, and a
// stays exactly symmetric.
void Rotate(Matrix& a, Matrix& vt, size_t p, size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double app = a(p, p);
  const double aqq = a(q, q);
  const double theta = (aqq - app) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const size_t n = a.rows();

  double* row_p = &a(p, 0);
  double* row_q = &a(q, 0);
  for (size_t k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double akp = row_p[k];
    const double akq = row_q[k];
    const double new_p = c * akp - s * akq;
    const double new_q = s * akp + c * akq;
    row_p[k] = new_p;
    row_q[k] = new_q;
    a(k, p) = new_p;
    a(k, q) = new_q;
  }
  a(p, p) = app - t * apq;
  a(q, q) = aqq + t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  double* vp = &vt(p, 0);
  double* vq = &vt(q, 0);
  for (size_t k = 0; k < n; ++k) {
    const double vkp = vp[k];
    const double vkq = vq[k];
    vp[k] = c * vkp - s * vkq;
    vq[k] = s * vkp + c * vkq;
  }
}

}  // namespace

Matrix Matrix::Identity(size_t n) {
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::FromRows(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  for (const auto& r : rows) m.AppendRow(r);
  return m;
}

std::vector<double> Matrix::column(size_t c) const {
  std::vector<double> out(rows_);
  for (size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void Matrix::AppendRow(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) {
    throw Error(ErrorKind::kDimension, "row length " +
                                           std::to_string(values.size()) +
                                           " != " + std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::Transpose() const {
  Matrix t(cols_, rows_);
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

double Matrix::FrobeniusNorm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

Matrix Multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::kDimension, "matrix product shape mismatch");
  }
  Matrix out(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

EigenDecomposition SymmetricEigh(const Matrix& input) {
  const size_t n = input.rows();
  if (input.cols() != n) {
    throw Error(ErrorKind::kDimension, "eigendecomposition needs a square matrix");
  }
  for (double x : input.data()) {
    if (!std::isfinite(x)) {
      throw Error(ErrorKind::kData, "non-finite matrix entry");
    }
  }
  const double scale = std::max(1.0, input.FrobeniusNorm());
  Matrix a(n, n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (std::abs(input(i, j) - input(j, i)) > kSymmetryTolerance * scale) {
        throw Error(ErrorKind::kDomain, "matrix is not symmetric");
      }
      a(i, j) = 0.5 * (input(i, j) + input(j, i));
    }
  }

  Matrix vt = Matrix::Identity(n);
  const double threshold = kOffDiagonalTolerance * a.FrobeniusNorm();
  int sweep = 0;
  while (OffDiagonalNorm(a) > threshold) {
    if (sweep++ == kMaxSweeps) {
      throw Error(ErrorKind::kNumerical, "Jacobi iteration did not converge");
    }
    const double negligible = threshold / double(n);
    for (size_t p = 0; p + 1 < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) > negligible) Rotate(a, vt, p, q);
      }
    }
  }

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t i, size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (size_t c = 0; c < n; ++c) {
    const size_t src = order[c];
    out.values[c] = a(src, src);
    size_t peak = 0;
    for (size_t r = 1; r < n; ++r) {
      if (std::abs(vt(src, r)) > std::abs(vt(src, peak))) peak = r;
    }
    const double sign = vt(src, peak) < 0.0 ? -1.0 : 1.0;
    for (size_t r = 0; r < n; ++r) out.vectors(r, c) = sign * vt(src, r);
  }
  return out;
}

Matrix WeightedSscp(const Matrix& e, std::span<const double> weights) {
  if (weights.size() != e.rows()) {
    throw Error(ErrorKind::kDimension,
                "weight count " + std::to_string(weights.size()) +
                    " != row count " + std::to_string(e.rows()));
  }
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorKind::kDomain, "weights must be finite and non-negative");
    }
  }
  const size_t d = e.cols();
  Matrix out(d, d);
  for (size_t i = 0; i < e.rows(); ++i) {
    const double w2 = weights[i] * weights[i];
    const auto row = e.row(i);
    for (size_t a = 0; a < d; ++a) {
      const double scaled = w2 * row[a];
      for (size_t b = a; b < d; ++b) out(a, b) += scaled * row[b];
    }
  }
  for (size_t a = 0; a < d; ++a) {
    for (size_t b = 0; b < a; ++b) out(a, b) = out(b, a);
  }
  return out;
}

Subspace TruncatedSvd(const Matrix& e, std::span<const double> weights,
                      size_t k) {
  if (e.rows() == 0) {
    throw Error(ErrorKind::kEmptyDocument, "no rows to decompose");
  }
  if (k < 1) throw Error(ErrorKind::kDomain, "rank must be at least 1");

  const EigenDecomposition eig = SymmetricEigh(WeightedSscp(e, weights));
  const double lambda_max = eig.values.empty() ? 0.0 : eig.values.front();
  size_t supported = 0;
  if (lambda_max > 0.0) {
    while (supported < eig.values.size() &&
           eig.values[supported] > kRankTolerance * lambda_max) {
      ++supported;
    }
  }
  const size_t rank = std::min({k, e.rows(), e.cols(), supported});

  Subspace s;
  s.basis = Matrix(e.cols(), rank);
  s.strengths.resize(rank);
  for (size_t c = 0; c < rank; ++c) {
    s.strengths[c] = std::sqrt(std::max(eig.values[c], 0.0));
    for (size_t r = 0; r < e.cols(); ++r) s.basis(r, c) = eig.vectors(r, c);
  }
  return s;
}

}  // namespace eigenthemes
