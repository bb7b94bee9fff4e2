#ifndef EIGENTHEMES_LINALG_H_
#define EIGENTHEMES_LINALG_H_

#include <cstddef>
#include <span>
#include <vector>

namespace eigenthemes {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix Identity(size_t n);
  static Matrix FromRows(const std::vector<std::vector<double>>& rows);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<double> column(size_t c) const;

  // Appends a row; the first row fixes the column count of an empty matrix.
  void AppendRow(std::span<const double> values);

  const std::vector<double>& data() const { return data_; }

  Matrix Transpose() const;
  double FrobeniusNorm() const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix Multiply(const Matrix& a, const Matrix& b);

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column i pairs with values[i]
};

// Cyclic Jacobi eigensolver for a symmetric matrix. The input is symmetrized
// as (A + A^T) / 2; asymmetry beyond 1e-10 (relative) is rejected. Iterates
// until the off-diagonal Frobenius norm drops below 1e-12 * ||A||_F, at most
// 100 sweeps. Each eigenvector is signed so that its largest-magnitude
// component is positive.
EigenDecomposition SymmetricEigh(const Matrix& a);

// sum_i w_i^2 * row_i^T row_i, i.e. (W E)^T (W E) for W = diag(w).
Matrix WeightedSscp(const Matrix& e, std::span<const double> weights);

// Learned low-rank subspace: d x k orthonormal basis (right singular
// vectors) and the matching singular values, non-increasing.
struct Subspace {
  Matrix basis;
  std::vector<double> strengths;

  size_t dim() const { return basis.rows(); }
  size_t rank() const { return strengths.size(); }
};

inline constexpr double kRankTolerance = 1e-10;

// Top right singular vectors of W E, obtained from the eigendecomposition of
// the weighted SSCP matrix. The requested rank is clamped to n, d and the
// number of eigenvalues above kRankTolerance * lambda_max; the returned
// Subspace reports the effective rank.
Subspace TruncatedSvd(const Matrix& e, std::span<const double> weights,
                      size_t k);

}  // namespace eigenthemes

#endif  // EIGENTHEMES_LINALG_H_
