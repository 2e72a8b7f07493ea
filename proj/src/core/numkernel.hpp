#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace blocktrid {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

/// Dense complex matrix, row-major, 0-based element access.
///
/// Operators (`T`, `S_k`, transformed matrices) and basis changes are both
/// square instances; rectangular instances only appear as intermediate
/// blocks.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  explicit Matrix(std::size_t dim) : Matrix(dim, dim) {}
  /// Throws `NonFinite` on NaN/Inf entries and `DimensionMismatch` when the
  /// payload size is not rows*cols.
  Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> row_major);

  static Matrix identity(std::size_t dim);
  static Matrix from_columns(std::span<const Vector> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t dim() const noexcept { return rows_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const Complex> data() const noexcept { return data_; }

  Vector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const Complex> values);
  Matrix block(std::size_t row0, std::size_t col0, std::size_t nrows,
               std::size_t ncols) const;
  void set_block(std::size_t row0, std::size_t col0, const Matrix& values);

  bool all_finite() const noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

using OperatorMatrix = Matrix;
/// Unitary matrix whose column k is the new basis vector f_k in old
/// coordinates.
using BasisChange = Matrix;

Matrix adjoint(const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Vector apply(const Matrix& a, std::span<const Complex> v);
/// a^* v without forming the adjoint.
Vector apply_adjoint(const Matrix& a, std::span<const Complex> v);

double max_abs(const Matrix& a);
double frobenius_norm(const Matrix& a);
Complex trace(const Matrix& a);
/// max |U^*U - I|.
double unitarity_residual(const Matrix& u);
/// max |A - A^*|.
double hermitian_residual(const Matrix& a);

Complex inner(std::span<const Complex> x, std::span<const Complex> y);  // x^* y
double norm(std::span<const Complex> x);
Vector unit_vector(std::size_t dim, std::size_t index);

// ---------------------------------------------------------------------------
// Gram-Schmidt

struct GsOutcome {
  enum class Tag { Accepted, Rejected };
  Tag tag = Tag::Rejected;
  Vector vector;  // unit norm when accepted, empty otherwise
  double residual_norm = 0.0;

  bool accepted() const noexcept { return tag == Tag::Accepted; }
};

inline constexpr double kDefaultDependenceTol = 1e-10;

/// Two full modified Gram-Schmidt passes of `v` against an orthonormal
/// `basis`. Rejected when the residual is at most tol * max(1, |v|).
GsOutcome mgs_append(std::span<const Vector> basis, std::span<const Complex> v,
                     double tol = kDefaultDependenceTol);

// ---------------------------------------------------------------------------
// Factorizations

struct SvdResult {
  Matrix left;                 // W
  std::vector<double> sigma;   // descending, nonnegative
  Matrix right;                // V, with A = W diag(sigma) V^*
};

/// One-sided (Hestenes) Jacobi SVD of a square matrix. Deterministic sweep
/// order; W is completed to a unitary when A is rank deficient.
SvdResult svd(const Matrix& a);

struct PolarResult {
  Matrix unitary;   // Uf = W V^*
  Matrix positive;  // P = V Sigma V^*, X = Uf P
};

PolarResult polar_unitary(const Matrix& x);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns, A = V diag(values) V^*
};

/// Cyclic Jacobi rotations. Throws `InvalidArgument` when
/// |A - A^*|_max > 1e-8 (1 + |A|_max).
HermitianEigen hermitian_eigen(const Matrix& a);
std::vector<double> hermitian_eigvals(const Matrix& a);

}  // namespace blocktrid
