#include "numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "error.hpp"

namespace blocktrid {

namespace {

void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

void require_finite(const Matrix& a, const char* where) {
  require(a.all_finite(), ErrorCode::NonFinite,
          std::string(where) + ": matrix has non-finite entries");
}

void require_square(const Matrix& a, const char* where) {
  require(a.is_square(), ErrorCode::DimensionMismatch,
          std::string(where) + ": matrix is not square");
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  require(data_.size() == rows * cols, ErrorCode::DimensionMismatch,
          "matrix payload has " + std::to_string(data_.size()) +
              " entries, expected " + std::to_string(rows * cols));
  require_finite(*this, "Matrix");
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_columns(std::span<const Vector> columns) {
  if (columns.empty()) return {};
  Matrix m(columns.front().size(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void Matrix::set_column(std::size_t j, std::span<const Complex> values) {
  require(values.size() == rows_, ErrorCode::DimensionMismatch,
          "set_column: length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

Matrix Matrix::block(std::size_t row0, std::size_t col0, std::size_t nrows,
                     std::size_t ncols) const {
  require(row0 + nrows <= rows_ && col0 + ncols <= cols_,
          ErrorCode::DimensionMismatch, "block: out of range");
  Matrix b(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) b(i, j) = (*this)(row0 + i, col0 + j);
  return b;
}

void Matrix::set_block(std::size_t row0, std::size_t col0, const Matrix& values) {
  require(row0 + values.rows() <= rows_ && col0 + values.cols() <= cols_,
          ErrorCode::DimensionMismatch, "set_block: out of range");
  for (std::size_t i = 0; i < values.rows(); ++i)
    for (std::size_t j = 0; j < values.cols(); ++j)
      (*this)(row0 + i, col0 + j) = values(i, j);
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

Matrix adjoint(const Matrix& a) {
  Matrix r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
  return r;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), ErrorCode::DimensionMismatch,
          "multiply: inner dimensions differ");
  Matrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          ErrorCode::DimensionMismatch, "subtract: shape mismatch");
  Matrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

Vector apply(const Matrix& a, std::span<const Complex> v) {
  require(a.cols() == v.size(), ErrorCode::DimensionMismatch,
          "apply: vector length mismatch");
  Vector r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * v[j];
    r[i] = acc;
  }
  return r;
}

Vector apply_adjoint(const Matrix& a, std::span<const Complex> v) {
  require(a.rows() == v.size(), ErrorCode::DimensionMismatch,
          "apply_adjoint: vector length mismatch");
  Vector r(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r[j] += std::conj(a(i, j)) * v[i];
  return r;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (const Complex& z : a.data()) m = std::max(m, std::abs(z));
  return m;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (const Complex& z : a.data()) s += std::norm(z);
  return std::sqrt(s);
}

Complex trace(const Matrix& a) {
  Complex t(0.0, 0.0);
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
  return t;
}

double unitarity_residual(const Matrix& u) {
  const Matrix g = multiply(adjoint(u), u);
  double r = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      r = std::max(r, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return r;
}

double hermitian_residual(const Matrix& a) {
  require_square(a, "hermitian_residual");
  double r = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      r = std::max(r, std::abs(a(i, j) - std::conj(a(j, i))));
  return r;
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
  require(x.size() == y.size(), ErrorCode::DimensionMismatch,
          "inner: length mismatch");
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

double norm(std::span<const Complex> x) {
  double s = 0.0;
  for (const Complex& z : x) s += std::norm(z);
  return std::sqrt(s);
}

Vector unit_vector(std::size_t dim, std::size_t index) {
  require(index < dim, ErrorCode::InvalidArgument, "unit_vector: index out of range");
  Vector v(dim);
  v[index] = 1.0;
  return v;
}

GsOutcome mgs_append(std::span<const Vector> basis, std::span<const Complex> v,
                     double tol) {
  require(tol > 0.0, ErrorCode::InvalidArgument, "mgs_append: tol must be positive");
  for (const Vector& b : basis)
    require(b.size() == v.size(), ErrorCode::DimensionMismatch,
            "mgs_append: basis vector length differs from v");

  Vector w(v.begin(), v.end());
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vector& b : basis) {
      const Complex c = inner(b, w);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
    }
  }

  GsOutcome out;
  out.residual_norm = norm(w);
  if (out.residual_norm <= tol * std::max(1.0, norm(v))) {
    out.tag = GsOutcome::Tag::Rejected;
    return out;
  }
  out.tag = GsOutcome::Tag::Accepted;
  for (Complex& z : w) z /= out.residual_norm;
  out.vector = std::move(w);
  return out;
}

SvdResult svd(const Matrix& a) {
  require_square(a, "svd");
  require_finite(a, "svd");
  const std::size_t n = a.rows();

  // Column-major working copies: w[j] is column j of A V.
  std::vector<Vector> w(n), v(n);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = a.column(j);
    v[j] = unit_vector(n, j);
  }

  constexpr double kEps = 1e-15;
  constexpr int kMaxSweeps = 80;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          alpha += std::norm(w[p][i]);
          beta += std::norm(w[q][i]);
        }
        const Complex gamma = inner(w[p], w[q]);
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;

        const Complex phase = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        // [x_p, x_q] <- [x_p, x_q] [[c, s e^{i phi}], [-s e^{-i phi}, c]]
        auto rotate = [&](Vector& xp, Vector& xq) {
          for (std::size_t i = 0; i < n; ++i) {
            const Complex a_p = xp[i];
            const Complex a_q = xq[i];
            xp[i] = c * a_p - s * std::conj(phase) * a_q;
            xq[i] = s * phase * a_p + c * a_q;
          }
        };
        rotate(w[p], w[q]);
        rotate(v[p], v[q]);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm(w[j]);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  const double smax = n == 0 ? 0.0 : sigma[order.front()];
  const double negligible = std::max(smax * 1e-14 * static_cast<double>(n), 1e-300);

  SvdResult out{Matrix(n), std::vector<double>(n), Matrix(n)};
  std::vector<Vector> left;
  left.reserve(n);
  std::vector<std::size_t> deficient;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.sigma[k] = sigma[j];
    out.right.set_column(k, v[j]);
    if (sigma[j] > negligible) {
      Vector u = w[j];
      for (Complex& z : u) z /= sigma[j];
      left.push_back(std::move(u));
    } else {
      deficient.push_back(k);
      left.emplace_back();
    }
  }

  // Complete the left factor to a unitary: fill null directions with the
  // first standard basis vectors independent of what is already there.
  if (!deficient.empty()) {
    std::vector<Vector> accepted;
    for (const Vector& u : left)
      if (!u.empty()) {
        GsOutcome g = mgs_append(accepted, u, 1e-12);
        accepted.push_back(g.accepted() ? g.vector : u);
      }
    std::size_t next_unit = 0;
    for (std::size_t k : deficient) {
      while (next_unit < n) {
        GsOutcome g = mgs_append(accepted, unit_vector(n, next_unit++), 1e-8);
        if (g.accepted()) {
          accepted.push_back(g.vector);
          left[k] = g.vector;
          break;
        }
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) out.left.set_column(k, left[k]);
  return out;
}

PolarResult polar_unitary(const Matrix& x) {
  SvdResult s = svd(x);
  const std::size_t n = x.rows();
  const Matrix vh = adjoint(s.right);
  Matrix sigma_vh(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sigma_vh(i, j) = s.sigma[i] * vh(i, j);

  PolarResult out;
  out.unitary = multiply(s.left, vh);
  out.positive = multiply(s.right, sigma_vh);
  // Symmetrize P so downstream Hermitian checks see rounding only once.
  for (std::size_t i = 0; i < n; ++i) {
    out.positive(i, i) = out.positive(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (out.positive(i, j) + std::conj(out.positive(j, i)));
      out.positive(i, j) = avg;
      out.positive(j, i) = std::conj(avg);
    }
  }
  return out;
}

HermitianEigen hermitian_eigen(const Matrix& a_in) {
  require_square(a_in, "hermitian_eigen");
  require_finite(a_in, "hermitian_eigen");
  require(hermitian_residual(a_in) <= 1e-8 * (1.0 + max_abs(a_in)),
          ErrorCode::InvalidArgument, "hermitian_eigen: matrix is not Hermitian");

  const std::size_t n = a_in.rows();
  Matrix a = a_in;
  Matrix v = Matrix::identity(n);

  // A <- G^* A G on rows/columns (p, q), V <- V G.
  auto rotate = [&](std::size_t p, std::size_t q, Complex g_pp, Complex g_pq,
                    Complex g_qp, Complex g_qq) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex x = a(i, p), y = a(i, q);
      a(i, p) = x * g_pp + y * g_qp;
      a(i, q) = x * g_pq + y * g_qq;
      const Complex vx = v(i, p), vy = v(i, q);
      v(i, p) = vx * g_pp + vy * g_qp;
      v(i, q) = vx * g_pq + vy * g_qq;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const Complex x = a(p, j), y = a(q, j);
      a(p, j) = std::conj(g_pp) * x + std::conj(g_qp) * y;
      a(q, j) = std::conj(g_pq) * x + std::conj(g_qq) * y;
    }
  };

  const double scale = std::max(frobenius_norm(a), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-16 * scale) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double b = std::abs(a(p, q));
        if (b <= 1e-300) continue;
        // Phase on column q makes a(p, q) real and positive.
        const Complex phase = std::conj(a(p, q)) / b;
        rotate(p, q, 1.0, 0.0, 0.0, phase);
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * b);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(p, q, c, s, -s, c);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() < a(y, y).real();
  });

  HermitianEigen out{std::vector<double>(n), Matrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    out.vectors.set_column(k, v.column(order[k]));
  }
  return out;
}

std::vector<double> hermitian_eigvals(const Matrix& a) { return hermitian_eigen(a).values; }

}  // namespace blocktrid
