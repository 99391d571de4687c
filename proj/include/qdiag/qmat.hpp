// qmat.hpp
// Small dense complex linear algebra for qubit states: Kronecker products,
// Hermitian spectra, determinants, partial trace and partial transpose.
//
// Basis convention: qubit 0 is the leftmost tensor factor, i.e. the most
// significant bit of a basis index. |b0 b1 ... b_{N-1}> has index
// sum_k b_k * 2^(N-1-k); the two-qubit order is |00>,|01>,|10>,|11>.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qdiag {

using cplx = std::complex<double>;

/// Jacobi stopping threshold and the general "equal within rounding" scale.
inline constexpr double kEigTol = 1e-12;
/// Max |m(i,j) - conj(m(j,i))| accepted as Hermitian.
inline constexpr double kHermTol = 1e-10;

/// Thrown when an argument lies outside an operation's domain (bad
/// dimensions, out-of-range indices, n too small, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(checked_size(rows, cols)) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != checked_size(rows, cols)) {
      throw DomainError("ComplexMatrix: entry count does not match rows*cols");
    }
    for (const cplx& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError("ComplexMatrix: non-finite entry");
      }
    }
  }

  /// Row-major literal, e.g. from_rows({{1, 0}, {0, 1}}).
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<cplx> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
      if (row.size() != c) throw DomainError("ComplexMatrix::from_rows: ragged rows");
      entries.insert(entries.end(), row.begin(), row.end());
    }
    return ComplexMatrix(r, c, std::move(entries));
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const cplx> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  static ComplexMatrix diagonal(std::initializer_list<cplx> diag) {
    return diagonal(std::span<const cplx>(diag.begin(), diag.size()));
  }

  /// Column vector.
  static ComplexMatrix column(std::span<const cplx> v) {
    return ComplexMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const cplx> entries() const noexcept { return data_; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  cplx trace() const {
    require_square("trace");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }

  ComplexMatrix& operator*=(cplx s) {
    for (cplx& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("matrix product: inner dimensions differ");
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

  /// Largest entrywise |a(i,j) - b(i,j)|.
  friend double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same_shape(b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data_.size(); ++k) m = std::max(m, std::abs(a.data_[k] - b.data_[k]));
    return m;
  }

 private:
  // Dense matrices beyond 2^28 entries (4 GiB) are refused outright.
  static std::size_t checked_size(std::size_t rows, std::size_t cols) {
    constexpr std::size_t kMaxEntries = std::size_t{1} << 28;
    if (rows == 0 || cols == 0) throw DomainError("ComplexMatrix: dimensions must be positive");
    if (rows > kMaxEntries / cols) throw DomainError("ComplexMatrix: dimensions exceed the dense-matrix memory limit");
    return rows * cols;
  }

  void require_square(const char* what) const {
    if (!is_square()) throw DomainError(std::string(what) + ": matrix is not square");
  }

  void require_same_shape(const ComplexMatrix& o, const char* what) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError(std::string(what) + ": shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Ordered pair of distinct qubit indices; `first` becomes the leading
/// tensor factor of a reduced two-qubit state.
struct QubitPair {
  int first = 0;
  int second = 1;
  friend bool operator==(const QubitPair&, const QubitPair&) = default;
};

namespace pauli {
inline ComplexMatrix I() { return ComplexMatrix::identity(2); }
inline ComplexMatrix X() { return ComplexMatrix::from_rows({{0, 1}, {1, 0}}); }
inline ComplexMatrix Y() { return ComplexMatrix::from_rows({{0, cplx(0, -1)}, {cplx(0, 1), 0}}); }
inline ComplexMatrix Z() { return ComplexMatrix::from_rows({{1, 0}, {0, -1}}); }
/// sigma_1, sigma_2, sigma_3 for k = 0, 1, 2.
inline ComplexMatrix sigma(int k) {
  switch (k) {
    case 0: return X();
    case 1: return Y();
    case 2: return Z();
    default: throw DomainError("pauli::sigma: index must be 0, 1 or 2");
  }
}
}  // namespace pauli

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

/// Largest |m(i,j) - conj(m(j,i))| with the pair where it occurs.
struct HermiticityDefect {
  double magnitude = 0.0;
  std::size_t row = 0;
  std::size_t col = 0;
};

inline HermiticityDefect hermiticity_defect(const ComplexMatrix& m) {
  if (!m.is_square()) throw DomainError("hermiticity_defect: matrix is not square");
  HermiticityDefect worst;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) {
      const double d = std::abs(m(i, j) - std::conj(m(j, i)));
      if (d > worst.magnitude) worst = {d, i, j};
    }
  return worst;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kHermTol) {
  return m.is_square() && hermiticity_defect(m).magnitude <= tol;
}

namespace detail {

// Cyclic Jacobi on a real symmetric n x n matrix stored row-major. Sweeps
// until the off-diagonal Frobenius norm drops below kEigTol (relative to the
// matrix scale when that exceeds one), then runs one more sweep to settle
// rounding. Returns the diagonal, unsorted.
inline std::vector<double> jacobi_symmetric(std::vector<double> a, std::size_t n) {
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += at(i, j) * at(i, j);
    return std::sqrt(s);
  };
  double scale = 0.0;
  for (double x : a) scale += x * x;
  scale = std::max(1.0, std::sqrt(scale));

  constexpr int kMaxSweeps = 100;
  bool settling = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_norm() < kEigTol * scale) {
      if (settling) break;
      settling = true;
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
      }
  }
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = at(i, i);
  return diag;
}

inline cplx laplace_determinant(const ComplexMatrix& m, std::vector<std::size_t>& rows_left, std::size_t col) {
  const std::size_t n = rows_left.size();
  if (n == 1) return m(rows_left[0], col);
  if (n == 2) {
    return m(rows_left[0], col) * m(rows_left[1], col + 1) - m(rows_left[1], col) * m(rows_left[0], col + 1);
  }
  cplx det = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = rows_left[k];
    const cplx pivot = m(r, col);
    if (pivot == cplx{}) continue;
    std::vector<std::size_t> minor_rows;
    minor_rows.reserve(n - 1);
    for (std::size_t t = 0; t < n; ++t)
      if (t != k) minor_rows.push_back(rows_left[t]);
    const cplx minor = laplace_determinant(m, minor_rows, col + 1);
    det += (k % 2 == 0 ? 1.0 : -1.0) * pivot * minor;
  }
  return det;
}

inline cplx lu_determinant(ComplexMatrix m) {
  const std::size_t n = m.rows();
  cplx det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    if (m(piv, k) == cplx{}) return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      det = -det;
    }
    det *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

}  // namespace detail

/// Eigenvalues of a real symmetric matrix (row-major), ascending.
inline std::vector<double> symmetric_eigenvalues(std::span<const double> a, std::size_t n) {
  if (a.size() != n * n) throw DomainError("symmetric_eigenvalues: size mismatch");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(a[i * n + j] - a[j * n + i]) > kHermTol) {
        std::ostringstream msg;
        msg << "symmetric_eigenvalues: entries (" << i << "," << j << ") and (" << j << "," << i << ") differ";
        throw DomainError(msg.str());
      }
  auto ev = detail::jacobi_symmetric(std::vector<double>(a.begin(), a.end()), n);
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Eigenvalues of a Hermitian matrix, ascending. Uses the real symmetric
/// embedding [[Re, -Im], [Im, Re]], whose spectrum is each eigenvalue twice.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (!m.is_square()) throw DomainError("hermitian_eigenvalues: matrix is not square");
  const HermiticityDefect defect = hermiticity_defect(m);
  if (defect.magnitude > kHermTol) {
    std::ostringstream msg;
    msg << "hermitian_eigenvalues: matrix is not Hermitian, |m(" << defect.row << "," << defect.col << ") - conj(m("
        << defect.col << "," << defect.row << "))| = " << defect.magnitude;
    throw DomainError(msg.str());
  }
  const std::size_t n = m.rows();
  const std::size_t n2 = 2 * n;
  std::vector<double> emb(n2 * n2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      // Symmetrize so rounding-level defects cannot break the embedding.
      const cplx z = 0.5 * (m(i, j) + std::conj(m(j, i)));
      emb[i * n2 + j] = z.real();
      emb[(i + n) * n2 + (j + n)] = z.real();
      emb[i * n2 + (j + n)] = -z.imag();
      emb[(i + n) * n2 + j] = z.imag();
    }
  auto doubled = detail::jacobi_symmetric(std::move(emb), n2);
  std::sort(doubled.begin(), doubled.end());
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
  return ev;
}

/// Cofactor expansion up to 4x4, partial-pivot LU beyond.
inline cplx determinant(const ComplexMatrix& m) {
  if (!m.is_square()) throw DomainError("determinant: matrix is not square");
  if (m.rows() > 4) return detail::lu_determinant(m);
  std::vector<std::size_t> rows(m.rows());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return detail::laplace_determinant(m, rows, 0);
}

/// Reduces a 2^n x 2^n density matrix onto the ordered qubit pair `keep`.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, int n_qubits, QubitPair keep) {
  if (n_qubits < 2 || n_qubits > 24) throw DomainError("partial_trace: n_qubits must lie in [2, 24]");
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (rho.rows() != dim || rho.cols() != dim) throw DomainError("partial_trace: matrix is not 2^n x 2^n");
  if (keep.first < 0 || keep.first >= n_qubits || keep.second < 0 || keep.second >= n_qubits) {
    throw DomainError("partial_trace: kept qubit index out of range");
  }
  if (keep.first == keep.second) throw DomainError("partial_trace: kept qubit indices must differ");

  const std::size_t bit_a = std::size_t{1} << (n_qubits - 1 - keep.first);
  const std::size_t bit_b = std::size_t{1} << (n_qubits - 1 - keep.second);
  const std::size_t kept_mask = bit_a | bit_b;
  auto embed = [&](std::size_t local, std::size_t rest) {
    return rest | ((local & 2) ? bit_a : 0) | ((local & 1) ? bit_b : 0);
  };

  ComplexMatrix out(4, 4);
  for (std::size_t rest = 0; rest < dim; ++rest) {
    if (rest & kept_mask) continue;
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) out(r, c) += rho(embed(r, rest), embed(c, rest));
  }
  return out;
}

/// Transposes the second-qubit indices of a 4x4 operator:
/// out(m mu, n nu) = rho(m nu, n mu).
inline ComplexMatrix partial_transpose_2(const ComplexMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw DomainError("partial_transpose_2: matrix must be 4x4");
  ComplexMatrix out(4, 4);
  for (std::size_t m = 0; m < 2; ++m)
    for (std::size_t mu = 0; mu < 2; ++mu)
      for (std::size_t n = 0; n < 2; ++n)
        for (std::size_t nu = 0; nu < 2; ++nu) out(2 * m + mu, 2 * n + nu) = rho(2 * m + nu, 2 * n + mu);
  return out;
}

using RealMatrix3 = std::array<std::array<double, 3>, 3>;

/// Singular values of a real 3x3 matrix, descending, by one-sided (Hestenes)
/// Jacobi. Accurate to rounding in absolute terms even for zero singular
/// values, which sqrt(eig(C^T C)) is not.
inline std::array<double, 3> singular_values(const RealMatrix3& c) {
  RealMatrix3 a = c;
  auto col_dot = [&](int p, int q) { return a[0][p] * a[0][q] + a[1][p] * a[1][q] + a[2][p] * a[2][q]; };
  for (int sweep = 0; sweep < 60; ++sweep) {
    double worst = 0.0;
    for (int p = 0; p < 2; ++p)
      for (int q = p + 1; q < 3; ++q) {
        const double alpha = col_dot(p, p), beta = col_dot(q, q), gamma = col_dot(p, q);
        if (gamma == 0.0) continue;
        worst = std::max(worst, std::abs(gamma) / std::sqrt(alpha * beta));
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (int k = 0; k < 3; ++k) {
          const double ap = a[k][p], aq = a[k][q];
          a[k][p] = cs * ap - sn * aq;
          a[k][q] = sn * ap + cs * aq;
        }
      }
    if (worst < 1e-15) break;
  }
  std::array<double, 3> sv{};
  for (int j = 0; j < 3; ++j) sv[j] = std::sqrt(col_dot(j, j));
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

}  // namespace qdiag
