#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qchan {

using cplx = std::complex<double>;

// Tolerances used across the library. Algebraic identities on 2x2/3x3
// matrices hold to ~1e-15 in double precision; the looser constants absorb
// accumulation over a handful of Kraus terms.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenFloor = -1e-10;
inline constexpr double kBlochTol = 1e-12;
inline constexpr double kEntropyClampTol = 1e-10;

/// Dense complex matrix with 2 or 3 rows/columns. Small enough to live on
/// the stack; all operations return fresh values.
class ComplexMatrix {
 public:
  ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 2 || rows > 3 || cols < 2 || cols > 3) {
      throw std::invalid_argument("ComplexMatrix: dimensions must be 2 or 3");
    }
    data_.fill(cplx{0.0, 0.0});
  }

  static ComplexMatrix identity(int dim) {
    ComplexMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  int dim() const {
    if (!square()) throw std::logic_error("ComplexMatrix: dim() on non-square matrix");
    return rows_;
  }

  cplx& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * 3 + c]; }
  const cplx& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * 3 + c];
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  ComplexMatrix operator+(const ComplexMatrix& o) const {
    require_same_shape(o);
    ComplexMatrix out(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c) + o(r, c);
    return out;
  }

  ComplexMatrix operator-(const ComplexMatrix& o) const {
    require_same_shape(o);
    ComplexMatrix out(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c) - o(r, c);
    return out;
  }

  ComplexMatrix operator*(const ComplexMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("ComplexMatrix: shape mismatch in product");
    ComplexMatrix out(rows_, o.cols_);
    for (int r = 0; r < rows_; ++r) {
      for (int c = 0; c < o.cols_; ++c) {
        cplx acc{0.0, 0.0};
        for (int k = 0; k < cols_; ++k) acc += (*this)(r, k) * o(k, c);
        out(r, c) = acc;
      }
    }
    return out;
  }

  ComplexMatrix scaled(cplx s) const {
    ComplexMatrix out(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c) * s;
    return out;
  }

  cplx trace() const {
    cplx acc{0.0, 0.0};
    for (int i = 0; i < dim(); ++i) acc += (*this)(i, i);
    return acc;
  }

  double max_abs_diff(const ComplexMatrix& o) const {
    require_same_shape(o);
    double worst = 0.0;
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c)
        worst = std::max(worst, std::abs((*this)(r, c) - o(r, c)));
    return worst;
  }

  bool is_hermitian(double tol = kHermitianTol) const {
    if (!square()) return false;
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c)
        if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
    return true;
  }

 private:
  void require_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("ComplexMatrix: shape mismatch");
  }

  int rows_;
  int cols_;
  std::array<cplx, 9> data_;
};

/// Pauli matrix by index (1, 2 or 3).
inline const ComplexMatrix& pauli(int i) {
  static const std::array<ComplexMatrix, 3> sigmas = [] {
    ComplexMatrix sx(2, 2), sy(2, 2), sz(2, 2);
    sx(0, 1) = 1.0;
    sx(1, 0) = 1.0;
    sy(0, 1) = cplx{0.0, -1.0};
    sy(1, 0) = cplx{0.0, 1.0};
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    return std::array<ComplexMatrix, 3>{sx, sy, sz};
  }();
  if (i < 1 || i > 3) throw std::invalid_argument("pauli: index must be 1, 2 or 3");
  return sigmas[static_cast<std::size_t>(i - 1)];
}

/// Real 3-vector of expectation values along the three Pauli axes.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline BlochVector bloch_from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

/// Eigenvalues of a Hermitian matrix, sorted descending. 2x2 matrices use
/// the trace/determinant closed form. 3x3 matrices must be block diagonal:
/// a 2x2 block in the upper-left corner plus a scalar at (2,2); anything
/// else is rejected.
inline std::vector<double> eigenvalues_hermitian(const ComplexMatrix& m) {
  if (!m.square()) throw std::invalid_argument("not Hermitian");
  if (!m.is_hermitian()) throw std::invalid_argument("not Hermitian");
  auto eigen2 = [](const ComplexMatrix& b, int r0, int c0) {
    double a = b(r0, c0).real();
    double d = b(r0 + 1, c0 + 1).real();
    double off = std::abs(b(r0, c0 + 1));
    double mean = 0.5 * (a + d);
    double disc = 0.25 * (a - d) * (a - d) + off * off;
    double root = std::sqrt(std::max(disc, 0.0));
    return std::array<double, 2>{mean + root, mean - root};
  };
  if (m.dim() == 2) {
    auto ev = eigen2(m, 0, 0);
    return {ev[0], ev[1]};
  }
  for (auto [r, c] : {std::pair{0, 2}, std::pair{1, 2}, std::pair{2, 0}, std::pair{2, 1}}) {
    if (std::abs(m(r, c)) > kHermitianTol) throw std::invalid_argument("unsupported 3x3 shape");
  }
  auto ev = eigen2(m, 0, 0);
  std::vector<double> out{ev[0], ev[1], m(2, 2).real()};
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// Binary entropy in bits; H(0) = H(1) = 0.
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("binary_entropy: argument outside [0,1]");
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

namespace detail {

// Clamp a would-be probability whose floating-point residue strayed just
// outside [0,1].
inline double clamp_probability(double x, double tol = kEntropyClampTol) {
  if (x < 0.0 && x >= -tol) return 0.0;
  if (x > 1.0 && x <= 1.0 + tol) return 1.0;
  return x;
}

inline double binary_entropy_clamped(double x) { return binary_entropy(clamp_probability(x)); }

}  // namespace detail

/// Shannon entropy (base 2) of an eigenvalue list, with 0*log(0) = 0.
/// Eigenvalues within 1e-10 of 0 or 1 are clamped before taking logs.
inline double entropy_from_eigenvalues(const std::vector<double>& eigenvalues) {
  double s = 0.0;
  for (double lambda : eigenvalues) {
    double p = detail::clamp_probability(lambda);
    if (p < 0.0 || p > 1.0) throw std::domain_error("entropy: eigenvalue outside [0,1]");
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

/// Unit-trace positive-semidefinite Hermitian matrix. Construction
/// validates all three properties and rejects anything off by more than the
/// library tolerances.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (!m_.square()) throw std::invalid_argument("density matrix must be square");
    if (!m_.is_hermitian()) throw std::invalid_argument("density matrix not Hermitian");
    cplx tr = m_.trace();
    if (std::abs(tr - cplx{1.0, 0.0}) > kTraceTol)
      throw std::invalid_argument("density matrix trace != 1");
    for (double lambda : eigenvalues_hermitian(m_)) {
      if (lambda < kEigenFloor)
        throw std::invalid_argument("density matrix not positive semidefinite");
    }
  }

  int dim() const { return m_.dim(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

/// Von Neumann entropy in bits.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy_from_eigenvalues(eigenvalues_hermitian(rho.matrix()));
}

inline DensityMatrix bloch_to_density(const BlochVector& w) {
  if (w.norm() > 1.0 + kBlochTol) throw std::invalid_argument("outside Bloch ball");
  ComplexMatrix m(2, 2);
  m(0, 0) = 0.5 * (1.0 + w.z);
  m(1, 1) = 0.5 * (1.0 - w.z);
  m(0, 1) = 0.5 * cplx{w.x, -w.y};
  m(1, 0) = 0.5 * cplx{w.x, w.y};
  return DensityMatrix(m);
}

inline BlochVector density_to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw std::invalid_argument("density_to_bloch: qubit state required");
  const ComplexMatrix& m = rho.matrix();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

inline DensityMatrix pure_state(double theta, double phi) {
  return bloch_to_density(bloch_from_angles(theta, phi));
}

}  // namespace qchan
