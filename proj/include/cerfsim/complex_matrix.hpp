// Copyright 2026 The cerfsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cerfsim {

using Complex = std::complex<double>;

/// Base class for all domain errors thrown by this library.
class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class NotHermitian : public Error {
  using Error::Error;
};
class DimensionMismatch : public Error {
  using Error::Error;
};
class NotPositive : public Error {
  using Error::Error;
};
class OutOfRange : public Error {
  using Error::Error;
};
class ConstraintViolated : public Error {
  using Error::Error;
};
class NegativeParameter : public Error {
  using Error::Error;
};
class NotNormalized : public Error {
  using Error::Error;
};
class UnsupportedScenario : public Error {
  using Error::Error;
};
class GridMismatch : public Error {
  using Error::Error;
};
class EmptyTrace : public Error {
  using Error::Error;
};

/// Hermiticity tolerance accepted by the eigenroutines; inputs within this
/// bound are symmetrized as (a + a†)/2 before decomposition.
inline constexpr double kHermTol = 1e-10;

/// Dense square matrix of complex doubles, row-major, bounds-checked.
/// Sized for the Hilbert spaces handled here (dims 2..9); the routines
/// accept any positive dimension.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(int dim) : dim_(dim), data_(check_dim(dim) * dim) {}

  ComplexMatrix(int dim, std::initializer_list<Complex> entries)
      : dim_(dim), data_(entries) {
    check_dim(dim);
    if (static_cast<int>(data_.size()) != dim * dim)
      throw DimensionMismatch("ComplexMatrix: expected " +
                              std::to_string(dim * dim) + " entries, got " +
                              std::to_string(data_.size()));
  }

  static ComplexMatrix identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  int dim() const { return dim_; }

  Complex& operator()(int r, int c) {
    check_index(r, c);
    return data_[static_cast<std::size_t>(r) * dim_ + c];
  }
  const Complex& operator()(int r, int c) const {
    check_index(r, c);
    return data_[static_cast<std::size_t>(r) * dim_ + c];
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    check_same_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    check_same_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    return a += b;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    return a -= b;
  }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

  ComplexMatrix operator*(const ComplexMatrix& o) const {
    check_same_dim(o);
    ComplexMatrix out(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < dim_; ++k) {
        const Complex aik = data_[static_cast<std::size_t>(i) * dim_ + k];
        if (aik == Complex{}) continue;
        for (int j = 0; j < dim_; ++j)
          out.data_[static_cast<std::size_t>(i) * dim_ + j] +=
              aik * o.data_[static_cast<std::size_t>(k) * dim_ + j];
      }
    return out;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) out(i, j) = std::conj((*this)(j, i));
    return out;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix out(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) out(i, j) = (*this)(j, i);
    return out;
  }

  Complex trace() const {
    Complex t{};
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  /// max_ij |a(i,j) - conj(a(j,i))|
  double hermiticity_defect() const {
    double m = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j)
        m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
  }

  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.dim_ == b.dim_ && a.data_ == b.data_;
  }

 private:
  static int check_dim(int dim) {
    if (dim <= 0) throw DimensionMismatch("ComplexMatrix: dim must be >= 1");
    return dim;
  }
  void check_index(int r, int c) const {
    if (r < 0 || r >= dim_ || c < 0 || c >= dim_)
      throw OutOfRange("ComplexMatrix: index (" + std::to_string(r) + "," +
                       std::to_string(c) + ") out of bounds for dim " +
                       std::to_string(dim_));
  }
  void check_same_dim(const ComplexMatrix& o) const {
    if (o.dim_ != dim_)
      throw DimensionMismatch("ComplexMatrix: dimension mismatch " +
                              std::to_string(dim_) + " vs " +
                              std::to_string(o.dim_));
  }

  int dim_;
  std::vector<Complex> data_;
};

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

/// (a + a†)/2
inline ComplexMatrix symmetrize(const ComplexMatrix& a) {
  ComplexMatrix out(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      out(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return out;
}

/// Kronecker product in |a> ⊗ |b> row-major composite ordering:
/// out((i*db+k),(j*db+l)) = a(i,j) * b(k,l).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int da = a.dim(), db = b.dim();
  ComplexMatrix out(da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l)
          out(i * db + k, j * db + l) = aij * b(k, l);
    }
  return out;
}

struct HermitianEig {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, unitary
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. The input must be Hermitian within kHermTol and is
/// symmetrized before the iteration. Eigenvalues are returned ascending
/// with matching eigenvector columns.
inline HermitianEig hermitian_eig(const ComplexMatrix& a) {
  const double defect = a.hermiticity_defect();
  if (defect > kHermTol)
    throw NotHermitian("hermitian_eig: defect " + std::to_string(defect) +
                       " exceeds tolerance");
  const int n = a.dim();
  ComplexMatrix m = symmetrize(a);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = std::max(1.0, m.max_abs());

  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(m(p, q)));
    if (off <= 1e-16 * scale) break;

    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const Complex mpq = m(p, q);
        const double absb = std::abs(mpq);
        if (absb <= 1e-18 * scale) continue;
        const Complex phase = mpq / absb;
        const double app = m(p, p).real();
        const double aqq = m(q, q).real();
        // Real Jacobi rotation on the phase-adjusted 2x2 block; t is the
        // smaller root of t^2 - 2*theta*t - 1 = 0, which annihilates the
        // pivot.
        const double theta = (app - aqq) / (2.0 * absb);
        const double t =
            (theta >= 0.0 ? -1.0 : 1.0) /
            (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J_pp = c, J_pq = s, J_qp = -conj(phase) s, J_qq = conj(phase) c.
        const Complex jqp = -std::conj(phase) * s;
        const Complex jqq = std::conj(phase) * c;
        for (int i = 0; i < n; ++i) {  // M <- M J
          const Complex mp = m(i, p), mq = m(i, q);
          m(i, p) = c * mp + jqp * mq;
          m(i, q) = s * mp + jqq * mq;
        }
        for (int j = 0; j < n; ++j) {  // M <- J† M
          const Complex mp = m(p, j), mq = m(q, j);
          m(p, j) = c * mp + std::conj(jqp) * mq;
          m(q, j) = s * mp + std::conj(jqq) * mq;
        }
        for (int i = 0; i < n; ++i) {  // V <- V J
          const Complex vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp + jqp * vq;
          v(i, q) = s * vp + jqq * vq;
        }
      }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return m(i, i).real() < m(j, j).real(); });

  HermitianEig out{std::vector<double>(n), ComplexMatrix(n)};
  for (int k = 0; k < n; ++k) {
    out.eigenvalues[k] = m(order[k], order[k]).real();
    for (int i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// U = exp(-i h t) for Hermitian h, via the eigendecomposition. t = 0
/// returns the exact identity.
inline ComplexMatrix unitary_exp(const ComplexMatrix& h, double t) {
  if (t == 0.0) return ComplexMatrix::identity(h.dim());
  const HermitianEig eig = hermitian_eig(h);
  const int n = h.dim();
  ComplexMatrix scaled(n);  // V exp(-i λ t)
  for (int k = 0; k < n; ++k) {
    const Complex ph = std::exp(Complex(0.0, -eig.eigenvalues[k] * t));
    for (int i = 0; i < n; ++i) scaled(i, k) = eig.eigenvectors(i, k) * ph;
  }
  return scaled * eig.eigenvectors.adjoint();
}

/// Trace norm Σ|λ_i| of a Hermitian matrix.
inline double trace_norm(const ComplexMatrix& a) {
  const HermitianEig eig = hermitian_eig(a);
  double sum = 0.0;
  for (double ev : eig.eigenvalues) sum += std::abs(ev);
  return sum;
}

/// Partial transpose on the second tensor factor of a dim_a x dim_b
/// bipartite operator: <a i| out |b j> = <a j| in |b i>.
inline ComplexMatrix partial_transpose(const ComplexMatrix& rho, int dim_a,
                                       int dim_b) {
  if (dim_a <= 0 || dim_b <= 0 || dim_a * dim_b != rho.dim())
    throw DimensionMismatch("partial_transpose: " + std::to_string(dim_a) +
                            "x" + std::to_string(dim_b) +
                            " does not factor dim " +
                            std::to_string(rho.dim()));
  ComplexMatrix out(rho.dim());
  for (int a = 0; a < dim_a; ++a)
    for (int b = 0; b < dim_a; ++b)
      for (int i = 0; i < dim_b; ++i)
        for (int j = 0; j < dim_b; ++j)
          out(a * dim_b + i, b * dim_b + j) = rho(a * dim_b + j, b * dim_b + i);
  return out;
}

}  // namespace cerfsim
