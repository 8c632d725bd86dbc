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

#include <cmath>
#include <string>
#include <utility>
#include <variant>

#include "cerfsim/complex_matrix.hpp"

namespace cerfsim {

/// Density-matrix invariant tolerances.
inline constexpr double kDensityHermTol = 1e-12;
inline constexpr double kDensityTraceTol = 1e-12;
inline constexpr double kDensityEigFloor = -1e-10;

struct DensityValidation {
  double hermiticity_defect = 0.0;
  double trace_defect = 0.0;     // |tr - 1|
  double min_eigenvalue = 0.0;

  bool pass() const {
    return hermiticity_defect <= kDensityHermTol &&
           trace_defect <= kDensityTraceTol &&
           min_eigenvalue >= kDensityEigFloor;
  }
};

/// Report-style check of the density-matrix invariants for a raw matrix
/// claimed to live on a dim_a x dim_b bipartition.
inline DensityValidation validate_density(const ComplexMatrix& mat, int dim_a,
                                          int dim_b) {
  if (dim_a * dim_b != mat.dim())
    throw DimensionMismatch("validate_density: " + std::to_string(dim_a) +
                            "x" + std::to_string(dim_b) +
                            " does not factor dim " +
                            std::to_string(mat.dim()));
  DensityValidation v;
  v.hermiticity_defect = mat.hermiticity_defect();
  v.trace_defect = std::abs(mat.trace() - Complex(1.0, 0.0));
  // Eigenvalues of the symmetrized matrix; for inputs far from Hermitian
  // the minimum eigenvalue is still a useful diagnostic.
  const ComplexMatrix sym = symmetrize(mat);
  const HermitianEig eig = hermitian_eig(sym);
  v.min_eigenvalue = eig.eigenvalues.front();
  return v;
}

/// A validated bipartite density matrix: Hermitian, unit trace, positive
/// semidefinite within tolerance.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix mat, int dim_a, int dim_b)
      : mat_(std::move(mat)), dim_a_(dim_a), dim_b_(dim_b) {
    const DensityValidation v = validate_density(mat_, dim_a_, dim_b_);
    if (v.hermiticity_defect > kDensityHermTol)
      throw NotHermitian("DensityMatrix: hermiticity defect " +
                         std::to_string(v.hermiticity_defect));
    if (v.trace_defect > kDensityTraceTol)
      throw Error("DensityMatrix: trace defect " +
                  std::to_string(v.trace_defect));
    if (v.min_eigenvalue < kDensityEigFloor)
      throw NotPositive("DensityMatrix: minimum eigenvalue " +
                        std::to_string(v.min_eigenvalue));
  }

  /// Bypasses validation; intended for test injection of raw matrices.
  static DensityMatrix unchecked(ComplexMatrix mat, int dim_a, int dim_b) {
    return DensityMatrix(Unvalidated{}, std::move(mat), dim_a, dim_b);
  }

  const ComplexMatrix& mat() const { return mat_; }
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  int dim() const { return mat_.dim(); }

 private:
  struct Unvalidated {};
  DensityMatrix(Unvalidated, ComplexMatrix mat, int dim_a, int dim_b)
      : mat_(std::move(mat)), dim_a_(dim_a), dim_b_(dim_b) {}

  ComplexMatrix mat_;
  int dim_a_;
  int dim_b_;
};

inline DensityValidation validate_density(const DensityMatrix& rho) {
  return validate_density(rho.mat(), rho.dim_a(), rho.dim_b());
}

// ---------------------------------------------------------------------------
// Initial-state families.
// ---------------------------------------------------------------------------

/// Two-qubit X state with correlation coefficients c11, c22, c33.
struct XState {
  double c11, c22, c33;
};

/// Qubit-qutrit one-parameter family, p in [0, 0.5].
struct OneParam {
  double p;
};

/// Qubit-qutrit two-parameter family with 2*alpha + 3*beta + gamma = 1.
struct TwoParam {
  double alpha, beta, gamma;
};

/// Qutrit-qutrit Schmidt-form pure state a1|00> + a2|11> + a3|22>,
/// real coefficients, normalized.
struct QutritPure {
  double a1, a2, a3;
};

using StateFamily = std::variant<XState, OneParam, TwoParam, QutritPure>;

inline std::pair<int, int> family_dims(const StateFamily& family) {
  struct Visitor {
    std::pair<int, int> operator()(const XState&) const { return {2, 2}; }
    std::pair<int, int> operator()(const OneParam&) const { return {2, 3}; }
    std::pair<int, int> operator()(const TwoParam&) const { return {2, 3}; }
    std::pair<int, int> operator()(const QutritPure&) const { return {3, 3}; }
  };
  return std::visit(Visitor{}, family);
}

/// X state on the computational basis 00,01,10,11. The diagonal weights
/// (1±c33)/2 are split over {00,11} and {01,10}; the coherence weights
/// (c11∓c22)/2 are split over the anti-diagonal pairs. Throws NotPositive
/// when the c-triple does not yield a state.
inline DensityMatrix make_x_state(double c11, double c22, double c33) {
  ComplexMatrix m(4);
  m(0, 0) = m(3, 3) = 0.25 * (1.0 + c33);
  m(1, 1) = m(2, 2) = 0.25 * (1.0 - c33);
  m(0, 3) = m(3, 0) = 0.25 * (c11 - c22);
  m(1, 2) = m(2, 1) = 0.25 * (c11 + c22);
  return DensityMatrix(std::move(m), 2, 2);
}

/// One-parameter qubit-qutrit family on the basis 00,01,02,10,11,12.
inline DensityMatrix make_one_param(double p) {
  if (p < 0.0 || p > 0.5)
    throw OutOfRange("make_one_param: p = " + std::to_string(p) +
                     " outside [0, 0.5]");
  ComplexMatrix m(6);
  const double w = 0.5 * p;
  const double u = 0.5 * (1.0 - 2.0 * p);
  m(0, 0) = m(1, 1) = m(4, 4) = m(5, 5) = w;  // 00, 01, 11, 12
  m(0, 5) = m(5, 0) = w;                      // |00><12| + h.c.
  m(2, 2) = m(3, 3) = u;                      // 02, 10
  m(2, 3) = m(3, 2) = u;                      // |02><10| + h.c.
  return DensityMatrix(std::move(m), 2, 3);
}

/// Two-parameter qubit-qutrit family; parameters must be nonnegative and
/// satisfy 2*alpha + 3*beta + gamma = 1. The spectrum is the multiset
/// {alpha, alpha, beta, beta, beta, gamma} by construction.
inline DensityMatrix make_two_param(double alpha, double beta, double gamma) {
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0)
    throw NegativeParameter("make_two_param: parameters must be >= 0, got (" +
                            std::to_string(alpha) + ", " +
                            std::to_string(beta) + ", " +
                            std::to_string(gamma) + ")");
  const double constraint = 2.0 * alpha + 3.0 * beta + gamma;
  if (std::abs(constraint - 1.0) > 1e-12)
    throw ConstraintViolated(
        "make_two_param: 2*alpha + 3*beta + gamma = " +
        std::to_string(constraint) + ", must equal 1");
  ComplexMatrix m(6);
  m(2, 2) = m(5, 5) = alpha;                   // 02, 12
  m(0, 0) = m(4, 4) = beta;                    // 00, 11
  m(1, 1) = m(3, 3) = 0.5 * (beta + gamma);    // 01, 10
  m(1, 3) = m(3, 1) = 0.5 * (beta - gamma);    // |01><10| + h.c.
  return DensityMatrix(std::move(m), 2, 3);
}

/// Rank-1 projector onto a1|00> + a2|11> + a3|22| on the basis 00..22.
inline DensityMatrix make_qutrit_pure(double a1, double a2, double a3) {
  const double norm2 = a1 * a1 + a2 * a2 + a3 * a3;
  if (std::abs(norm2 - 1.0) > 1e-12)
    throw NotNormalized("make_qutrit_pure: a1^2 + a2^2 + a3^2 = " +
                        std::to_string(norm2) + ", must equal 1");
  const double amp[3] = {a1, a2, a3};
  ComplexMatrix m(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(3 * i + i, 3 * j + j) = amp[i] * amp[j];
  return DensityMatrix(std::move(m), 3, 3);
}

inline DensityMatrix make_initial(const StateFamily& family) {
  struct Visitor {
    DensityMatrix operator()(const XState& s) const {
      return make_x_state(s.c11, s.c22, s.c33);
    }
    DensityMatrix operator()(const OneParam& s) const {
      return make_one_param(s.p);
    }
    DensityMatrix operator()(const TwoParam& s) const {
      return make_two_param(s.alpha, s.beta, s.gamma);
    }
    DensityMatrix operator()(const QutritPure& s) const {
      return make_qutrit_pure(s.a1, s.a2, s.a3);
    }
  };
  return std::visit(Visitor{}, family);
}

inline std::string family_label(const StateFamily& family) {
  struct Visitor {
    std::string operator()(const XState& s) const {
      return "x-state(" + std::to_string(s.c11) + "," + std::to_string(s.c22) +
             "," + std::to_string(s.c33) + ")";
    }
    std::string operator()(const OneParam& s) const {
      return "one-param(" + std::to_string(s.p) + ")";
    }
    std::string operator()(const TwoParam& s) const {
      return "two-param(" + std::to_string(s.alpha) + "," +
             std::to_string(s.beta) + "," + std::to_string(s.gamma) + ")";
    }
    std::string operator()(const QutritPure& s) const {
      return "qutrit-pure(" + std::to_string(s.a1) + "," +
             std::to_string(s.a2) + "," + std::to_string(s.a3) + ")";
    }
  };
  return std::visit(Visitor{}, family);
}

}  // namespace cerfsim
