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

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace cerfsim;
using cerfsim::test::random_hermitian;
using cerfsim::test::random_matrix;

namespace {
const Complex kI(0.0, 1.0);

ComplexMatrix pauli_x() { return ComplexMatrix(2, {0, 1, 1, 0}); }

ComplexMatrix diag(std::vector<double> d) {
  ComplexMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.dim(); ++i) m(i, i) = d[i];
  return m;
}
}  // namespace

TEST_CASE("ComplexMatrix construction and access", "[complex_matrix]") {
  ComplexMatrix m(3);
  CHECK(m.dim() == 3);
  CHECK(m(2, 2) == Complex{});

  CHECK_THROWS_AS(m(3, 0), OutOfRange);
  CHECK_THROWS_AS(m(0, -1), OutOfRange);
  CHECK_THROWS_AS(ComplexMatrix(2, {1, 2, 3}), DimensionMismatch);
  CHECK_THROWS_AS(ComplexMatrix(0), DimensionMismatch);

  const ComplexMatrix id = ComplexMatrix::identity(4);
  CHECK(id.trace() == Complex(4.0, 0.0));
  CHECK(id * id == id);
}

TEST_CASE("kron identity and projector cases", "[complex_matrix][kron]") {
  const auto i2 = ComplexMatrix::identity(2);
  const auto i3 = ComplexMatrix::identity(3);
  CHECK(kron(i2, i3) == ComplexMatrix::identity(6));

  CHECK(kron(diag({1, 0}), diag({1, 0, 0})) == diag({1, 0, 0, 0, 0, 0}));
}

TEST_CASE("kron of sigma_x with identity flips the first factor",
          "[complex_matrix][kron]") {
  // Direct 4x4 expansion: sigma_x ⊗ I = [[0, I],[I, 0]] in 2x2 blocks, so
  // |00> (column 0) maps to |10> (row 2).
  const ComplexMatrix k = kron(pauli_x(), ComplexMatrix::identity(2));
  ComplexMatrix expected(4);
  expected(0, 2) = expected(1, 3) = expected(2, 0) = expected(3, 1) = 1.0;
  CHECK(k == expected);
  CHECK(k(2, 0) == Complex(1.0, 0.0));  // <10| k |00>
}

TEST_CASE("kron is associative on random triples", "[complex_matrix][kron]") {
  std::mt19937 rng(101);
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = random_matrix(2, rng);
    const auto b = random_matrix(2, rng);
    const auto c = random_matrix(2, rng);
    CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) <= 1e-14);
  }
}

TEST_CASE("hermitian_eig on diagonal and Pauli inputs", "[complex_matrix][eig]") {
  const auto e = hermitian_eig(diag({3, 1, 2}));
  CHECK(e.eigenvalues[0] == Catch::Approx(1.0).margin(1e-13));
  CHECK(e.eigenvalues[1] == Catch::Approx(2.0).margin(1e-13));
  CHECK(e.eigenvalues[2] == Catch::Approx(3.0).margin(1e-13));

  const auto p = hermitian_eig(pauli_x());
  CHECK(p.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-13));
  CHECK(p.eigenvalues[1] == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("hermitian_eig 2x2 block against the closed form d±o",
          "[complex_matrix][eig]") {
  // For [[d, o],[o, d]] the eigenvalues are d+o and d-o.
  const double d = 0.2427, o = -0.2573;
  const ComplexMatrix block(2, {d, o, o, d});
  const auto e = hermitian_eig(block);
  CHECK(e.eigenvalues[0] == Catch::Approx(d + o).margin(1e-12));
  CHECK(e.eigenvalues[1] == Catch::Approx(d - o).margin(1e-12));
  CHECK(e.eigenvalues[0] == Catch::Approx(-0.0146).margin(1e-4));
  CHECK(e.eigenvalues[1] == Catch::Approx(0.5).margin(1e-4));
}

TEST_CASE("hermitian_eig reconstructs random Hermitian matrices",
          "[complex_matrix][eig]") {
  std::mt19937 rng(202);
  for (int dim = 2; dim <= 9; ++dim) {
    const ComplexMatrix a = random_hermitian(dim, rng);
    const auto e = hermitian_eig(a);

    ComplexMatrix lambda(dim);
    for (int i = 0; i < dim; ++i) lambda(i, i) = e.eigenvalues[i];
    const ComplexMatrix recon =
        e.eigenvectors * lambda * e.eigenvectors.adjoint();
    CHECK(max_abs_diff(a, recon) <= 1e-10);

    const ComplexMatrix gram =
        e.eigenvectors.adjoint() * e.eigenvectors;
    CHECK(max_abs_diff(gram, ComplexMatrix::identity(dim)) <= 1e-12);

    for (int i = 1; i < dim; ++i)
      CHECK(e.eigenvalues[i - 1] <= e.eigenvalues[i]);
  }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input", "[complex_matrix][eig]") {
  ComplexMatrix m(2);
  m(0, 1) = 1.0;  // no conjugate partner
  CHECK_THROWS_AS(hermitian_eig(m), NotHermitian);

  // Within tolerance the defect is symmetrized away.
  ComplexMatrix near = ComplexMatrix::identity(2);
  near(0, 1) = 1e-11;
  CHECK_NOTHROW(hermitian_eig(near));
}

TEST_CASE("unitary_exp of the zero generator is the exact identity",
          "[complex_matrix][exp]") {
  std::mt19937 rng(7);
  const ComplexMatrix h(3);
  CHECK(unitary_exp(h, 1.7) == ComplexMatrix::identity(3));
  CHECK(unitary_exp(random_hermitian(3, rng), 0.0) ==
        ComplexMatrix::identity(3));
}

TEST_CASE("unitary_exp of the qubit drive is a plane rotation",
          "[complex_matrix][exp]") {
  const ComplexMatrix h = qubit_drive_hamiltonian(1.0, 0.0);
  const double tau = 0.8;
  const ComplexMatrix u = unitary_exp(h, tau);
  ComplexMatrix expected(2);
  expected(0, 0) = expected(1, 1) = std::cos(tau);
  expected(0, 1) = std::sin(tau);
  expected(1, 0) = -std::sin(tau);
  CHECK(max_abs_diff(u, expected) <= 1e-12);

  // Series check at small tau: sum_k (-i h t)^k / k!.
  const double t0 = 0.1;
  ComplexMatrix series = ComplexMatrix::identity(2);
  ComplexMatrix term = ComplexMatrix::identity(2);
  for (int k = 1; k <= 14; ++k) {
    term = term * (h * Complex(0.0, -t0));
    term *= Complex(1.0 / k, 0.0);
    series += term;
  }
  CHECK(max_abs_diff(unitary_exp(h, t0), series) <= 1e-12);
}

TEST_CASE("unitary_exp composes and inverts", "[complex_matrix][exp]") {
  std::mt19937 rng(303);
  const ComplexMatrix h = random_hermitian(3, rng);

  const ComplexMatrix round_trip =
      unitary_exp(h, kPi) * unitary_exp(h, -kPi);
  CHECK(max_abs_diff(round_trip, ComplexMatrix::identity(3)) <= 1e-12);

  const double t1 = 0.37, t2 = 1.21;
  CHECK(max_abs_diff(unitary_exp(h, t1) * unitary_exp(h, t2),
                     unitary_exp(h, t1 + t2)) <= 1e-10);

  const ComplexMatrix u = unitary_exp(h, 2.4);
  CHECK(max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(3)) <= 1e-12);
}

TEST_CASE("trace_norm basics", "[complex_matrix][trace_norm]") {
  std::mt19937 rng(404);
  const DensityMatrix rho = cerfsim::test::random_density(2, 3, rng);
  CHECK(trace_norm(rho.mat()) == Catch::Approx(1.0).margin(1e-12));

  CHECK(trace_norm(diag({0.5, 0.5, 0.5, -0.5})) ==
        Catch::Approx(2.0).margin(1e-13));

  for (int rep = 0; rep < 10; ++rep) {
    const ComplexMatrix a = random_hermitian(5, rng);
    CHECK(trace_norm(a) >= std::abs(a.trace()) - 1e-12);
  }

  ComplexMatrix bad(2);
  bad(1, 0) = 0.3;
  CHECK_THROWS_AS(trace_norm(bad), NotHermitian);
}

TEST_CASE("trace_norm of the evolved one-param partial transpose",
          "[complex_matrix][trace_norm]") {
  // At tau = 0.8 the p = 0 family evolved under the qubit drive has
  // ||rho^T2|| = 1 + |cos 2 tau| (block closed form), which is the 1.0293
  // bound quoted for the first minimum.
  const Scenario s{OneParam{0.0},
                   DriveSpec{DriveTarget::FirstParty, QubitDrive{1.0}}};
  const DensityMatrix rho = evolve(make_one_param(0.0), s, 0.8);
  const double tn = trace_norm(partial_transpose(rho.mat(), 2, 3));
  CHECK(tn == Catch::Approx(1.0 + std::abs(std::cos(1.6))).margin(1e-10));
  CHECK(tn == Catch::Approx(1.0293).margin(1e-3));
}

TEST_CASE("partial_transpose of a product state transposes one factor",
          "[complex_matrix][partial_transpose]") {
  std::mt19937 rng(505);
  const ComplexMatrix a = symmetrize(random_matrix(2, rng));
  const ComplexMatrix b = symmetrize(random_matrix(3, rng));
  CHECK(max_abs_diff(partial_transpose(kron(a, b), 2, 3),
                     kron(a, b.transpose())) == 0.0);

  // PPT: a product density matrix keeps trace norm 1.
  auto local_density = [&rng](int dim) {
    const ComplexMatrix g = random_matrix(dim, rng);
    ComplexMatrix rho = g * g.adjoint();
    rho *= Complex(1.0 / rho.trace().real(), 0.0);
    return rho;
  };
  const ComplexMatrix prod = kron(local_density(2), local_density(3));
  CHECK(trace_norm(partial_transpose(prod, 2, 3)) ==
        Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("partial_transpose of the Bell state has the half spectrum",
          "[complex_matrix][partial_transpose]") {
  // 1/2 (|00>+|11>)(<00|+<11|); the partial transpose swaps the coherences
  // onto (01,10), giving eigenvalues {-1/2, 1/2, 1/2, 1/2}.
  ComplexMatrix bell(4);
  bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
  const auto e = hermitian_eig(partial_transpose(bell, 2, 2));
  CHECK(e.eigenvalues[0] == Catch::Approx(-0.5).margin(1e-12));
  CHECK(e.eigenvalues[1] == Catch::Approx(0.5).margin(1e-12));
  CHECK(e.eigenvalues[2] == Catch::Approx(0.5).margin(1e-12));
  CHECK(e.eigenvalues[3] == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("partial_transpose is an exact involution and preserves structure",
          "[complex_matrix][partial_transpose]") {
  std::mt19937 rng(606);
  const ComplexMatrix a = random_hermitian(6, rng);
  const ComplexMatrix pt = partial_transpose(a, 2, 3);
  CHECK(partial_transpose(pt, 2, 3) == a);
  CHECK(pt.trace() == a.trace());
  CHECK(pt.hermiticity_defect() == 0.0);

  CHECK_THROWS_AS(partial_transpose(a, 2, 2), DimensionMismatch);
  CHECK_THROWS_AS(partial_transpose(a, 4, 2), DimensionMismatch);
}
