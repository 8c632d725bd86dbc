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
#include <vector>

#include "cerfsim/complex_matrix.hpp"
#include "cerfsim/states.hpp"

namespace cerfsim {

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Drive specification.
//
// The external field is classical with a random phase that is 0 or pi with
// probability 1/2 each, so the evolution is the exact two-term mixture
//   rho(t) = 1/2 [ U_0 rho U_0† + U_pi rho U_pi† ],  U_phi = exp(-i H(phi) t).
// Both drive Hamiltonians satisfy H(pi) = -H(0), hence U_pi = U_0†.
// ---------------------------------------------------------------------------

enum class DriveTarget { FirstParty, SecondParty };

/// Resonant single-qubit drive with coupling g.
struct QubitDrive {
  double g = 1.0;
};

/// Lambda-configuration qutrit drive: level |2> is the upper level, the
/// 1<->2 transition couples with g1 and 0<->2 with g2; 0<->1 is dipole
/// forbidden.
struct QutritDrive {
  double g1 = 1.0;
  double g2 = 1.0;
};

using DriveKind = std::variant<QubitDrive, QutritDrive>;

struct DriveSpec {
  DriveTarget target = DriveTarget::FirstParty;
  DriveKind kind = QubitDrive{};

  /// The fixed random-phase ensemble, each value with probability 1/2.
  static constexpr double phases[2] = {0.0, kPi};

  int local_dim() const {
    return std::holds_alternative<QubitDrive>(kind) ? 2 : 3;
  }
};

namespace detail {
inline void check_phase(double phi) {
  if (std::abs(phi) > 1e-12 && std::abs(phi - kPi) > 1e-12)
    throw OutOfRange("drive phase must be 0 or pi, got " +
                     std::to_string(phi));
}
}  // namespace detail

/// H = i g (s+ e^{-i phi} - s- e^{i phi}) with s+ = |0><1|, on resonance.
/// phi = pi negates the phi = 0 generator.
inline ComplexMatrix qubit_drive_hamiltonian(double g, double phi) {
  detail::check_phase(phi);
  const Complex ephi = std::exp(Complex(0.0, -phi));
  ComplexMatrix h(2);
  h(0, 1) = Complex(0.0, g) * ephi;               //  i g e^{-i phi} |0><1|
  h(1, 0) = Complex(0.0, -g) * std::conj(ephi);   // -i g e^{+i phi} |1><0|
  return h;
}

/// H = g1 (e^{-i phi} S12 + e^{i phi} S21) + g2 (e^{-i phi} S20 + e^{i phi} S02)
/// with S_ij = |i><j|. The (0,1) and (1,0) entries vanish for all parameters.
inline ComplexMatrix qutrit_drive_hamiltonian(double g1, double g2,
                                              double phi) {
  detail::check_phase(phi);
  const Complex em = std::exp(Complex(0.0, -phi));
  const Complex ep = std::conj(em);
  ComplexMatrix h(3);
  h(1, 2) = g1 * em;
  h(2, 1) = g1 * ep;
  h(2, 0) = g2 * em;
  h(0, 2) = g2 * ep;
  return h;
}

inline ComplexMatrix drive_hamiltonian(const DriveKind& kind, double phi) {
  if (const auto* qb = std::get_if<QubitDrive>(&kind))
    return qubit_drive_hamiltonian(qb->g, phi);
  const auto& qt = std::get<QutritDrive>(kind);
  return qutrit_drive_hamiltonian(qt.g1, qt.g2, phi);
}

/// Embeds a local operator into the composite space: h ⊗ I or I ⊗ h.
inline ComplexMatrix embed_drive(const ComplexMatrix& h_local,
                                 std::pair<int, int> dims,
                                 DriveTarget target) {
  const auto [dim_a, dim_b] = dims;
  const int local = target == DriveTarget::FirstParty ? dim_a : dim_b;
  if (h_local.dim() != local)
    throw DimensionMismatch("embed_drive: local dim " +
                            std::to_string(h_local.dim()) +
                            " does not match targeted factor dim " +
                            std::to_string(local));
  return target == DriveTarget::FirstParty
             ? kron(h_local, ComplexMatrix::identity(dim_b))
             : kron(ComplexMatrix::identity(dim_a), h_local);
}

/// Closed-form propagator exp(-i H(phi=0) t) for either drive kind. For the
/// Lambda drive this is the Rabi solution with Omega = sqrt(g1^2 + g2^2):
/// U = I + (cos(Omega t) - 1) H^2 / Omega^2 - i sin(Omega t) H / Omega.
inline ComplexMatrix closed_form_unitary(const DriveKind& kind, double t) {
  if (const auto* qb = std::get_if<QubitDrive>(&kind)) {
    const double c = std::cos(qb->g * t), s = std::sin(qb->g * t);
    ComplexMatrix u(2);
    u(0, 0) = c;
    u(0, 1) = s;
    u(1, 0) = -s;
    u(1, 1) = c;
    return u;
  }
  const auto& qt = std::get<QutritDrive>(kind);
  const double omega = std::hypot(qt.g1, qt.g2);
  if (omega == 0.0) return ComplexMatrix::identity(3);
  const ComplexMatrix h = qutrit_drive_hamiltonian(qt.g1, qt.g2, 0.0);
  const double c = std::cos(omega * t), s = std::sin(omega * t);
  ComplexMatrix u = ComplexMatrix::identity(3);
  u += (h * h) * Complex((c - 1.0) / (omega * omega), 0.0);
  u += h * Complex(0.0, -s / omega);
  return u;
}

// ---------------------------------------------------------------------------
// Scenario: which family is prepared and which subsystem is driven.
// ---------------------------------------------------------------------------

struct Scenario {
  StateFamily family;
  DriveSpec drive;

  std::pair<int, int> dims() const { return family_dims(family); }

  void validate() const {
    const auto [dim_a, dim_b] = dims();
    const int target_dim =
        drive.target == DriveTarget::FirstParty ? dim_a : dim_b;
    if (drive.local_dim() != target_dim)
      throw DimensionMismatch(
          "Scenario: drive dimension " + std::to_string(drive.local_dim()) +
          " does not match targeted subsystem dimension " +
          std::to_string(target_dim));
  }

  std::string label() const {
    std::string side =
        drive.target == DriveTarget::FirstParty ? "first" : "second";
    std::string kind =
        std::holds_alternative<QubitDrive>(drive.kind) ? "qubit" : "qutrit";
    return family_label(family) + "/" + kind + "-drive-on-" + side;
  }
};

/// Two-phase mixed-unitary channel, with the phase-0 eigendecomposition
/// cached so that time sweeps pay one decomposition per scenario.
class Propagator {
 public:
  explicit Propagator(const Scenario& scenario)
      : dims_(scenario.dims()),
        eig_(hermitian_eig(embed_drive(drive_hamiltonian(scenario.drive.kind, 0.0),
                                       scenario.dims(),
                                       scenario.drive.target))) {
    scenario.validate();
  }

  /// exp(-i H(phi=0) t) on the composite space; t = 0 is the exact identity.
  ComplexMatrix unitary(double t) const {
    const int n = dims_.first * dims_.second;
    if (t == 0.0) return ComplexMatrix::identity(n);
    ComplexMatrix scaled(n);
    for (int k = 0; k < n; ++k) {
      const Complex ph = std::exp(Complex(0.0, -eig_.eigenvalues[k] * t));
      for (int i = 0; i < n; ++i)
        scaled(i, k) = eig_.eigenvectors(i, k) * ph;
    }
    return scaled * eig_.eigenvectors.adjoint();
  }

  /// rho(t) = 1/2 (U rho U† + U† rho U). The phi = pi term uses U† because
  /// H(pi) = -H(0) exactly.
  DensityMatrix evolve(const DensityMatrix& rho0, double t) const {
    if (rho0.dim_a() != dims_.first || rho0.dim_b() != dims_.second)
      throw DimensionMismatch("Propagator::evolve: state dims do not match");
    const ComplexMatrix u = unitary(t);
    const ComplexMatrix ud = u.adjoint();
    ComplexMatrix mixed = (u * rho0.mat() * ud + ud * rho0.mat() * u) *
                          Complex(0.5, 0.0);
    return DensityMatrix(std::move(mixed), dims_.first, dims_.second);
  }

 private:
  std::pair<int, int> dims_;
  HermitianEig eig_;
};

inline DensityMatrix evolve(const DensityMatrix& rho0,
                            const Scenario& scenario, double t) {
  return Propagator(scenario).evolve(rho0, t);
}

// ---------------------------------------------------------------------------
// Time grid (the tau axis of a sweep), inclusive of both endpoints.
// ---------------------------------------------------------------------------

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 2.0 * kPi;
  int steps = 1000;  // number of samples

  TimeGrid() = default;
  TimeGrid(double start, double end, int n)
      : t_start(start), t_end(end), steps(n) {
    if (steps < 2) throw OutOfRange("TimeGrid: steps must be >= 2");
    if (!(t_end > t_start))
      throw OutOfRange("TimeGrid: t_end must exceed t_start");
  }

  std::vector<double> samples() const {
    std::vector<double> ts(steps);
    const double dt = (t_end - t_start) / (steps - 1);
    for (int k = 0; k < steps; ++k) ts[k] = t_start + k * dt;
    ts.back() = t_end;
    return ts;
  }
};

}  // namespace cerfsim
