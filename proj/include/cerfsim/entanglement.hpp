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

#include "cerfsim/complex_matrix.hpp"
#include "cerfsim/states.hpp"

namespace cerfsim {

/// Values of |N| at or below this are reported as exactly zero, so that
/// separability ("death") is representable without eigenvalue round-off
/// noise.
inline constexpr double kNegativityZeroClamp = 1e-12;

/// Negativity N = (||rho^T2|| - 1) / (d1 - 1) with d1 = min(dim_a, dim_b).
/// Zero iff the partial transpose is positive; 1 for the maximally
/// entangled states of every bipartition handled here.
inline double negativity(const ComplexMatrix& rho, int dim_a, int dim_b) {
  const int d1 = std::min(dim_a, dim_b);
  if (d1 < 2)
    throw DimensionMismatch("negativity: smallest party must have dim >= 2");
  const double tn = trace_norm(partial_transpose(rho, dim_a, dim_b));
  const double n = (tn - 1.0) / static_cast<double>(d1 - 1);
  return std::abs(n) <= kNegativityZeroClamp ? 0.0 : n;
}

inline double negativity(const DensityMatrix& rho) {
  return negativity(rho.mat(), rho.dim_a(), rho.dim_b());
}

}  // namespace cerfsim
