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
#include <string>
#include <vector>

#include "cerfsim/analytic.hpp"
#include "cerfsim/complex_matrix.hpp"
#include "cerfsim/dynamics.hpp"
#include "cerfsim/entanglement.hpp"
#include "cerfsim/states.hpp"

namespace cerfsim {

enum class SweepBackend { Numeric, AnalyticVerbatim, AnalyticCorrected };

inline std::string backend_name(SweepBackend b) {
  switch (b) {
    case SweepBackend::Numeric: return "numeric";
    case SweepBackend::AnalyticVerbatim: return "analytic-verbatim";
    case SweepBackend::AnalyticCorrected: return "analytic-corrected";
  }
  return "?";
}

struct TraceSample {
  double tau;
  double n;
};

struct NegativityTrace {
  std::string scenario_label;
  std::vector<TraceSample> samples;
};

/// Negativity over the grid. The numeric backend evolves the initial state
/// through the two-phase channel; the analytic backends evaluate the
/// closed-form listings (verbatim listings are symmetrized before the
/// negativity is taken, since several of them are not Hermitian as
/// published -- `audit` reports the defect).
inline NegativityTrace sweep(const Scenario& scenario, const TimeGrid& grid,
                             SweepBackend backend = SweepBackend::Numeric) {
  scenario.validate();
  const auto [dim_a, dim_b] = scenario.dims();

  double g1 = 1.0, g2 = 0.0;
  if (const auto* qb = std::get_if<QubitDrive>(&scenario.drive.kind)) {
    g1 = g2 = qb->g;
  } else {
    const auto& qt = std::get<QutritDrive>(scenario.drive.kind);
    g1 = qt.g1;
    g2 = qt.g2;
  }

  NegativityTrace trace;
  trace.scenario_label = scenario.label() + "/" + backend_name(backend);
  trace.samples.reserve(grid.steps);

  if (backend == SweepBackend::Numeric) {
    const Propagator prop(scenario);
    const DensityMatrix rho0 = make_initial(scenario.family);
    for (double t : grid.samples())
      trace.samples.push_back({t, negativity(prop.evolve(rho0, t))});
    return trace;
  }

  const AnalyticMode mode = backend == SweepBackend::AnalyticVerbatim
                                ? AnalyticMode::Verbatim
                                : AnalyticMode::Corrected;
  for (double t : grid.samples()) {
    const AnalyticState a = analytic_state(scenario, g1 * t, g2 * t, mode);
    const double n = negativity(symmetrize(a.matrix), dim_a, dim_b);
    trace.samples.push_back({t, std::max(n, 0.0)});
  }
  return trace;
}

struct DeathInterval {
  double tau_on;
  double tau_off;
};

enum class ExtremumKind { Min, Max };

struct Extremum {
  double tau;
  double n;
  ExtremumKind kind;
};

struct EntanglementEvents {
  std::vector<DeathInterval> death_intervals;
  std::vector<double> rebirth_times;  // interval ends followed by revival
  std::vector<Extremum> extrema;      // strict interior extrema
  double threshold = 1e-3;
};

/// Death intervals are maximal runs of consecutive samples with
/// N <= threshold; interval endpoints are refined by linear interpolation
/// between the bracketing samples. Extrema are strict local minima/maxima
/// of the sampled sequence.
inline EntanglementEvents detect_events(const NegativityTrace& trace,
                                        double threshold = 1e-3) {
  if (trace.samples.empty()) throw EmptyTrace("detect_events: empty trace");
  if (threshold < 0.0)
    throw OutOfRange("detect_events: threshold must be >= 0");

  const auto& s = trace.samples;
  const int n = static_cast<int>(s.size());
  EntanglementEvents ev;
  ev.threshold = threshold;

  int i = 0;
  while (i < n) {
    if (s[i].n > threshold) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < n && s[j + 1].n <= threshold) ++j;

    DeathInterval d{s[i].tau, s[j].tau};
    if (i > 0) {
      const double dn = s[i - 1].n - s[i].n;  // > 0 since s[i-1].n > threshold
      d.tau_on = s[i - 1].tau +
                 (s[i - 1].n - threshold) * (s[i].tau - s[i - 1].tau) / dn;
    }
    const bool revives = j + 1 < n;
    if (revives) {
      const double dn = s[j + 1].n - s[j].n;  // > 0
      d.tau_off =
          s[j].tau + (threshold - s[j].n) * (s[j + 1].tau - s[j].tau) / dn;
      ev.rebirth_times.push_back(d.tau_off);
    }
    ev.death_intervals.push_back(d);
    i = j + 1;
  }

  for (int k = 1; k + 1 < n; ++k) {
    if (s[k].n < s[k - 1].n && s[k].n < s[k + 1].n)
      ev.extrema.push_back({s[k].tau, s[k].n, ExtremumKind::Min});
    else if (s[k].n > s[k - 1].n && s[k].n > s[k + 1].n)
      ev.extrema.push_back({s[k].tau, s[k].n, ExtremumKind::Max});
  }
  return ev;
}

struct TraceComparison {
  double max_deviation = 0.0;
  double tau_at_max = 0.0;
  double fraction_a_ge_b = 0.0;  // fraction of grid where a >= b
};

inline TraceComparison compare_traces(const NegativityTrace& a,
                                      const NegativityTrace& b) {
  if (a.samples.size() != b.samples.size())
    throw GridMismatch("compare_traces: traces have different lengths");
  if (a.samples.empty()) throw EmptyTrace("compare_traces: empty traces");
  TraceComparison c;
  c.tau_at_max = a.samples.front().tau;
  int ge = 0;
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    if (std::abs(a.samples[k].tau - b.samples[k].tau) > 1e-12)
      throw GridMismatch("compare_traces: grids differ at sample " +
                         std::to_string(k));
    const double dev = std::abs(a.samples[k].n - b.samples[k].n);
    if (dev > c.max_deviation) {
      c.max_deviation = dev;
      c.tau_at_max = a.samples[k].tau;
    }
    if (a.samples[k].n >= b.samples[k].n) ++ge;
  }
  c.fraction_a_ge_b = static_cast<double>(ge) / a.samples.size();
  return c;
}

}  // namespace cerfsim
