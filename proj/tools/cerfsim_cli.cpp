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

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cerfsim/cerfsim.hpp"

namespace fs = std::filesystem;
using namespace cerfsim;

namespace {

struct Options {
  std::string scenario;
  std::string family;  // one-param | two-param (qubit-qutrit only)
  double c11 = -1.0, c22 = -1.0, c33 = -1.0;
  double p = 0.0;
  double alpha = 0.0, beta = 0.0, gamma = 1.0;
  double a1 = 1.0 / std::sqrt(3.0), a2 = 1.0 / std::sqrt(3.0),
         a3 = 1.0 / std::sqrt(3.0);
  double g = 1.0, g1 = 1.0, g2 = 1.0;
  double tmin = 0.0, tmax = 2.0 * kPi;
  int steps = 1000;
  std::string backend = "numeric";
  double threshold = 1e-3;
  std::string out = "trace.csv";
  std::string events = "events.txt";
  std::string report = "audit.txt";
};

void add_scenario_options(CLI::App* cmd, Options* o) {
  cmd->add_option("--scenario", o->scenario,
                  "one of: qubit-qubit, qubit-qutrit/drive-qubit, "
                  "qubit-qutrit/drive-qutrit, qutrit-qutrit")
      ->required();
  cmd->add_option("--family", o->family,
                  "initial-state family for qubit-qutrit scenarios: "
                  "one-param or two-param");
  cmd->add_option("--c11", o->c11, "x-state coefficient c11 (default -1)");
  cmd->add_option("--c22", o->c22, "x-state coefficient c22 (default -1)");
  cmd->add_option("--c33", o->c33, "x-state coefficient c33 (default -1)");
  cmd->add_option("--P", o->p, "one-param family parameter in [0, 0.5]");
  cmd->add_option("--alpha", o->alpha, "two-param family alpha");
  cmd->add_option("--beta", o->beta, "two-param family beta");
  cmd->add_option("--gamma", o->gamma, "two-param family gamma");
  cmd->add_option("--a1", o->a1, "qutrit-pure coefficient a1");
  cmd->add_option("--a2", o->a2, "qutrit-pure coefficient a2");
  cmd->add_option("--a3", o->a3, "qutrit-pure coefficient a3");
  cmd->add_option("--g", o->g, "qubit-drive coupling (default 1)");
  cmd->add_option("--g1", o->g1, "qutrit-drive 1<->2 coupling (default 1)");
  cmd->add_option("--g2", o->g2, "qutrit-drive 0<->2 coupling (default 1)");
  cmd->set_config("--config", "",
                  "flat key = value config file; flags take precedence");
}

void add_grid_options(CLI::App* cmd, Options* o) {
  cmd->add_option("--tmin", o->tmin, "sweep start (units of 1/g, default 0)");
  cmd->add_option("--tmax", o->tmax, "sweep end (default 2*pi)");
  cmd->add_option("--steps", o->steps, "number of samples (default 1000)");
}

StateFamily parse_family(const Options& o) {
  if (o.scenario == "qubit-qubit") {
    if (!o.family.empty() && o.family != "x-state")
      throw Error("scenario qubit-qubit uses the x-state family, not " +
                  o.family);
    return XState{o.c11, o.c22, o.c33};
  }
  if (o.scenario == "qutrit-qutrit") {
    if (!o.family.empty() && o.family != "qutrit-pure")
      throw Error("scenario qutrit-qutrit uses the qutrit-pure family, not " +
                  o.family);
    return QutritPure{o.a1, o.a2, o.a3};
  }
  if (o.scenario == "qubit-qutrit/drive-qubit" ||
      o.scenario == "qubit-qutrit/drive-qutrit") {
    if (o.family == "one-param") return OneParam{o.p};
    if (o.family == "two-param") return TwoParam{o.alpha, o.beta, o.gamma};
    throw Error(
        "qubit-qutrit scenarios require --family one-param or two-param");
  }
  throw Error("unknown scenario '" + o.scenario +
              "'; expected qubit-qubit, qubit-qutrit/drive-qubit, "
              "qubit-qutrit/drive-qutrit or qutrit-qutrit");
}

Scenario parse_scenario(const Options& o) {
  Scenario s{parse_family(o), DriveSpec{}};
  if (o.scenario == "qubit-qubit" ||
      o.scenario == "qubit-qutrit/drive-qubit") {
    s.drive = DriveSpec{DriveTarget::FirstParty, QubitDrive{o.g}};
  } else if (o.scenario == "qubit-qutrit/drive-qutrit") {
    s.drive = DriveSpec{DriveTarget::SecondParty, QutritDrive{o.g1, o.g2}};
  } else {  // qutrit-qutrit: first qutrit driven
    s.drive = DriveSpec{DriveTarget::FirstParty, QutritDrive{o.g1, o.g2}};
  }
  s.validate();
  return s;
}

SweepBackend parse_backend(const std::string& name) {
  if (name == "numeric") return SweepBackend::Numeric;
  if (name == "analytic-verbatim") return SweepBackend::AnalyticVerbatim;
  if (name == "analytic-corrected") return SweepBackend::AnalyticCorrected;
  throw Error("unknown backend '" + name +
              "'; expected numeric, analytic-verbatim or analytic-corrected");
}

/// Relative output paths are placed under $CERFSIM_OUT_DIR when it is set.
fs::path resolve_output(const std::string& raw) {
  fs::path p(raw);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("CERFSIM_OUT_DIR")) p = fs::path(dir) / p;
  }
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

void write_trace_csv(const fs::path& path, const NegativityTrace& trace) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << "tau,negativity\n";
  char buf[80];
  for (const auto& s : trace.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s.tau, s.n);
    f << buf;
  }
}

void write_events(const fs::path& path, const std::string& label,
                  const EntanglementEvents& ev) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  char buf[160];
  f << "# scenario " << label << "\n";
  std::snprintf(buf, sizeof buf, "# threshold %.12g\n", ev.threshold);
  f << buf;
  for (const auto& d : ev.death_intervals) {
    std::snprintf(buf, sizeof buf, "death_interval %.12g %.12g\n", d.tau_on,
                  d.tau_off);
    f << buf;
  }
  for (double t : ev.rebirth_times) {
    std::snprintf(buf, sizeof buf, "rebirth %.12g\n", t);
    f << buf;
  }
  for (const auto& e : ev.extrema) {
    std::snprintf(buf, sizeof buf, "extremum %s %.12g %.12g\n",
                  e.kind == ExtremumKind::Min ? "min" : "max", e.tau, e.n);
    f << buf;
  }
}

int cmd_run(const Options& o) {
  const Scenario scenario = parse_scenario(o);
  const TimeGrid grid(o.tmin, o.tmax, o.steps);
  const SweepBackend backend = parse_backend(o.backend);

  if (backend == SweepBackend::AnalyticVerbatim) {
    const AnalyticState probe = analytic_state(
        scenario, 0.7, 0.7, AnalyticMode::Verbatim);
    const double defect = probe.matrix.hermiticity_defect();
    if (defect > 1e-10)
      std::cerr << "warning: verbatim closed form is not Hermitian (defect "
                << defect << " at tau 0.7); the sweep symmetrizes it -- run "
                   "the audit subcommand for details\n";
  }

  const NegativityTrace trace = sweep(scenario, grid, backend);
  const EntanglementEvents events = detect_events(trace, o.threshold);

  const fs::path trace_path = resolve_output(o.out);
  const fs::path events_path = resolve_output(o.events);
  write_trace_csv(trace_path, trace);
  write_events(events_path, trace.scenario_label, events);

  std::cout << "scenario " << trace.scenario_label << "\n"
            << "wrote " << trace_path.string() << " (" << trace.samples.size()
            << " samples)\n"
            << "wrote " << events_path.string() << " ("
            << events.death_intervals.size() << " death intervals, "
            << events.rebirth_times.size() << " rebirths, "
            << events.extrema.size() << " extrema)\n";
  return 0;
}

int cmd_audit(const Options& o, bool corrected) {
  const Scenario scenario = parse_scenario(o);
  const TimeGrid grid(o.tmin, o.tmax, o.steps);
  const AuditReport report = audit_analytic(
      scenario, grid,
      corrected ? AnalyticMode::Corrected : AnalyticMode::Verbatim);

  const fs::path report_path = resolve_output(o.report);
  std::ofstream f(report_path);
  if (!f) throw Error("cannot open " + report_path.string() + " for writing");
  f << report.to_text();

  const auto flagged = report.flagged();
  std::cout << "audit " << report.form << ": "
            << (report.discrepant() ? "DISCREPANT" : "agree") << " ("
            << flagged.size() << " flagged coefficients, "
            << report.duplicates.size() << " duplicate labels)\n"
            << "wrote " << report_path.string() << "\n";
  for (const auto* c : flagged)
    std::cout << "  " << c->name << " peak error " << c->peak_error << "\n";
  return report.discrepant() ? 2 : 0;
}

int cmd_validate(const Options& o) {
  const StateFamily family = parse_family(o);
  const DensityMatrix rho = make_initial(family);
  const DensityValidation v = validate_density(rho);
  std::printf("state %s\n", family_label(family).c_str());
  std::printf("hermiticity_defect %.3e\n", v.hermiticity_defect);
  std::printf("trace_defect %.3e\n", v.trace_defect);
  std::printf("min_eigenvalue %.3e\n", v.min_eigenvalue);
  std::printf("verdict %s\n", v.pass() ? "pass" : "fail");
  return v.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cerfsim: negativity dynamics of bipartite systems driven by a "
      "two-phase classical random external field"};
  app.require_subcommand(1);

  Options run_opts, audit_opts, validate_opts;
  audit_opts.steps = 200;
  bool audit_corrected = false;

  CLI::App* run = app.add_subcommand(
      "run", "sweep negativity over a time grid; write trace CSV and events");
  add_scenario_options(run, &run_opts);
  add_grid_options(run, &run_opts);
  run->add_option("--backend", run_opts.backend,
                  "numeric | analytic-verbatim | analytic-corrected");
  run->add_option("--threshold", run_opts.threshold,
                  "death threshold on N (default 1e-3)");
  run->add_option("--out", run_opts.out, "trace CSV path (default trace.csv)");
  run->add_option("--events", run_opts.events,
                  "events report path (default events.txt)");

  CLI::App* audit = app.add_subcommand(
      "audit",
      "compare the published closed-form solution against the numeric "
      "channel; exit 2 when they disagree");
  add_scenario_options(audit, &audit_opts);
  add_grid_options(audit, &audit_opts);
  audit_opts.steps = 200;
  audit->add_flag("--corrected", audit_corrected,
                  "audit the corrected closed form instead of the verbatim "
                  "listing");
  audit->add_option("--report", audit_opts.report,
                    "report path (default audit.txt)");

  CLI::App* validate = app.add_subcommand(
      "validate", "construct the initial state and report its invariants");
  add_scenario_options(validate, &validate_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (audit->parsed()) return cmd_audit(audit_opts, audit_corrected);
    return cmd_validate(validate_opts);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
