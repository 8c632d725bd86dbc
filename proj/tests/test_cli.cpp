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

#include <sys/wait.h>

#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace cerfsim;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir =
      fs::temp_directory_path() / ("cerfsim_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args, const fs::path& workdir,
                  const std::string& env = "") {
  const fs::path out = workdir / "stdout.txt";
  const fs::path err = workdir / "stderr.txt";
  const std::string cmd = "cd " + workdir.string() + " && " + env + " " +
                          CERFSIM_BIN + " " + args + " > " + out.string() +
                          " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

struct CsvTrace {
  std::vector<double> tau, n;
};

CsvTrace parse_csv(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::string line;
  std::getline(f, line);
  REQUIRE(line == "tau,negativity");
  CsvTrace t;
  while (std::getline(f, line)) {
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    t.tau.push_back(std::stod(line.substr(0, comma)));
    t.n.push_back(std::stod(line.substr(comma + 1)));
  }
  return t;
}

}  // namespace

TEST_CASE("run writes the MES trace with N(0) = 1", "[cli]") {
  const fs::path dir = fresh_dir("mes");
  const CliResult r = run_cli(
      "run --scenario qubit-qubit --c11 -1 --c22 -1 --c33 -1 "
      "--tmax 6.2832 --steps 1000 --out trace.csv --events events.txt",
      dir);
  REQUIRE(r.exit_code == 0);

  const CsvTrace t = parse_csv(dir / "trace.csv");
  REQUIRE(t.tau.size() == 1000);
  CHECK(t.tau.front() == 0.0);
  CHECK(std::abs(t.n.front() - 1.0) <= 1e-10);
  CHECK(fs::exists(dir / "events.txt"));
}

TEST_CASE("identical configs produce byte-identical outputs", "[cli]") {
  const fs::path dir = fresh_dir("determinism");
  const std::string args =
      "run --scenario qutrit-qutrit --steps 200 --out a.csv --events a.txt";
  REQUIRE(run_cli(args, dir).exit_code == 0);
  const std::string first_csv = slurp(dir / "a.csv");
  const std::string first_events = slurp(dir / "a.txt");
  REQUIRE(run_cli(args, dir).exit_code == 0);
  CHECK(slurp(dir / "a.csv") == first_csv);
  CHECK(slurp(dir / "a.txt") == first_events);
}

TEST_CASE("trace CSV round-trips the in-memory sweep exactly", "[cli]") {
  const fs::path dir = fresh_dir("roundtrip");
  const CliResult r = run_cli(
      "run --scenario qubit-qutrit/drive-qubit --family one-param --P 0.2 "
      "--tmax 3.5 --steps 101 --out t.csv",
      dir);
  REQUIRE(r.exit_code == 0);

  const Scenario s{OneParam{0.2},
                   DriveSpec{DriveTarget::FirstParty, QubitDrive{1.0}}};
  const NegativityTrace expected = sweep(s, TimeGrid(0.0, 3.5, 101));
  const CsvTrace got = parse_csv(dir / "t.csv");
  REQUIRE(got.tau.size() == expected.samples.size());
  for (std::size_t k = 0; k < got.tau.size(); ++k) {
    // %.17g prints doubles exactly, so the parsed values are bit-equal.
    CHECK(got.tau[k] == expected.samples[k].tau);
    CHECK(got.n[k] == expected.samples[k].n);
  }
}

TEST_CASE("near-separable one-param run records the residual negativity",
          "[cli]") {
  // p = 0.33333 is not the separability point 1/3: N(0) = |1 - 3p| = 1e-5,
  // and the mixed-unitary channel cannot increase it.
  const fs::path dir = fresh_dir("nearsep");
  const CliResult r = run_cli(
      "run --scenario qubit-qutrit/drive-qubit --family one-param "
      "--P 0.33333 --out t.csv",
      dir);
  REQUIRE(r.exit_code == 0);
  const CsvTrace t = parse_csv(dir / "t.csv");
  double peak = 0.0;
  for (double n : t.n) peak = std::max(peak, n);
  CHECK(t.n.front() == Catch::Approx(1e-5).margin(2e-9));
  CHECK(peak == Catch::Approx(1e-5).margin(2e-9));
}

TEST_CASE("constraint violations exit 1 and name the constraint", "[cli]") {
  const fs::path dir = fresh_dir("badargs");
  const CliResult r = run_cli(
      "run --scenario qubit-qutrit/drive-qutrit --family two-param "
      "--alpha 0.5 --beta 0 --gamma 1",
      dir);
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("2*alpha + 3*beta + gamma") != std::string::npos);

  CHECK(run_cli("run --scenario nonsense", dir).exit_code == 1);
  CHECK(run_cli("run", dir).exit_code == 1);  // --scenario is required
  CHECK(run_cli("--help", dir).exit_code == 0);
}

TEST_CASE("audit exit codes distinguish agreement from discrepancy", "[cli]") {
  const fs::path dir = fresh_dir("audit");
  const CliResult agree = run_cli(
      "audit --scenario qubit-qutrit/drive-qubit --family two-param "
      "--alpha 0.1 --beta 0.1 --gamma 0.5 --report ok.txt",
      dir);
  CHECK(agree.exit_code == 0);
  CHECK(slurp(dir / "ok.txt").find("verdict agree") != std::string::npos);

  const CliResult discrepant =
      run_cli("audit --scenario qutrit-qutrit --report bad.txt", dir);
  CHECK(discrepant.exit_code == 2);
  const std::string report = slurp(dir / "bad.txt");
  CHECK(report.find("verdict discrepant") != std::string::npos);
  CHECK(report.find("duplicate (00,02)") != std::string::npos);
  CHECK(report.find("duplicate (02,02)") != std::string::npos);

  CHECK(run_cli("audit --scenario nonsense", dir).exit_code == 1);
}

TEST_CASE("validate reports the family invariants", "[cli]") {
  const fs::path dir = fresh_dir("validate");
  const CliResult good = run_cli("validate --scenario qutrit-qutrit", dir);
  CHECK(good.exit_code == 0);
  CHECK(good.out.find("verdict pass") != std::string::npos);

  const CliResult bad = run_cli(
      "validate --scenario qubit-qutrit/drive-qubit --family one-param "
      "--P 0.7",
      dir);
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("[0, 0.5]") != std::string::npos);
}

TEST_CASE("CERFSIM_OUT_DIR redirects relative output paths", "[cli]") {
  const fs::path dir = fresh_dir("envvar");
  const fs::path outdir = dir / "redirected";
  const CliResult r = run_cli(
      "run --scenario qubit-qubit --steps 50 --out t.csv --events e.txt", dir,
      "CERFSIM_OUT_DIR=" + outdir.string());
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(outdir / "t.csv"));
  CHECK(fs::exists(outdir / "e.txt"));
  CHECK_FALSE(fs::exists(dir / "t.csv"));
}

TEST_CASE("config file keys are overridden by flags", "[cli]") {
  const fs::path dir = fresh_dir("config");
  {
    std::ofstream cfg(dir / "sweep.cfg");
    cfg << "# one-param sweep configuration\n"
        << "scenario = qubit-qutrit/drive-qubit\n"
        << "family = one-param\n"
        << "P = 0.2\n"
        << "steps = 64\n";
  }
  const CliResult from_config =
      run_cli("run --config sweep.cfg --out a.csv", dir);
  REQUIRE(from_config.exit_code == 0);
  const CsvTrace a = parse_csv(dir / "a.csv");
  REQUIRE(a.tau.size() == 64);
  CHECK(a.n.front() == Catch::Approx(std::abs(1.0 - 3.0 * 0.2)).margin(1e-9));

  // --P on the command line beats the config-file value.
  const CliResult overridden =
      run_cli("run --config sweep.cfg --P 0.3 --out b.csv", dir);
  REQUIRE(overridden.exit_code == 0);
  const CsvTrace b = parse_csv(dir / "b.csv");
  CHECK(b.n.front() == Catch::Approx(std::abs(1.0 - 3.0 * 0.3)).margin(1e-9));
}
