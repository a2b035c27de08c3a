#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "ttnring/exact.hpp"
#include "ttnring/io.hpp"
#include "ttnring/model.hpp"
#include "ttnring/perturb.hpp"

using namespace ttnring;

namespace {

const std::string& cli_path() {
  static const std::string p = [] {
    const char* env = std::getenv("RING_CLI");
    return std::string(env ? env : "");
  }();
  return p;
}

const std::string& work_dir() {
  static const std::string dir = [] {
    const auto p = std::filesystem::temp_directory_path() /
                   ("ttnring_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(p);
    return p.string();
  }();
  return dir;
}

int run_cli(const std::string& args) {
  REQUIRE_FALSE(cli_path().empty());
  const std::string cmd = "\"" + cli_path() + "\" " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::map<std::string, std::string> kv_map(const std::string& path) {
  std::map<std::string, std::string> out;
  for (const auto& p : read_kv(path)) out[p.first] = p.second;
  return out;
}

double kv_num(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  REQUIRE(it != kv.end());
  return std::stod(it->second);
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("ground --no-such-flag") == 2);
  CHECK(run_cli("sweep") == 2);
  CHECK(run_cli("ground --set bogus=1") == 2);
  CHECK(run_cli("ground --set sites8") == 2);
  CHECK(run_cli("--config /no/such/file.cfg ground") == 2);
  CHECK(run_cli("perturb --u-list 40,moo") == 2);
}

TEST_CASE("oversized sectors exit with code 3 before any heavy work") {
  CHECK(run_cli("exact --set sites=16 --set local_dim=9") == 3);
  CHECK(run_cli("ground --set local_dim=17") == 3);
}

TEST_CASE("ground summary agrees with the dense sector") {
  const std::string f = work_dir() + "/ground.kv";
  const int rc = run_cli(
      "ground --set sites=4 --set local_dim=3 --set particles=4 "
      "--set flux=0.7pi --u 4 --out-summary \"" + f + "\"");
  REQUIRE(rc == 0);
  const auto kv = kv_map(f);

  BHParams p;
  p.L = 4;
  p.d = 3;
  p.N = 4;
  p.phi = 0.7 * M_PI;
  const SectorHamiltonian sh = build_sector_hamiltonian(p);
  const SpectrumResult spec = low_spectrum(sh.basis, sh.h(4.0), 1);
  const SparseMat i_tot = term_matrix(sh.basis, current_terms(p));
  const Eigen::VectorXcd g = spec.states.col(0);

  CHECK(kv_num(kv, "U") == 4.0);
  CHECK(kv_num(kv, "energy") == doctest::Approx(spec.energies[0]).epsilon(1e-6));
  CHECK(kv_num(kv, "current") ==
        doctest::Approx(std::real(g.dot(i_tot * g))).epsilon(1e-4));
  CHECK(kv.at("converged") == "1");
  CHECK(kv_num(kv, "max_D") >= 1);
}

TEST_CASE("exact spectrum file matches the in-process solver") {
  const std::string f = work_dir() + "/spectrum.tsv";
  const int rc = run_cli(
      "exact --set sites=4 --set local_dim=3 --set particles=4 "
      "--set flux=0.7pi --u 3 --levels 5 --out-spectrum \"" + f + "\"");
  REQUIRE(rc == 0);

  BHParams p;
  p.L = 4;
  p.d = 3;
  p.N = 4;
  p.phi = 0.7 * M_PI;
  const SectorHamiltonian sh = build_sector_hamiltonian(p);
  const SpectrumResult spec = low_spectrum(sh.basis, sh.h(3.0), 5);

  std::ifstream is(f);
  std::string header;
  REQUIRE(std::getline(is, header));
  CHECK(header == "k\tenergy\ttau_re\ttau_im");
  for (int i = 0; i < 5; ++i) {
    int k = -1;
    double e = 0, tr = 0, ti = 0;
    REQUIRE(static_cast<bool>(is >> k >> e >> tr >> ti));
    CHECK(k == i);
    CHECK(e == doctest::Approx(spec.energies[i]).epsilon(1e-8));
    CHECK(std::abs(cplx(tr, ti)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(cplx(tr, ti) - spec.tau[i]) < 1e-6);
  }
}

TEST_CASE("perturbation table round-trips the in-process numbers") {
  const std::string f = work_dir() + "/perturb.tsv";
  const int rc = run_cli(
      "perturb --set sites=6 --set flux=0.7pi --u-list 40 --out \"" + f + "\"");
  REQUIRE(rc == 0);

  const PerturbGap want = gap(6, 0.7 * M_PI, 40.0);
  std::ifstream is(f);
  std::string header;
  REQUIRE(std::getline(is, header));
  CHECK(header == "u\tgap_first\tgap_second\te11\te02\te12");
  double u = 0, d1 = 0, d2 = 0, e11 = 0, e02 = 0, e12 = 0;
  REQUIRE(static_cast<bool>(is >> u >> d1 >> d2 >> e11 >> e02 >> e12));
  CHECK(u == want.u);
  CHECK(d1 == want.delta1);
  CHECK(d2 == want.delta2);
  CHECK(e11 == want.e11);
  CHECK(e02 == want.e02);
  CHECK(e12 == want.e12);
}

TEST_CASE("analyze reduces a synthetic trace") {
  TimeSeries ts;
  ts.n_sites = 4;
  for (int i = 0; i <= 800; ++i) {
    const double t = 0.05 * i;
    const double val = 0.02 + 0.25 * std::cos(1.6 * t);
    ts.t.push_back(t);
    ts.u.push_back(12.0);
    ts.i_total.push_back(val);
    ts.i_local.push_back({val, val, val, val});
    ts.energy.push_back(-9.0);
    ts.norm.push_back(1.0);
    ts.max_d.push_back(16);
    ts.discarded.push_back(0.0);
  }
  const std::string f = work_dir() + "/trace.tsv";
  write_time_series(f, ts);

  const std::string g = work_dir() + "/analysis.kv";
  const int rc = run_cli(
      "analyze --series \"" + f + "\" --ground-energy -9.5 "
      "--set window_start=0 --set window_end=40 --out-summary \"" + g + "\"");
  REQUIRE(rc == 0);
  const auto kv = kv_map(g);

  CHECK(kv_num(kv, "residual_energy") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(kv_num(kv, "i0") == doctest::Approx(0.25).epsilon(0.01));
  CHECK(std::abs(kv_num(kv, "omega") - 1.6) < 0.01);
  CHECK(std::abs(kv_num(kv, "fourier_amplitude") - 0.25) < 0.01);
  CHECK(kv_num(kv, "local_spread") == 0.0);
  CHECK(kv_num(kv, "window_start") == 0.0);
  CHECK(kv_num(kv, "window_end") == 40.0);

  CHECK(run_cli("analyze --series /no/such/trace.tsv --ground-energy 0") == 1);
}

TEST_CASE("a short anneal run writes consistent outputs") {
  const std::string series = work_dir() + "/anneal_series.tsv";
  const std::string summary = work_dir() + "/anneal_summary.kv";
  const int rc = run_cli(
      "anneal --set sites=4 --set local_dim=3 --set particles=4 --set flux=0.7pi "
      "--set u_initial=2 --set u_final=2.5 --set ramp_rate=1 --set hold_time=0.25 "
      "--set time_step=0.005 --set max_bond=16 --set measure_stride=2 "
      "--out-series \"" + series + "\" --out-summary \"" + summary + "\"");
  REQUIRE(rc == 0);

  const auto kv = kv_map(summary);
  CHECK(kv_num(kv, "u_initial") == 2.0);
  CHECK(kv_num(kv, "u_final") == 2.5);
  CHECK(kv_num(kv, "ramp_end") == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(kv_num(kv, "window_start") == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(kv_num(kv, "window_end") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(kv_num(kv, "residual_energy") >= 0.0);
  CHECK(kv_num(kv, "norm_drift") < 1e-6);
  CHECK(kv_num(kv, "energy_final") > kv_num(kv, "ground_energy_final") - 1e-9);

  const TimeSeries back = read_time_series(series);
  REQUIRE(back.rows() == 51);
  CHECK(back.n_sites == 4);
  CHECK(back.t.front() == 0.0);
  CHECK(back.t.back() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(back.u.front() == 2.0);
  CHECK(back.u.back() == 2.5);
  for (std::size_t r = 0; r < back.rows(); ++r) {
    CHECK(std::abs(back.norm[r] - 1.0) < 1e-6);
    CHECK(back.max_d[r] <= 16);
  }
}
