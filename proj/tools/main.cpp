#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ttnring/config.hpp"
#include "ttnring/environment.hpp"
#include "ttnring/exact.hpp"
#include "ttnring/groundstate.hpp"
#include "ttnring/io.hpp"
#include "ttnring/perturb.hpp"
#include "ttnring/runner.hpp"

namespace {

using namespace ttnring;

void add_kv(KvList& kv, const std::string& key, double v) {
  kv.push_back({key, fmt_g17(v)});
}

void print_kv(const KvList& kv) {
  for (const auto& p : kv) std::cout << p.first << "\t" << p.second << "\n";
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    const std::string tok = s.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("bad list entry: " + tok);
    }
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

int cmd_ground(const RunConfig& cfg, double u, const std::string& out_summary,
               const std::string& checkpoint) {
  cfg.params.validate();
  TTNState state = initial_state(cfg.params, cfg.gs);
  const GsResult gs = find_ground_state(state, cfg.params, u, cfg.gs);
  const double cur = expectation(state, current_terms(cfg.params));

  KvList kv;
  add_kv(kv, "U", u);
  add_kv(kv, "energy", gs.energy);
  add_kv(kv, "current", cur);
  kv.push_back({"sweeps", std::to_string(gs.sweeps)});
  kv.push_back({"converged", gs.converged ? "1" : "0"});
  kv.push_back({"max_D", std::to_string(state.max_bond())});
  print_kv(kv);
  if (!out_summary.empty()) write_kv(out_summary, kv);
  if (!checkpoint.empty()) save_checkpoint(state, checkpoint);
  return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::vector<double>& us, const std::string& out) {
  const auto pts = ground_current_curve(cfg.params, us, cfg.gs);
  std::cout << "U\tenergy\tcurrent\tmax_D\tsweeps\tconverged\n";
  for (const auto& p : pts)
    std::cout << fmt_g17(p.u) << '\t' << fmt_g17(p.energy) << '\t' << fmt_g17(p.current)
              << '\t' << p.max_d << '\t' << p.sweeps << '\t' << (p.converged ? 1 : 0)
              << '\n';
  if (!out.empty()) write_ground_curve(out, pts);
  return 0;
}

int cmd_anneal(const RunConfig& cfg, const std::string& out_series,
               const std::string& out_summary, const std::string& checkpoint) {
  TTNState final_state;
  const AnnealOutcome res = run_anneal_pipeline(cfg, checkpoint.empty() ? nullptr : &final_state);

  KvList kv;
  add_kv(kv, "u_initial", cfg.sched.u_i);
  add_kv(kv, "u_final", cfg.sched.u_f);
  add_kv(kv, "ramp_rate", cfg.sched.gamma);
  add_kv(kv, "ramp_end", cfg.sched.t0());
  add_kv(kv, "flux", cfg.params.phi);
  add_kv(kv, "ground_energy_initial", res.e_ground_start);
  add_kv(kv, "ground_current_initial", res.current_start);
  add_kv(kv, "ground_energy_final", res.e_ground_final);
  add_kv(kv, "energy_final", res.e_final);
  add_kv(kv, "residual_energy", res.analysis.residual);
  add_kv(kv, "i0", res.analysis.i0);
  add_kv(kv, "omega", res.analysis.omega);
  add_kv(kv, "fourier_amplitude", res.analysis.fourier_amp);
  add_kv(kv, "local_spread", res.analysis.spread);
  add_kv(kv, "window_start", res.analysis.window.t1);
  add_kv(kv, "window_end", res.analysis.window.t2);
  add_kv(kv, "norm_drift", res.stats.norm_drift);
  add_kv(kv, "discarded_weight", res.stats.discarded_weight);
  kv.push_back({"max_D", std::to_string(res.stats.max_bond_seen)});
  print_kv(kv);

  if (!out_series.empty()) write_time_series(out_series, res.series);
  if (!out_summary.empty()) write_kv(out_summary, kv);
  if (!checkpoint.empty()) save_checkpoint(final_state, checkpoint);
  return 0;
}

int cmd_exact(const RunConfig& cfg, double u, int levels, const std::string& out_spectrum,
              bool evolve, const std::string& out_series) {
  cfg.params.validate();
  const SectorHamiltonian sh = build_sector_hamiltonian(cfg.params);
  const int k = std::min<int>(levels, static_cast<int>(sh.basis.dim()));
  const SpectrumResult spec = low_spectrum(sh.basis, sh.h(u), k);
  const SparseMat i_tot = term_matrix(sh.basis, current_terms(cfg.params));
  const Eigen::VectorXcd g = spec.states.col(0);
  const double cur = std::real(g.dot(i_tot * g));

  KvList kv;
  add_kv(kv, "U", u);
  kv.push_back({"dim", std::to_string(sh.basis.dim())});
  add_kv(kv, "energy", spec.energies[0]);
  add_kv(kv, "current", cur);
  for (int i = 0; i < spec.energies.size(); ++i) {
    add_kv(kv, "E_" + std::to_string(i), spec.energies[i]);
    add_kv(kv, "tau_re_" + std::to_string(i), spec.tau[i].real());
    add_kv(kv, "tau_im_" + std::to_string(i), spec.tau[i].imag());
  }
  print_kv(kv);
  if (!out_spectrum.empty()) write_spectrum(out_spectrum, spec);

  if (evolve) {
    const int L = cfg.params.L;
    std::vector<SparseMat> bonds;
    bonds.reserve(L);
    for (int b = 1; b <= L; ++b)
      bonds.push_back(term_matrix(sh.basis, local_current_term(cfg.params, b)));

    const SpectrumResult gi = low_spectrum(sh.basis, sh.h(cfg.sched.u_i), 1);
    Eigen::VectorXcd psi = gi.states.col(0);

    TimeSeries ts;
    ts.n_sites = L;
    const double t_end = cfg.t_end();
    const double eps = 1e-12 * std::max(1.0, t_end);
    auto measure = [&](int step, double t, const Eigen::VectorXcd& v) {
      if (step % cfg.tdvp.measure_stride != 0 && t < t_end - eps) return;
      const double uu = schedule_u(cfg.sched, t);
      ts.t.push_back(t);
      ts.u.push_back(uu);
      std::vector<double> ik(L);
      double itot = 0;
      for (int b = 0; b < L; ++b) {
        ik[b] = std::real(v.dot(bonds[b] * v));
        itot += ik[b];
      }
      ts.i_local.push_back(std::move(ik));
      ts.i_total.push_back(itot / L);
      const Eigen::VectorXcd hv = sh.h_hop * v + cplx(uu, 0) * (sh.h_int * v);
      ts.energy.push_back(std::real(v.dot(hv)));
      ts.norm.push_back(v.norm());
      ts.max_d.push_back(0);
      ts.discarded.push_back(0.0);
    };
    exact_evolve(sh, cfg.sched, psi, 0.0, t_end, cfg.tdvp.dt, cfg.tdvp.krylov_tol, measure);
    if (!out_series.empty()) write_time_series(out_series, ts);
  }
  return 0;
}

int cmd_perturb(const RunConfig& cfg, const std::vector<double>& us, const std::string& out) {
  std::ostringstream table;
  table << "u\tgap_first\tgap_second\te11\te02\te12\n";
  for (double u : us) {
    const PerturbGap g = gap(cfg.params.L, cfg.params.phi, u);
    table << fmt_g17(g.u) << '\t' << fmt_g17(g.delta1) << '\t' << fmt_g17(g.delta2) << '\t'
          << fmt_g17(g.e11) << '\t' << fmt_g17(g.e02) << '\t' << fmt_g17(g.e12) << '\n';
  }
  std::cout << table.str();
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw StructuralError("cannot open for writing: " + out);
    os << table.str();
  }
  return 0;
}

int cmd_analyze(const RunConfig& cfg, const std::string& series_path, double ground_energy,
                bool have_ground, const std::string& out_summary) {
  const TimeSeries ts = read_time_series(series_path);
  double eg = ground_energy;
  if (!have_ground) {
    TTNState ref = initial_state(cfg.params, cfg.gs);
    eg = find_ground_state(ref, cfg.params, cfg.sched.u_f, cfg.gs).energy;
  }
  const SeriesAnalysis a = analyze_series(ts, cfg.effective_window(), eg);

  KvList kv;
  add_kv(kv, "ground_energy_final", eg);
  add_kv(kv, "energy_final", ts.energy.back());
  add_kv(kv, "residual_energy", a.residual);
  add_kv(kv, "i0", a.i0);
  add_kv(kv, "omega", a.omega);
  add_kv(kv, "fourier_amplitude", a.fourier_amp);
  add_kv(kv, "local_spread", a.spread);
  add_kv(kv, "window_start", a.window.t1);
  add_kv(kv, "window_end", a.window.t2);
  print_kv(kv);
  if (!out_summary.empty()) write_kv(out_summary, kv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistent-current annealing on a flux-pierced Bose-Hubbard ring"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--set", overrides, "override, key=value (repeatable)");

  auto* c_ground = app.add_subcommand("ground", "variational ground state at one interaction");
  double g_u = -1;
  bool g_have_u = false;
  std::string g_summary, g_ckpt;
  c_ground->add_option("--u", g_u, "interaction strength (default: config `interaction`)")
      ->each([&](const std::string&) { g_have_u = true; });
  c_ground->add_option("--out-summary", g_summary, "write key/value summary here");
  c_ground->add_option("--checkpoint", g_ckpt, "save the optimized network here");

  auto* c_sweep = app.add_subcommand("sweep", "ground state along a list of interactions");
  std::string s_list, s_out;
  c_sweep->add_option("--u-list", s_list, "comma-separated interactions")->required();
  c_sweep->add_option("--out", s_out, "write the table here");

  auto* c_anneal = app.add_subcommand("anneal", "ramp the interaction and analyze the trace");
  std::string a_series, a_summary, a_ckpt;
  c_anneal->add_option("--out-series", a_series, "write the sampled trace here");
  c_anneal->add_option("--out-summary", a_summary, "write key/value summary here");
  c_anneal->add_option("--checkpoint", a_ckpt, "save the final network here");

  auto* c_exact = app.add_subcommand("exact", "dense-sector reference calculations");
  double e_u = -1;
  bool e_have_u = false;
  int e_levels = 6;
  std::string e_spectrum, e_series;
  bool e_evolve = false;
  c_exact->add_option("--u", e_u, "interaction strength (default: config `interaction`)")
      ->each([&](const std::string&) { e_have_u = true; });
  c_exact->add_option("--levels", e_levels, "spectrum size")->check(CLI::PositiveNumber);
  c_exact->add_option("--out-spectrum", e_spectrum, "write the labeled spectrum here");
  c_exact->add_flag("--evolve", e_evolve, "also integrate the ramp in the full sector");
  c_exact->add_option("--out-series", e_series, "write the evolved trace here");

  auto* c_perturb = app.add_subcommand("perturb", "strong-coupling gap estimates");
  std::string p_list = "", p_out;
  c_perturb->add_option("--u-list", p_list, "comma-separated interactions")->required();
  c_perturb->add_option("--out", p_out, "write the table here");

  auto* c_analyze = app.add_subcommand("analyze", "reduce a sampled trace");
  std::string an_series, an_summary;
  double an_ground = 0;
  bool an_have_ground = false;
  c_analyze->add_option("--series", an_series, "trace file to analyze")->required();
  c_analyze->add_option("--ground-energy", an_ground, "reference energy at the final interaction")
      ->each([&](const std::string&) { an_have_ground = true; });
  c_analyze->add_option("--out-summary", an_summary, "write key/value summary here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path, cfg);
    for (const auto& ov : overrides) {
      const auto eq = ov.find('=');
      if (eq == std::string::npos) throw ConfigError("override needs key=value: " + ov);
      set_key(cfg, ov.substr(0, eq), ov.substr(eq + 1));
    }

    if (c_ground->parsed())
      return cmd_ground(cfg, g_have_u ? g_u : cfg.params.U, g_summary, g_ckpt);
    if (c_sweep->parsed()) return cmd_sweep(cfg, parse_list(s_list), s_out);
    if (c_anneal->parsed()) return cmd_anneal(cfg, a_series, a_summary, a_ckpt);
    if (c_exact->parsed())
      return cmd_exact(cfg, e_have_u ? e_u : cfg.params.U, e_levels, e_spectrum, e_evolve,
                       e_series);
    if (c_perturb->parsed()) return cmd_perturb(cfg, parse_list(p_list), p_out);
    if (c_analyze->parsed())
      return cmd_analyze(cfg, an_series, an_ground, an_have_ground, an_summary);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
