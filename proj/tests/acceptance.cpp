// Acceptance gate for the ring-annealing engine.  Each numbered check prints
// one [PASS]/[FAIL] verdict with indented evidence lines; the binary exits
// nonzero if any check fails.  The L = 16 production run takes hours and is
// opt-in via RING_RUN_LONG=1; everything else is sized for minutes.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "ttnring/analysis.hpp"
#include "ttnring/config.hpp"
#include "ttnring/environment.hpp"
#include "ttnring/exact.hpp"
#include "ttnring/groundstate.hpp"
#include "ttnring/model.hpp"
#include "ttnring/perturb.hpp"
#include "ttnring/runner.hpp"
#include "ttnring/tdvp.hpp"
#include "ttnring/ttn.hpp"

using namespace ttnring;

namespace {

int g_structural_checks = 0;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

class Criterion {
 public:
  explicit Criterion(std::string tag) : tag_(std::move(tag)) {}

  void note(std::string line) { lines_.push_back(std::move(line)); }
  void require(bool cond, std::string what) {
    lines_.push_back(std::string(cond ? "ok   " : "BAD  ") + what);
    ok_ = ok_ && cond;
  }

  bool run(const std::function<void(Criterion&)>& body) {
    const Timer tm;
    try {
      body(*this);
    } catch (const std::exception& e) {
      ok_ = false;
      lines_.push_back(std::string("exception: ") + e.what());
    }
    std::printf("[%s] %s  (%.1f s)\n", ok_ ? "PASS" : "FAIL", tag_.c_str(), tm.s());
    for (const auto& l : lines_) std::printf("       %s\n", l.c_str());
    std::fflush(stdout);
    return ok_;
  }

 private:
  std::string tag_;
  std::vector<std::string> lines_;
  bool ok_ = true;
};

BHParams ring8() {
  BHParams p;
  p.L = 8;
  p.d = 3;
  p.N = 8;
  p.phi = 0.7 * M_PI;
  return p;
}

GsConfig tight_gs(int max_bond) {
  GsConfig g;
  g.max_bond = max_bond;
  g.rel_threshold = 1e-14;
  g.energy_tol = 1e-13;
  g.max_sweeps = 200;
  g.krylov_tol = 1e-12;
  return g;
}

struct RampResult {
  TimeSeries ts;
  RunStats stats;
  TTNState state;
  GsResult prep;
};

// Ground prep at prep_u, then the sampled ramp; the final network is always
// checked for structural charge consistency.
RampResult run_ramp(const BHParams& p, const AnnealSchedule& sched, const TdvpConfig& cfg,
                    const GsConfig& gs, double prep_u) {
  RampResult out;
  out.state = initial_state(p, gs);
  out.prep = find_ground_state(out.state, p, prep_u, gs);
  out.ts = run_annealing(out.state, p, sched, cfg, &out.stats);
  out.state.check_consistent();
  ++g_structural_checks;
  return out;
}

TimeSeries ed_series(const SectorHamiltonian& sh, const BHParams& p,
                     const AnnealSchedule& sched, Eigen::VectorXcd psi, double t_end,
                     double dt, int stride, double ktol) {
  const SparseMat i_tot = term_matrix(sh.basis, current_terms(p));
  TimeSeries ts;
  ts.n_sites = p.L;
  const double eps = 1e-12 * std::max(1.0, t_end);
  auto measure = [&](int step, double t, const Eigen::VectorXcd& v) {
    if (step % stride != 0 && t < t_end - eps) return;
    const double u = schedule_u(sched, t);
    ts.t.push_back(t);
    ts.u.push_back(u);
    ts.i_total.push_back(std::real(v.dot(i_tot * v)));
    ts.i_local.emplace_back();
    const Eigen::VectorXcd hv = sh.h_hop * v + cplx(u, 0) * (sh.h_int * v);
    ts.energy.push_back(std::real(v.dot(hv)));
    ts.norm.push_back(v.norm());
    ts.max_d.push_back(0);
    ts.discarded.push_back(0.0);
  };
  exact_evolve(sh, sched, psi, 0.0, t_end, dt, ktol, measure);
  return ts;
}

double ed_ground_energy(const SectorHamiltonian& sh, double u) {
  return low_spectrum(sh.basis, sh.h(u), 1).energies[0];
}

// Indices of the two lowest translation-invariant levels.
struct Tau1Pair {
  int a = -1;
  int b = -1;
};
Tau1Pair tau1_pair(const SpectrumResult& spec) {
  Tau1Pair out;
  for (int i = 0; i < spec.energies.size(); ++i) {
    if (std::abs(spec.tau[i] - cplx(1, 0)) > 1e-3) continue;
    if (out.a < 0)
      out.a = i;
    else {
      out.b = i;
      return out;
    }
  }
  throw StructuralError("tau1_pair: fewer than two translation-invariant levels");
}

double window_mean(const TimeSeries& ts, const AnalysisWindow& w) {
  const auto rows = window_rows(ts, w);
  double sum = 0;
  for (std::size_t r : rows) sum += ts.i_total[r];
  return sum / static_cast<double>(rows.size());
}

TermList number_terms(const BHParams& p) {
  TermList terms;
  for (int j = 1; j <= p.L; ++j) terms.push_back({{j}, {op_n(p.d)}, cplx(1, 0)});
  return terms;
}

}  // namespace

int main() {
  std::printf("acceptance checks, flux-ring annealing engine\n");
  const char* long_env = std::getenv("RING_RUN_LONG");
  std::printf("long production check: %s\n\n",
              long_env && std::string(long_env) == "1" ? "enabled"
                                                       : "off (set RING_RUN_LONG=1)");
  bool all = true;

  all &= Criterion("C1 first-order shell coefficient").run([](Criterion& c) {
    const Timer tm;
    const FirstOrder fo = first_order(32, 0.7 * M_PI);
    const double secs = tm.s();
    const double closed = -6.0 * std::cos(M_PI / 32);
    c.note(fmt("e1 = %.12f, closed form -6 cos(pi/32) = %.12f", fo.e1, closed));
    c.require(std::abs(fo.e1 + 5.97) <= 0.01, "within 0.01 of -5.97");
    c.require(std::abs(fo.e1 - closed) <= 1e-9, "matches the closed form to 1e-9");
    c.require(secs < 1.0, fmt("runtime %.3f s < 1 s", secs));
  });

  all &= Criterion("C2 second-order coefficients at L = 32").run([](Criterion& c) {
    const Timer tm;
    const SecondOrderGround sg = second_order_ground(32);
    const double e12 = second_order_excited(32, 0.7 * M_PI);
    const double cgap = e12 - sg.closed;
    c.note(fmt("ground closed %.1f, enumerated %.12f", sg.closed, sg.enumerated));
    c.note(fmt("excited %.6f, gap coefficient c = %.6f", e12, cgap));
    c.require(sg.closed == -128.0, "closed-form ground coefficient is exactly -128");
    c.require(std::abs(sg.enumerated + 128.0) <= 1e-9, "enumerated route agrees to 1e-9");
    c.require(std::abs(e12 + 122.8) <= 0.1, "excited coefficient within 0.1 of -122.8");
    c.require(std::abs(cgap - 5.20) <= 0.1, "c within 0.1 of 5.20");
    c.require(tm.s() < 60.0, fmt("runtime %.1f s < 60 s", tm.s()));
  });

  all &= Criterion("C3 perturbative gap vs dense spectrum at L = 6").run([](Criterion& c) {
    const Timer tm;
    BHParams p;
    p.L = 6;
    p.d = 5;
    p.N = 6;
    p.phi = 0.7 * M_PI;
    const SectorHamiltonian sh = build_sector_hamiltonian(p);
    for (double u : {20.0, 40.0}) {
      const SpectrumResult spec = low_spectrum(sh.basis, sh.h(u), 40);
      const Tau1Pair pr = tau1_pair(spec);
      const double gap_ed = spec.energies[pr.b] - spec.energies[pr.a];
      const PerturbGap g = gap(p.L, p.phi, u);
      const double tol = 5.0 / (u * u);
      const double resid = std::abs(g.delta2 - gap_ed);
      c.note(fmt("u = %g: gap_ed %.6f, delta2 %.6f, delta1 %.6f", u, gap_ed, g.delta2,
                 g.delta1));
      c.note(fmt("u = %g: residual * u^2 = %.1f (third-order band constant)", u,
                 resid * u * u));
      c.require(resid <= tol, fmt("u = %g: |delta2 - gap_ed| = %.2e <= 5/u^2 = %.2e", u,
                                  resid, tol));
    }
    c.require(tm.s() < 60.0, fmt("runtime %.1f s < 60 s", tm.s()));
  });

  all &= Criterion("C4 annealed tree matches dense propagation").run([](Criterion& c) {
    const BHParams p = ring8();
    AnnealSchedule sched;
    sched.u_i = 2.0;
    sched.u_f = 7.0;
    sched.gamma = 1.0 / 6.0;
    const double t_end = sched.t0() + 5.0;  // ramp ends at 15

    TdvpConfig cfg;
    cfg.max_bond = 81;  // every L = 8, d = 3 link rank; nothing is truncated
    cfg.rel_threshold = 1e-14;
    cfg.krylov_tol = 1e-12;
    cfg.dt = 2e-3;
    cfg.t_end = t_end;
    cfg.measure_stride = 25;
    const RampResult run = run_ramp(p, sched, cfg, tight_gs(81), sched.u_i);

    const SectorHamiltonian sh = build_sector_hamiltonian(p);
    Eigen::VectorXcd psi = low_spectrum(sh.basis, sh.h(sched.u_i), 1).states.col(0);
    const TimeSeries ed =
        ed_series(sh, p, sched, psi, t_end, cfg.dt, cfg.measure_stride, 1e-12);

    c.note(fmt("prep energy %.12f (%d sweeps), samples %zu, max bond %d", run.prep.energy,
               run.prep.sweeps, run.ts.rows(), run.stats.max_bond_seen));
    c.require(run.ts.rows() == ed.rows(),
              fmt("sample grids align (%zu vs %zu rows)", run.ts.rows(), ed.rows()));
    if (run.ts.rows() != ed.rows()) return;

    double max_dt = 0, max_di = 0, max_de = 0;
    for (std::size_t r = 0; r < ed.rows(); ++r) {
      max_dt = std::max(max_dt, std::abs(run.ts.t[r] - ed.t[r]));
      max_di = std::max(max_di, std::abs(run.ts.i_total[r] - ed.i_total[r]));
      max_de = std::max(max_de, std::abs(run.ts.energy[r] - ed.energy[r]));
    }
    const double e0f = ed_ground_energy(sh, sched.u_f);
    const double eps_tree = run.ts.energy.back() - e0f;
    const double eps_ed = ed.energy.back() - e0f;
    c.note(fmt("residuals: tree %.9e, dense %.9e; discarded %.1e, norm drift %.1e",
               eps_tree, eps_ed, run.stats.discarded_weight, run.stats.norm_drift));
    c.require(max_dt < 1e-9, fmt("sample times agree (max %.1e)", max_dt));
    c.require(max_di < 1e-4, fmt("max |I_tree - I_dense| = %.3e < 1e-4", max_di));
    c.require(std::abs(eps_tree - eps_ed) < 1e-5,
              fmt("residual energies differ by %.3e < 1e-5", std::abs(eps_tree - eps_ed)));
    c.note(fmt("max energy deviation along the ramp %.3e", max_de));
  });

  all &= Criterion("C5 oscillation frequency matches the spectral gap").run([](Criterion& c) {
    const BHParams p = ring8();
    AnnealSchedule sched;
    sched.u_i = 2.0;
    sched.u_f = 12.0;
    sched.gamma = 1.0 / 6.0;
    const double t0 = sched.t0();  // 30
    const double t_end = t0 + 15.0;

    TdvpConfig cfg;
    cfg.max_bond = 81;
    cfg.rel_threshold = 1e-14;
    cfg.krylov_tol = 1e-12;
    cfg.dt = 5e-3;
    cfg.t_end = t_end;
    cfg.measure_stride = 25;
    const RampResult run = run_ramp(p, sched, cfg, tight_gs(81), sched.u_i);

    const FourierPeak pk = current_fourier_peak(run.ts, {t0, t_end});
    const SectorHamiltonian sh = build_sector_hamiltonian(p);
    const SpectrumResult spec = low_spectrum(sh.basis, sh.h(sched.u_f), 40);
    const Tau1Pair pr = tau1_pair(spec);
    const double gap_ed = spec.energies[pr.b] - spec.energies[pr.a];

    c.note(fmt("omega = %.6f, dense gap = %.6f, ratio %.4f", pk.omega, gap_ed,
               pk.omega / gap_ed));
    c.note(fmt("fourier amplitude %.3e, i0 %.3e", pk.amplitude,
               oscillation_amplitude(run.ts, {t0, t_end})));
    c.require(std::abs(pk.omega - gap_ed) <= 0.05 * gap_ed,
              "peak frequency within 5% of the translation-invariant gap");
  });

  all &= Criterion("C6 dissipated energy scales with the oscillation amplitude")
             .run([](Criterion& c) {
               const BHParams p = ring8();
               const SectorHamiltonian sh = build_sector_hamiltonian(p);
               const SparseMat i_tot = term_matrix(sh.basis, current_terms(p));
               const Eigen::VectorXcd psi0 =
                   low_spectrum(sh.basis, sh.h(2.0), 1).states.col(0);
               const double e0f = ed_ground_energy(sh, 12.0);

               const SpectrumResult spec = low_spectrum(sh.basis, sh.h(12.0), 40);
               const Tau1Pair pr = tau1_pair(spec);
               const double delta = spec.energies[pr.b] - spec.energies[pr.a];
               const double i12 = std::abs(
                   spec.states.col(pr.a).dot(i_tot * spec.states.col(pr.b)));
               // In the two-level reduction the current oscillates as
               // 2 Re[c1* c2 I12 e^{-i delta t}], so the mode amplitude of the
               // delta tone is 2 |c1 c2 I12| and I0 = |c2 I12| is half of it.
               // eps / I0^2 = |c2|^2 delta / |c2 I12|^2 then reduces to
               // delta / I12^2 exactly.  Peak-to-peak catches the faint extra
               // tones excited at the ramp kink, so the spectral estimate is
               // the one the identity is about; both are reported.
               const double pred = delta / (i12 * i12);

               const std::vector<double> gammas = {1.0 / 6, 1.0 / 8, 1.0 / 10, 1.0 / 14,
                                                   1.0 / 20};
               std::vector<double> ratios;
               for (double g : gammas) {
                 AnnealSchedule sched;
                 sched.u_i = 2.0;
                 sched.u_f = 12.0;
                 sched.gamma = g;
                 const double t0 = sched.t0();
                 const double t_end = t0 + 15.0;
                 const TimeSeries ts =
                     ed_series(sh, p, sched, psi0, t_end, 5e-3, 5, 1e-10);
                 const FourierPeak pk = current_fourier_peak(ts, {t0, t_end});
                 const double i0 = 0.5 * pk.amplitude;
                 const double ptp = oscillation_amplitude(ts, {t0, t_end});
                 const double eps = ts.energy.back() - e0f;
                 const double r = eps / (i0 * i0);
                 ratios.push_back(r);
                 c.note(fmt("1/gamma = %4.0f: I0 %.5e (ptp/2 %.5e), eps %.5e, "
                            "eps/I0^2 %.4f",
                            1.0 / g, i0, 0.5 * ptp, eps, r));
               }

               double rmin = ratios[1], rmax = ratios[1];
               for (std::size_t i = 1; i < ratios.size(); ++i) {
                 rmin = std::min(rmin, ratios[i]);
                 rmax = std::max(rmax, ratios[i]);
               }
               const double mean3 = (ratios[2] + ratios[3] + ratios[4]) / 3.0;
               c.note(fmt("gap %.4f, |<1|I|2>| %.5f; two-level ratio %.4f", delta, i12,
                          pred));
               c.require(rmax / rmin <= 1.2,
                         fmt("four slowest ramps: ratio spread %.3f <= 1.2x", rmax / rmin));
               const double dev = std::abs(mean3 / pred - 1.0);
               c.require(dev <= 0.1, fmt("mean over three slowest %.4f within 10%% of "
                                         "the two-level ratio (off by %.1f%%)",
                                         mean3, 100 * dev));
             });

  all &= Criterion("C7 amplitude falls with slower ramps").run([](Criterion& c) {
    auto smoke = [](double gamma_val) {
      RunConfig cfg;
      cfg.params = ring8();
      cfg.sched.u_i = 2.0;
      cfg.sched.u_f = 12.0;
      cfg.sched.gamma = gamma_val;
      cfg.tdvp.max_bond = 30;
      cfg.tdvp.rel_threshold = 1e-12;
      cfg.tdvp.krylov_tol = 1e-11;
      cfg.tdvp.dt = 5e-3;
      cfg.tdvp.measure_stride = 10;
      cfg.gs.max_bond = 30;
      cfg.gs.rel_threshold = 1e-12;
      cfg.hold_time = 10.0;
      TTNState final_state;
      AnnealOutcome out = run_anneal_pipeline(cfg, &final_state);
      final_state.check_consistent();
      ++g_structural_checks;
      return out;
    };

    const AnnealOutcome fast = smoke(0.5);
    const AnnealOutcome slow = smoke(1.0 / 6);
    for (const AnnealOutcome* o : {&fast, &slow}) {
      const double mean = window_mean(o->series, o->analysis.window);
      c.note(fmt("hold mean %.4e vs prepared current %.4f; i0 %.4e", mean,
                 o->current_start, o->analysis.i0));
      c.require(std::abs(mean) <= 0.2 * std::abs(o->current_start),
                "held current decays to a near-zero mean");
      c.require(o->analysis.i0 > 1e-4, "oscillations persist above the noise floor");
    }
    c.require(fast.analysis.i0 > slow.analysis.i0,
              fmt("i0 falls with 1/gamma: %.4e (1/2) > %.4e (1/6)", fast.analysis.i0,
                  slow.analysis.i0));

    const char* env = std::getenv("RING_RUN_LONG");
    if (env && std::string(env) == "1") {
      std::vector<double> i0s;
      for (double g : {0.5, 1.0 / 6, 1.0 / 14}) {
        RunConfig cfg;
        cfg.params.L = 16;
        cfg.params.d = 5;
        cfg.params.N = 16;
        cfg.params.phi = 0.7 * M_PI;
        cfg.sched.u_i = 2.0;
        cfg.sched.u_f = 12.0;
        cfg.sched.gamma = g;
        cfg.tdvp.max_bond = 60;
        cfg.tdvp.rel_threshold = 1e-10;
        cfg.tdvp.dt = 5e-3;
        cfg.tdvp.measure_stride = 20;
        cfg.gs.max_bond = 60;
        cfg.hold_time = 15.0;
        TTNState final_state;
        const AnnealOutcome out = run_anneal_pipeline(cfg, &final_state);
        final_state.check_consistent();
        ++g_structural_checks;
        const double mean = window_mean(out.series, out.analysis.window);
        i0s.push_back(out.analysis.i0);
        c.note(fmt("L = 16, 1/gamma = %4.0f: i0 %.4e, hold mean %.4e", 1.0 / g,
                   out.analysis.i0, mean));
        c.require(std::abs(mean) <= 0.2 * std::abs(out.current_start),
                  "L = 16 held current decays to a near-zero mean");
      }
      c.require(i0s[0] > i0s[1] && i0s[1] > i0s[2],
                "L = 16 amplitudes fall strictly with 1/gamma");
    } else {
      c.note("L = 16, D = 60 production run skipped (hours); opt in with RING_RUN_LONG=1");
    }
  });

  all &= Criterion("C8 bond-current spread falls with bond dimension").run([](Criterion& c) {
    const BHParams p = ring8();
    AnnealSchedule sched;
    sched.u_i = 2.0;
    sched.u_f = 12.0;
    sched.gamma = 0.5;
    const double t0 = sched.t0();  // 10
    const double t_end = t0 + 3.0;

    std::vector<double> spreads;
    for (int d_max : {20, 30, 40}) {
      TdvpConfig cfg;
      cfg.max_bond = d_max;
      cfg.rel_threshold = 1e-12;
      cfg.krylov_tol = 1e-11;
      cfg.dt = 5e-3;
      cfg.t_end = t_end;
      cfg.measure_stride = 10;
      GsConfig gs;
      gs.max_bond = d_max;
      gs.rel_threshold = 1e-12;
      const RampResult run = run_ramp(p, sched, cfg, gs, sched.u_i);
      const double s = local_current_spread(run.ts, {t0, t_end});
      spreads.push_back(s);
      c.note(fmt("D = %2d: spread %.6e, discarded %.2e", d_max, s,
                 run.stats.discarded_weight));
    }
    c.require(spreads[0] > spreads[1] && spreads[1] > spreads[2],
              "spread falls strictly along D = 20 -> 30 -> 40");

    // Untruncated reference on a gentler ramp: the represented state is the
    // propagated one to solver precision, so the ring symmetry survives.
    AnnealSchedule gentle;
    gentle.u_i = 2.0;
    gentle.u_f = 4.0;
    gentle.gamma = 0.5;
    TdvpConfig cfg;
    cfg.max_bond = 81;
    cfg.rel_threshold = 1e-14;
    cfg.krylov_tol = 1e-13;
    cfg.dt = 2e-3;
    cfg.t_end = gentle.t0() + 2.0;  // ramp ends at 2
    cfg.measure_stride = 10;
    const RampResult run = run_ramp(p, gentle, cfg, tight_gs(81), gentle.u_i);
    const double s_exact = local_current_spread(run.ts, {gentle.t0(), cfg.t_end});
    c.require(s_exact < 1e-8, fmt("untruncated spread %.3e < 1e-8", s_exact));
  });

  all &= Criterion("C9 conservation and stationarity").run([](Criterion& c) {
    const BHParams p = ring8();
    AnnealSchedule flat;
    flat.u_i = 4.0;
    flat.u_f = 4.0;
    flat.gamma = 1.0;

    TdvpConfig cfg;
    cfg.max_bond = 81;
    cfg.rel_threshold = 1e-14;
    cfg.krylov_tol = 1e-12;
    cfg.dt = 5e-3;
    cfg.t_end = 0.5;  // 100 steps
    cfg.measure_stride = 5;

    // Fixed interaction, started away from any eigenstate: the recorded
    // energy must stay put.
    const RampResult drift = run_ramp(p, flat, cfg, tight_gs(81), 2.0);
    double max_drift = 0;
    for (std::size_t r = 0; r < drift.ts.rows(); ++r)
      max_drift = std::max(max_drift, std::abs(drift.ts.energy[r] - drift.ts.energy[0]));
    c.note(fmt("energy drift %.3e over %zu samples, norm drift %.3e", max_drift,
               drift.ts.rows(), drift.stats.norm_drift));
    c.require(max_drift < 1e-6, "energy drift < 1e-6 over 100 fixed-interaction steps");
    c.require(drift.stats.norm_drift < 1e-9, "pre-renormalization norm drift < 1e-9");

    TTNState probe = drift.state;
    const double n_total = expectation(probe, number_terms(p));
    c.require(std::abs(n_total - p.N) < 1e-9,
              fmt("particle number %.12f stays pinned at %d", n_total, p.N));

    // An eigenstate may only pick up a phase.
    GsConfig gs = tight_gs(81);
    gs.krylov_tol = 1e-13;
    TTNState st = initial_state(p, gs);
    find_ground_state(st, p, 4.0, gs);
    const TTNState before = st;
    RunStats stats;
    run_annealing(st, p, flat, cfg, &stats);
    st.check_consistent();
    ++g_structural_checks;
    const double fid = std::abs(overlap(before, st));
    c.note(fmt("eigenstate fidelity deviation %.3e", std::abs(fid - 1.0)));
    c.require(std::abs(fid - 1.0) < 1e-10, "stationary fidelity within 1e-10 of one");

    c.require(g_structural_checks >= 8,
              fmt("structural charge checks passed on %d evolved networks",
                  g_structural_checks));
  });

  all &= Criterion("C10 production-scale runs").run([](Criterion& c) {
    c.note("NOTE: L = 32, D = 60 production curves run through the command line");
    c.note("      (anneal --set sites=32 --set local_dim=5 --set max_bond=60 ...)");
    c.note("      and are intentionally not gated here.");
  });

  std::printf("\n%s\n", all ? "all criteria passed" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}
