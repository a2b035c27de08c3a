#include "ttnring/runner.hpp"

#include "ttnring/environment.hpp"

namespace ttnring {

SeriesAnalysis analyze_series(const TimeSeries& ts, const AnalysisWindow& w,
                              double e_ground_final) {
  SeriesAnalysis out;
  out.window = w;
  out.i0 = oscillation_amplitude(ts, w);
  const FourierPeak pk = current_fourier_peak(ts, w);
  out.omega = pk.omega;
  out.fourier_amp = pk.amplitude;
  out.spread = local_current_spread(ts, w);
  if (ts.rows() == 0) throw StructuralError("analyze_series: empty series");
  out.residual = residual_energy(ts.energy.back(), e_ground_final);
  return out;
}

AnnealOutcome run_anneal_pipeline(const RunConfig& cfg, TTNState* final_state) {
  cfg.validate();
  const BHParams& p = cfg.params;

  AnnealOutcome out;
  TTNState state = initial_state(p, cfg.gs);
  const GsResult gs = find_ground_state(state, p, cfg.sched.u_i, cfg.gs);
  out.e_ground_start = gs.energy;
  out.gs_sweeps = gs.sweeps;
  out.gs_converged = gs.converged;
  const TermList cur = current_terms(p);
  out.current_start = expectation(state, cur);

  TdvpConfig tcfg = cfg.tdvp;
  tcfg.t_end = cfg.t_end();
  out.series = run_annealing(state, p, cfg.sched, tcfg, &out.stats);
  out.e_final = out.series.energy.back();
  if (final_state) *final_state = state;

  // Independent reference at the final interaction.
  TTNState ref = initial_state(p, cfg.gs);
  const GsResult gs_f = find_ground_state(ref, p, cfg.sched.u_f, cfg.gs);
  out.e_ground_final = gs_f.energy;

  out.analysis = analyze_series(out.series, cfg.effective_window(), out.e_ground_final);
  return out;
}

}  // namespace ttnring
