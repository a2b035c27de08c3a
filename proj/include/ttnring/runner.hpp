#pragma once

// End-to-end pipelines shared by the command line tool and the test suites:
// prepare the interacting ground state, ramp the interaction, hold, and
// reduce the sampled trace to oscillation amplitude, dominant frequency,
// local spread, and residual energy against an independently converged
// reference ground state at the final interaction.

#include "ttnring/analysis.hpp"
#include "ttnring/config.hpp"

namespace ttnring {

struct SeriesAnalysis {
  double i0 = 0.0;           // half peak-to-peak of the total current
  double omega = 0.0;        // dominant frequency
  double fourier_amp = 0.0;  // single-sided amplitude at omega
  double spread = 0.0;       // max RMS bond-current spread
  double residual = 0.0;     // final energy above the reference
  AnalysisWindow window;
};

SeriesAnalysis analyze_series(const TimeSeries& ts, const AnalysisWindow& w,
                              double e_ground_final);

struct AnnealOutcome {
  TimeSeries series;
  RunStats stats;
  double e_ground_start = 0.0;  // prepared energy at u_i
  double current_start = 0.0;   // persistent current of the prepared state
  double e_ground_final = 0.0;  // reference energy at u_f
  double e_final = 0.0;         // evolved energy at t_end
  int gs_sweeps = 0;
  bool gs_converged = false;
  SeriesAnalysis analysis;
};

// Full pipeline.  When `final_state` is non-null the evolved network is
// copied there (e.g. for checkpointing).
AnnealOutcome run_anneal_pipeline(const RunConfig& cfg, TTNState* final_state = nullptr);

}  // namespace ttnring
