#pragma once

// Post-processing of sampled current/energy traces: oscillation amplitude
// and dominant frequency over a window, residual energy against a reference
// ground energy, and the site-resolved spread that diagnoses how far the
// current pattern is from a uniform persistent flow.

#include <utility>
#include <vector>

#include "ttnring/tdvp.hpp"

namespace ttnring {

struct AnalysisWindow {
  double t1 = 0.0;
  double t2 = 0.0;
};

// Row indices of samples falling inside the window (inclusive).
std::vector<std::size_t> window_rows(const TimeSeries& ts, const AnalysisWindow& w);

// Half the peak-to-peak excursion of the total current over the window.
double oscillation_amplitude(const TimeSeries& ts, const AnalysisWindow& w);

struct FourierPeak {
  double omega = 0.0;
  double amplitude = 0.0;  // single-sided: 2|F(omega)| / window length
};

// Dominant frequency of the mean-subtracted total current: direct quadrature
// on an 8x oversampled frequency grid plus quadratic peak refinement.
FourierPeak current_fourier_peak(const TimeSeries& ts, const AnalysisWindow& w);

// e_final - e_ground with small negative values (reference noise) clipped.
double residual_energy(double e_final, double e_ground);

struct AlphaFit {
  double alpha = 0.0;  // mean of eps / i0^2
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};

// Scaling fit for eps = alpha * i0^2 from (i0, eps) points.
AlphaFit fit_alpha(const std::vector<std::pair<double, double>>& i0_eps);

// Max over window samples of the RMS deviation of bond currents from their
// ring average.
double local_current_spread(const TimeSeries& ts, const AnalysisWindow& w);

}  // namespace ttnring
