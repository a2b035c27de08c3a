#include "ttnring/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace ttnring {

std::vector<std::size_t> window_rows(const TimeSeries& ts, const AnalysisWindow& w) {
  if (!(w.t2 > w.t1)) throw StructuralError("window_rows: empty window");
  const double eps = 1e-9 * std::max(1.0, std::abs(w.t2));
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < ts.rows(); ++i)
    if (ts.t[i] >= w.t1 - eps && ts.t[i] <= w.t2 + eps) rows.push_back(i);
  return rows;
}

double oscillation_amplitude(const TimeSeries& ts, const AnalysisWindow& w) {
  const auto rows = window_rows(ts, w);
  if (rows.size() < 2) throw StructuralError("oscillation_amplitude: too few samples");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t r : rows) {
    lo = std::min(lo, ts.i_total[r]);
    hi = std::max(hi, ts.i_total[r]);
  }
  return 0.5 * (hi - lo);
}

FourierPeak current_fourier_peak(const TimeSeries& ts, const AnalysisWindow& w) {
  const auto rows = window_rows(ts, w);
  const std::size_t n = rows.size();
  if (n < 8) throw StructuralError("current_fourier_peak: too few samples");

  std::vector<double> t(n), f(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = ts.t[rows[i]];
    f[i] = ts.i_total[rows[i]];
  }
  const double width = t.back() - t.front();
  if (width <= 0) throw StructuralError("current_fourier_peak: degenerate window");

  auto trapz = [&](auto&& g) {
    std::complex<double> acc = 0;
    for (std::size_t i = 0; i + 1 < n; ++i)
      acc += 0.5 * (g(i) + g(i + 1)) * (t[i + 1] - t[i]);
    return acc;
  };
  const double mean = trapz([&](std::size_t i) { return std::complex<double>(f[i], 0); }).real() / width;

  double dt_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i) dt_min = std::min(dt_min, t[i + 1] - t[i]);
  const double omega_max = M_PI / dt_min;
  const double domega = 2.0 * M_PI / (8.0 * width);
  const int nk = std::max(3, static_cast<int>(omega_max / domega));

  std::vector<double> mag(nk + 1, 0.0);
  int best = 1;
  for (int k = 1; k <= nk; ++k) {
    const double om = k * domega;
    const std::complex<double> F = trapz([&](std::size_t i) {
      return (f[i] - mean) * std::exp(std::complex<double>(0, -om * t[i]));
    });
    mag[k] = std::abs(F);
    if (mag[k] > mag[best]) best = k;
  }

  double omega = best * domega;
  double peak = mag[best];
  if (best > 1 && best < nk) {
    const double ym = mag[best - 1], y0 = mag[best], yp = mag[best + 1];
    const double den = ym - 2 * y0 + yp;
    if (den < 0) {
      const double delta = 0.5 * (ym - yp) / den;
      omega += delta * domega;
      peak = y0 - 0.25 * (ym - yp) * delta;
    }
  }
  FourierPeak out;
  out.omega = omega;
  out.amplitude = 2.0 * peak / width;
  return out;
}

double residual_energy(double e_final, double e_ground) {
  const double eps = e_final - e_ground;
  if (eps < 0 && eps > -1e-8 * std::max(1.0, std::abs(e_ground))) return 0.0;
  return eps;
}

AlphaFit fit_alpha(const std::vector<std::pair<double, double>>& i0_eps) {
  if (i0_eps.empty()) throw StructuralError("fit_alpha: no points");
  AlphaFit out;
  out.ratio_min = std::numeric_limits<double>::infinity();
  out.ratio_max = -out.ratio_min;
  double sum = 0;
  for (const auto& pe : i0_eps) {
    if (pe.first <= 0) throw NumericalError("fit_alpha: nonpositive amplitude");
    const double r = pe.second / (pe.first * pe.first);
    sum += r;
    out.ratio_min = std::min(out.ratio_min, r);
    out.ratio_max = std::max(out.ratio_max, r);
  }
  out.alpha = sum / static_cast<double>(i0_eps.size());
  return out;
}

double local_current_spread(const TimeSeries& ts, const AnalysisWindow& w) {
  const auto rows = window_rows(ts, w);
  if (rows.empty()) throw StructuralError("local_current_spread: empty window");
  double worst = 0;
  for (std::size_t r : rows) {
    const auto& ik = ts.i_local[r];
    const double m = ts.i_total[r];
    double ss = 0;
    for (double v : ik) ss += (v - m) * (v - m);
    worst = std::max(worst, std::sqrt(ss / static_cast<double>(ik.size())));
  }
  return worst;
}

}  // namespace ttnring
