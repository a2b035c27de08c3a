#pragma once

// Two-tensor sweep integrator on the tree.  One sweep advances the state by
// dt under the instantaneous Hamiltonian H = hopping + u * interaction with
// u frozen at the step midpoint: every update pair is evolved forward by dt
// through its two-tensor effective operator, split with truncation, and the
// freshly split center is evolved backward by dt through its one-tensor
// effective operator (skipped after the final pair).  At full bond dimension
// the forward and backward factors telescope to the exact step propagator.

#include <vector>

#include "ttnring/environment.hpp"
#include "ttnring/model.hpp"
#include "ttnring/ttn.hpp"

namespace ttnring {

struct TdvpConfig {
  int max_bond = 60;
  double rel_threshold = 1e-10;  // singular value cutoff, relative to largest
  double krylov_tol = 1e-12;
  double dt = 2e-3;
  double t_end = 0.0;
  int measure_stride = 10;  // steps between recorded samples
};

struct RunStats {
  double norm_drift = 0.0;        // max |norm - 1| seen before renormalizing
  double discarded_weight = 0.0;  // cumulative truncated weight
  int max_bond_seen = 0;  // largest link dimension any sweep SVD produced
  long matvecs = 0;
};

// Sampled observables; row i holds the state at time t[i].
struct TimeSeries {
  int n_sites = 0;
  std::vector<double> t;
  std::vector<double> u;
  std::vector<double> i_total;
  std::vector<std::vector<double>> i_local;  // per row: L bond currents
  std::vector<double> energy;
  std::vector<double> norm;
  std::vector<int> max_d;
  std::vector<double> discarded;  // cumulative at sample time

  std::size_t rows() const { return t.size(); }
};

// One sweep of duration dt at fixed interaction strength u.  The caches must
// be bound to `state` and to the split hopping / unit-interaction term lists.
void sweep_step(TTNState& state, EnvCache& hop, EnvCache& inter, double u, double dt,
                const TdvpConfig& cfg, RunStats* stats = nullptr);

// Ramp run from t = 0 to cfg.t_end.  Samples every measure_stride steps plus
// the initial and final states.  `state` should hold the interacting ground
// state at sched.u_i on entry.
TimeSeries run_annealing(TTNState& state, const BHParams& params,
                         const AnnealSchedule& sched, const TdvpConfig& cfg,
                         RunStats* stats = nullptr);

}  // namespace ttnring
