#pragma once

// Variational ground-state search: two-tensor sweeps where each update pair
// is replaced by the lowest eigenvector of its effective operator, then
// split with truncation.  The last pair of a sweep couples every branch, so
// its Ritz value is the full energy expectation.

#include <vector>

#include "ttnring/model.hpp"
#include "ttnring/ttn.hpp"

namespace ttnring {

struct GsConfig {
  int max_bond = 60;
  double rel_threshold = 1e-10;
  double energy_tol = 1e-10;  // relative sweep-to-sweep change
  int max_sweeps = 60;
  double krylov_tol = 1e-9;   // eigenpair residual target
  int init_bond = 8;          // per-sector cap of the random start
  std::uint64_t seed = 7;
};

struct GsResult {
  double energy = 0.0;
  int sweeps = 0;
  bool converged = false;
};

// Optimizes `state` in place at interaction strength u (the params.U field
// is ignored; hopping/flux/filling come from params).
GsResult find_ground_state(TTNState& state, const BHParams& params, double u,
                           const GsConfig& cfg);

// Unit-filling-style initial product state for N particles on L sites.
std::vector<int> initial_occupations(const BHParams& params);

// Random charge-aware start for the sweeps.
TTNState initial_state(const BHParams& params, const GsConfig& cfg);

struct GroundPoint {
  double u = 0.0;
  double energy = 0.0;
  double current = 0.0;
  int max_d = 0;
  int sweeps = 0;
  bool converged = false;
};

// Ground state per interaction strength, warm-starting each point from the
// previous one.
std::vector<GroundPoint> ground_current_curve(const BHParams& params,
                                              const std::vector<double>& us,
                                              const GsConfig& cfg);

}  // namespace ttnring
