#include "ttnring/groundstate.hpp"

#include <cmath>

#include "ttnring/environment.hpp"
#include "ttnring/krylov.hpp"

namespace ttnring {

namespace {

SymTensor restore_leg_order(SymTensor cr, int f) {
  if (f == 1) return transpose(cr, {1, 0, 2});
  if (f == 2) return transpose(cr, {1, 2, 0});
  return cr;
}

}  // namespace

std::vector<int> initial_occupations(const BHParams& params) {
  const int n = params.particles();
  std::vector<int> occ(params.L, n / params.L);
  for (int i = 0; i < n % params.L; ++i) ++occ[i];
  for (int v : occ)
    if (v > params.d - 1) throw StructuralError("initial_occupations: filling exceeds d-1");
  return occ;
}

TTNState initial_state(const BHParams& params, const GsConfig& cfg) {
  params.validate();
  const TreeTopology topo = TreeTopology::build(params.L);
  const int d0 = std::max(1, std::min(cfg.init_bond, cfg.max_bond));
  return random_state(topo, params.d, params.particles(), d0, cfg.seed);
}

GsResult find_ground_state(TTNState& state, const BHParams& params, double u,
                           const GsConfig& cfg) {
  params.validate();
  const TreeTopology& topo = state.topo;
  const TermList hop_terms = hopping_terms(params);
  const TermList int_terms = interaction_terms(params);
  EnvCache hop(&state, &hop_terms);
  EnvCache inter(&state, &int_terms);
  std::vector<EnvCache*> caches{&hop, &inter};
  const std::vector<double> scales{1.0, u};

  GsResult res;
  double prev = 0;
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    double energy = 0;
    for (int pi = 0; pi < topo.num_pairs(); ++pi) {
      const TreeTopology::Pair& pr = topo.pairs[pi];
      isometrize_to(state, pr.upper);
      SymTensor block = contract(state.tensors[pr.lower], state.tensors[pr.upper],
                                 {{2, pr.lower_leg_on_upper}});
      EffHam h2(pair_ports(state, pr), caches, scales);
      auto [theta, opt] = krylov_lowest(
          [&](const SymTensor& x) { return h2.apply(x); }, block, cfg.krylov_tol);
      energy = theta;
      SvdResult svd = svd_truncate(opt, {0, 1}, cfg.max_bond, cfg.rel_threshold);
      state.tensors[pr.lower] = std::move(svd.u);
      state.tensors[pr.upper] =
          restore_leg_order(absorb_singular(svd.v, svd.s, 'v'), pr.lower_leg_on_upper);
      state.center = pr.upper;
      state.bump(pr.lower);
      state.bump(pr.upper);
      state.normalize();
    }
    res.energy = energy;
    res.sweeps = sweep + 1;
    if (sweep > 0 && std::abs(energy - prev) <= cfg.energy_tol * std::max(1.0, std::abs(energy))) {
      res.converged = true;
      break;
    }
    prev = energy;
  }
  return res;
}

std::vector<GroundPoint> ground_current_curve(const BHParams& params,
                                              const std::vector<double>& us,
                                              const GsConfig& cfg) {
  params.validate();
  TTNState state = initial_state(params, cfg);
  const TermList cur_terms = current_terms(params);

  std::vector<GroundPoint> out;
  out.reserve(us.size());
  for (double u : us) {
    GsResult gs = find_ground_state(state, params, u, cfg);
    GroundPoint pt;
    pt.u = u;
    pt.energy = gs.energy;
    pt.current = expectation(state, cur_terms);
    pt.max_d = state.max_bond();
    pt.sweeps = gs.sweeps;
    pt.converged = gs.converged;
    out.push_back(pt);
  }
  return out;
}

}  // namespace ttnring
