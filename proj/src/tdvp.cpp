#include "ttnring/tdvp.hpp"

#include <cmath>

#include "ttnring/krylov.hpp"

namespace ttnring {

namespace {

// Link leg of svd/absorb output back to its slot on the upper tensor.
SymTensor restore_leg_order(SymTensor cr, int f) {
  if (f == 1) return transpose(cr, {1, 0, 2});
  if (f == 2) return transpose(cr, {1, 2, 0});
  return cr;
}

}  // namespace

void sweep_step(TTNState& state, EnvCache& hop, EnvCache& inter, double u, double dt,
                const TdvpConfig& cfg, RunStats* stats) {
  const TreeTopology& topo = state.topo;
  std::vector<EnvCache*> caches{&hop, &inter};
  const std::vector<double> scales{1.0, u};
  KrylovStats kst;

  for (int pi = 0; pi < topo.num_pairs(); ++pi) {
    const TreeTopology::Pair& pr = topo.pairs[pi];
    isometrize_to(state, pr.upper);

    SymTensor block = contract(state.tensors[pr.lower], state.tensors[pr.upper],
                               {{2, pr.lower_leg_on_upper}});
    EffHam h2(pair_ports(state, pr), caches, scales);
    block = krylov_expm([&](const SymTensor& x) { return h2.apply(x); }, block,
                        cplx(0, -dt), cfg.krylov_tol, 80, &kst);

    SvdResult svd = svd_truncate(block, {0, 1}, cfg.max_bond, cfg.rel_threshold);
    state.tensors[pr.lower] = std::move(svd.u);
    state.tensors[pr.upper] =
        restore_leg_order(absorb_singular(svd.v, svd.s, 'v'), pr.lower_leg_on_upper);
    state.center = pr.upper;
    state.bump(pr.lower);
    state.bump(pr.upper);

    if (stats) {
      stats->discarded_weight += svd.discarded_weight;
      const double nrm = state.norm();
      stats->norm_drift = std::max(stats->norm_drift, std::abs(nrm - 1.0));
      const int link = state.tensors[pr.lower].index(2).dim();
      stats->max_bond_seen = std::max(stats->max_bond_seen, link);
    }
    state.normalize();

    if (pi + 1 < topo.num_pairs()) {
      EffHam h1(node_ports(state, pr.upper), caches, scales);
      state.tensors[pr.upper] =
          krylov_expm([&](const SymTensor& x) { return h1.apply(x); },
                      state.tensors[pr.upper], cplx(0, dt), cfg.krylov_tol, 80, &kst);
      state.bump(pr.upper);
      state.normalize();
    }
  }
  if (stats) stats->matvecs += kst.matvecs;
}

TimeSeries run_annealing(TTNState& state, const BHParams& params,
                         const AnnealSchedule& sched, const TdvpConfig& cfg,
                         RunStats* stats) {
  params.validate();
  sched.validate();
  if (cfg.dt <= 0 || cfg.t_end < 0) throw StructuralError("run_annealing: bad time grid");

  const TermList hop_terms = hopping_terms(params);
  const TermList int_terms = interaction_terms(params);
  EnvCache hop(&state, &hop_terms);
  EnvCache inter(&state, &int_terms);

  std::vector<TermList> bond_terms;
  std::vector<EnvCache> bond_caches;
  bond_terms.reserve(params.L);
  for (int k = 1; k <= params.L; ++k) bond_terms.push_back(local_current_term(params, k));
  bond_caches.reserve(params.L);
  for (int k = 0; k < params.L; ++k) bond_caches.emplace_back(&state, &bond_terms[k]);

  TimeSeries ts;
  ts.n_sites = params.L;
  RunStats local_stats;
  RunStats* st = stats ? stats : &local_stats;
  const double discarded_before = st->discarded_weight;

  auto measure = [&](double t) {
    const double uu = schedule_u(sched, t);
    ts.t.push_back(t);
    ts.u.push_back(uu);
    std::vector<double> ik(params.L);
    double itot = 0;
    for (int k = 0; k < params.L; ++k) {
      ik[k] = expectation(state, bond_caches[k]);
      itot += ik[k];
    }
    ts.i_local.push_back(std::move(ik));
    ts.i_total.push_back(itot / params.L);
    const double e_hop = expectation(state, hop);
    const double e_int = expectation(state, inter);
    ts.energy.push_back(e_hop + uu * e_int);
    ts.norm.push_back(state.norm());
    ts.max_d.push_back(state.max_bond());
    ts.discarded.push_back(st->discarded_weight - discarded_before);
  };

  measure(0.0);
  double t = 0;
  int step = 0;
  const double eps = 1e-12 * std::max(1.0, cfg.t_end);
  while (t < cfg.t_end - eps) {
    const double h = std::min(cfg.dt, cfg.t_end - t);
    const double u_mid = schedule_u(sched, t + 0.5 * h);
    sweep_step(state, hop, inter, u_mid, h, cfg, st);
    t += h;
    ++step;
    if (step % cfg.measure_stride == 0 || t >= cfg.t_end - eps) measure(t);
  }
  return ts;
}

}  // namespace ttnring
