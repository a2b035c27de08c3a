#include "ttnring/environment.hpp"

#include <algorithm>
#include <bit>

namespace ttnring {

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRow = Eigen::Map<RowMat>;
using MapRowC = Eigen::Map<const RowMat>;

}  // namespace

SymTensor apply_port_matrix(const SymTensor& v, const SymTensor& m, int p) {
  if (m.rank() != 2) throw StructuralError("apply_port_matrix: matrix must have 2 legs");
  if (p < 0 || p >= v.rank()) throw StructuralError("apply_port_matrix: bad port");
  const ChargeIndex& vp = v.index(p);
  if (m.index(1).dir() == vp.dir() || !m.index(1).same_sectors(vp))
    throw StructuralError("apply_port_matrix: pair leg mismatch");

  std::vector<ChargeIndex> idx = v.indices();
  idx[p] = m.index(0);
  SymTensor out(std::move(idx), v.total_charge() + m.total_charge());

  // m blocks grouped by pair sector.
  std::vector<std::vector<std::pair<int, const Block*>>> by_pair(vp.num_sectors());
  for (const auto& kv : m.blocks()) by_pair[kv.first[1]].push_back({kv.first[0], &kv.second});

  const int r = v.rank();
  for (const auto& kv : v.blocks()) {
    const BlockKey& key = kv.first;
    const auto& hits = by_pair[key[p]];
    if (hits.empty()) continue;
    std::size_t pre = 1, post = 1;
    for (int i = 0; i < p; ++i) pre *= static_cast<std::size_t>(v.index(i).sector_dim(key[i]));
    for (int i = p + 1; i < r; ++i)
      post *= static_cast<std::size_t>(v.index(i).sector_dim(key[i]));
    const std::size_t dp = static_cast<std::size_t>(vp.sector_dim(key[p]));
    for (const auto& hit : hits) {
      const std::size_t dn = static_cast<std::size_t>(m.index(0).sector_dim(hit.first));
      BlockKey ok = key;
      ok[p] = hit.first;
      Block& dst = out.block(ok);
      MapRowC mm(hit.second->data(), dn, dp);
      for (std::size_t a = 0; a < pre; ++a) {
        MapRowC src(kv.second.data() + a * dp * post, dp, post);
        MapRow d(dst.data() + a * dn * post, dn, post);
        d.noalias() += mm * src;
      }
    }
  }
  return out;
}

EnvCache::EnvCache(const TTNState* state, const TermList* terms)
    : state_(state), terms_(terms) {
  term_site_masks_.reserve(terms->size());
  for (const Term& t : *terms) {
    std::uint64_t m = 0;
    for (int s : t.sites) m |= 1ULL << (s - 1);
    term_site_masks_.push_back(m);
  }
}

const EnvCache::PhysEnv& EnvCache::phys(int site) {
  auto it = phys_.find(site);
  if (it != phys_.end()) return it->second;
  PhysEnv pe;
  const std::uint64_t bit = 1ULL << (site - 1);
  for (std::size_t ti = 0; ti < terms_->size(); ++ti) {
    const Term& t = (*terms_)[ti];
    if (!(term_site_masks_[ti] & bit)) continue;
    if (t.sites.size() == 1) {
      SymTensor scaled = t.ops[0];
      scaled.scale(t.coeff);
      if (pe.closed)
        pe.closed->add_scaled(cplx(1, 0), scaled);
      else
        pe.closed = std::move(scaled);
    } else {
      const int which = t.sites[0] == site ? 0 : 1;
      pe.open[static_cast<int>(ti)] = &t.ops[which];
    }
  }
  return phys_.emplace(site, std::move(pe)).first->second;
}

const EnvCache::BranchEnv& EnvCache::get(int node, int leg) {
  const auto key = std::make_pair(node, leg);
  auto it = cache_.find(key);
  if (it != cache_.end() && it->second.computed) {
    std::uint64_t mx = 0;
    std::uint64_t mask = state_->topo.branch_nodes(node, leg);
    while (mask) {
      const int b = std::countr_zero(mask);
      mask &= mask - 1;
      mx = std::max(mx, state_->rev[b]);
    }
    if (it->second.stamp >= mx) return it->second;
  }
  BranchEnv be = compute(node, leg);
  be.computed = true;
  be.stamp = state_->rev_counter;
  auto res = cache_.insert_or_assign(key, std::move(be));
  return res.first->second;
}

EnvCache::BranchEnv EnvCache::compute(int node, int leg) {
  const TreeTopology& topo = state_->topo;
  const int far = topo.neighbor(node, leg);
  if (far < 0) throw StructuralError("EnvCache: physical legs have no cached env");
  int exclude = -1;
  for (int l = 0; l < 3; ++l)
    if (topo.neighbor(far, l) == node) exclude = l;
  if (exclude < 0) throw StructuralError("EnvCache: adjacency broken");

  std::vector<int> in_legs;
  for (int l = 0; l < 3; ++l)
    if (l != exclude) in_legs.push_back(l);

  const SymTensor& a = state_->tensors[far];
  const SymTensor ca = conj(a);
  std::vector<std::pair<int, int>> close_pairs;
  for (int l : in_legs) close_pairs.push_back({l, l});

  // Lifts `a` with matrices applied on some in-legs up through the branch.
  auto close = [&](const std::vector<std::pair<int, const SymTensor*>>& facs) {
    SymTensor t = a;
    for (const auto& f : facs) t = apply_port_matrix(t, *f.second, f.first);
    return contract(ca, t, close_pairs);
  };

  // Per in-leg content.
  struct Content {
    const SymTensor* closed = nullptr;
    const std::map<int, SymTensor>* open_env = nullptr;
    const std::map<int, const SymTensor*>* open_phys = nullptr;
    std::uint64_t sites = 0;
  };
  std::vector<Content> content(in_legs.size());
  for (std::size_t i = 0; i < in_legs.size(); ++i) {
    const int l = in_legs[i];
    content[i].sites = topo.branch_sites(far, l);
    if (topo.neighbor(far, l) < 0) {
      const auto sites = topo.leaf_sites(far);
      const PhysEnv& pe = phys(l == 0 ? sites.first : sites.second);
      if (pe.closed) content[i].closed = &*pe.closed;
      content[i].open_phys = &pe.open;
    } else {
      const BranchEnv& sub = get(far, l);
      if (sub.closed) content[i].closed = &*sub.closed;
      content[i].open_env = &sub.open;
    }
  }
  auto open_factor = [&](std::size_t i, int ti) -> const SymTensor* {
    if (content[i].open_phys) {
      auto it = content[i].open_phys->find(ti);
      return it == content[i].open_phys->end() ? nullptr : it->second;
    }
    auto it = content[i].open_env->find(ti);
    return it == content[i].open_env->end() ? nullptr : &it->second;
  };

  BranchEnv out;
  auto add_closed = [&](cplx coeff, SymTensor e) {
    e.scale(coeff);
    if (out.closed)
      out.closed->add_scaled(cplx(1, 0), e);
    else
      out.closed = std::move(e);
  };

  // Sub-branch closed parts, lifted.
  for (std::size_t i = 0; i < in_legs.size(); ++i)
    if (content[i].closed) add_closed(cplx(1, 0), close({{in_legs[i], content[i].closed}}));

  const std::uint64_t branch = topo.branch_sites(node, leg);
  for (std::size_t ti = 0; ti < terms_->size(); ++ti) {
    const Term& t = (*terms_)[ti];
    if (t.sites.size() != 2) continue;
    const std::uint64_t tm = term_site_masks_[ti];
    const std::uint64_t inside = tm & branch;
    if (inside == 0) continue;
    if (inside == tm) {
      // Fully inside: a cross-leg pair needs explicit assembly here; a
      // same-leg pair is already part of that leg's closed env.
      std::size_t ia = in_legs.size(), ib = in_legs.size();
      const std::uint64_t bit_a = 1ULL << (t.sites[0] - 1);
      const std::uint64_t bit_b = 1ULL << (t.sites[1] - 1);
      for (std::size_t i = 0; i < in_legs.size(); ++i) {
        if (content[i].sites & bit_a) ia = i;
        if (content[i].sites & bit_b) ib = i;
      }
      if (ia == ib) continue;
      const SymTensor* fa = open_factor(ia, static_cast<int>(ti));
      const SymTensor* fb = open_factor(ib, static_cast<int>(ti));
      if (!fa || !fb) throw StructuralError("EnvCache: missing open factor");
      add_closed(t.coeff, close({{in_legs[ia], fa}, {in_legs[ib], fb}}));
    } else {
      // Crossing the branch boundary: lift the inside factor.
      std::size_t ia = in_legs.size();
      for (std::size_t i = 0; i < in_legs.size(); ++i)
        if (content[i].sites & inside) ia = i;
      const SymTensor* fa = open_factor(ia, static_cast<int>(ti));
      if (!fa) throw StructuralError("EnvCache: missing crossing factor");
      out.open.emplace(static_cast<int>(ti), close({{in_legs[ia], fa}}));
    }
  }
  return out;
}

EffHam::EffHam(const std::vector<Port>& ports, const std::vector<EnvCache*>& caches,
               const std::vector<double>& scales)
    : ports_(ports) {
  if (caches.empty() || caches.size() != scales.size())
    throw StructuralError("EffHam: caches/scales size mismatch");
  closed_.resize(ports_.size());
  const TTNState& st = caches[0]->state();

  std::vector<std::uint64_t> port_masks(ports_.size());
  for (std::size_t p = 0; p < ports_.size(); ++p) {
    port_masks[p] = ports_[p].is_phys
                        ? (1ULL << (ports_[p].site - 1))
                        : st.topo.branch_sites(ports_[p].node, ports_[p].leg);
  }
  auto port_of_site = [&](int site) -> int {
    const std::uint64_t bit = 1ULL << (site - 1);
    for (std::size_t p = 0; p < ports_.size(); ++p)
      if (port_masks[p] & bit) return static_cast<int>(p);
    throw StructuralError("EffHam: site not covered by any port");
  };

  struct PendingPhys {
    std::size_t port;
    cplx coeff;
    const SymTensor* op;
  };
  std::vector<PendingPhys> pending;
  for (std::size_t c = 0; c < caches.size(); ++c) {
    EnvCache& cache = *caches[c];
    const double s = scales[c];
    const TermList& terms = cache.terms();
    // Closed branch parts.
    for (std::size_t p = 0; p < ports_.size(); ++p) {
      if (ports_[p].is_phys) continue;
      const auto& be = cache.get(ports_[p].node, ports_[p].leg);
      if (be.closed) {
        if (closed_[p])
          closed_[p]->add_scaled(cplx(s, 0), *be.closed);
        else {
          closed_[p] = *be.closed;
          closed_[p]->scale(cplx(s, 0));
        }
      }
    }
    for (std::size_t ti = 0; ti < terms.size(); ++ti) {
      const Term& t = terms[ti];
      if (t.sites.size() == 1) {
        const int p = port_of_site(t.sites[0]);
        if (ports_[p].is_phys) pending.push_back({std::size_t(p), s * t.coeff, &t.ops[0]});
        continue;  // non-phys 1-site terms live in branch closed envs
      }
      const int pa = port_of_site(t.sites[0]);
      const int pb = port_of_site(t.sites[1]);
      if (pa == pb) {
        if (ports_[pa].is_phys)
          throw StructuralError("EffHam: two-site term on one physical leg");
        continue;  // inside one branch -> closed env
      }
      auto factor = [&](int p, int which) -> const SymTensor* {
        if (ports_[p].is_phys) return &t.ops[which];
        return &cache.get(ports_[p].node, ports_[p].leg).open.at(static_cast<int>(ti));
      };
      Prod pr;
      pr.coeff = s * t.coeff;
      pr.a = {pa, factor(pa, 0)};
      pr.b = {pb, factor(pb, 1)};
      prods_.push_back(pr);
    }
  }
  // Scaled sums of on-port physical operators; owned storage keeps the
  // pointers stable.
  std::map<std::size_t, SymTensor> phys_closed;
  for (const auto& pp : pending) {
    SymTensor scaled = *pp.op;
    scaled.scale(pp.coeff);
    auto it = phys_closed.find(pp.port);
    if (it == phys_closed.end())
      phys_closed.emplace(pp.port, std::move(scaled));
    else
      it->second.add_scaled(cplx(1, 0), scaled);
  }
  for (auto& kv : phys_closed) {
    if (closed_[kv.first])
      closed_[kv.first]->add_scaled(cplx(1, 0), kv.second);
    else
      closed_[kv.first] = std::move(kv.second);
  }
}

SymTensor EffHam::apply(const SymTensor& v) const {
  SymTensor out(v.indices(), v.total_charge());
  for (std::size_t p = 0; p < closed_.size(); ++p) {
    if (!closed_[p]) continue;
    out.add_scaled(cplx(1, 0), apply_port_matrix(v, *closed_[p], static_cast<int>(p)));
  }
  for (const Prod& pr : prods_) {
    SymTensor t = apply_port_matrix(v, *pr.a.mat, pr.a.port);
    t = apply_port_matrix(t, *pr.b.mat, pr.b.port);
    out.add_scaled(pr.coeff, t);
  }
  return out;
}

std::vector<EffHam::Port> node_ports(const TTNState& state, int node) {
  std::vector<EffHam::Port> ports;
  for (int leg = 0; leg < 3; ++leg) {
    EffHam::Port p;
    p.node = node;
    p.leg = leg;
    if (state.topo.neighbor(node, leg) < 0) {
      p.is_phys = true;
      const auto sites = state.topo.leaf_sites(node);
      p.site = leg == 0 ? sites.first : sites.second;
    }
    ports.push_back(p);
  }
  return ports;
}

std::vector<EffHam::Port> pair_ports(const TTNState& state, const TreeTopology::Pair& pr) {
  std::vector<EffHam::Port> ports;
  for (int leg = 0; leg < 2; ++leg) {
    EffHam::Port p;
    p.node = pr.lower;
    p.leg = leg;
    if (state.topo.neighbor(pr.lower, leg) < 0) {
      p.is_phys = true;
      const auto sites = state.topo.leaf_sites(pr.lower);
      p.site = leg == 0 ? sites.first : sites.second;
    }
    ports.push_back(p);
  }
  for (int leg = 0; leg < 3; ++leg) {
    if (leg == pr.lower_leg_on_upper) continue;
    EffHam::Port p;
    p.node = pr.upper;
    p.leg = leg;
    if (state.topo.neighbor(pr.upper, leg) < 0) {
      p.is_phys = true;
      const auto sites = state.topo.leaf_sites(pr.upper);
      p.site = leg == 0 ? sites.first : sites.second;
    }
    ports.push_back(p);
  }
  return ports;
}

double expectation(TTNState& state, EnvCache& cache) {
  std::vector<EnvCache*> caches{&cache};
  EffHam h(node_ports(state, state.center), caches, {1.0});
  const SymTensor& c = state.tensors[state.center];
  const double nn = std::real(inner(c, c));
  if (nn == 0) throw NumericalError("expectation: zero state");
  return std::real(inner(c, h.apply(c))) / nn;
}

double expectation(TTNState& state, const TermList& terms) {
  EnvCache cache(&state, &terms);
  return expectation(state, cache);
}

}  // namespace ttnring
