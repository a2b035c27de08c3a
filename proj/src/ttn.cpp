#include "ttnring/ttn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

namespace ttnring {

TreeTopology TreeTopology::build(int L) {
  if (L < 4 || (L & (L - 1)) != 0)
    throw StructuralError("TreeTopology: L must be a power of two >= 4");
  if (L > 64) throw CapacityError("TreeTopology: L > 64 not supported");
  TreeTopology t;
  t.L = L;
  t.n_layers = 0;
  for (int w = L / 2; w >= 2; w /= 2) ++t.n_layers;

  // Subtree masks, bottom-up.
  t.below_sites_.assign(t.num_nodes(), 0);
  t.below_nodes_.assign(t.num_nodes(), 0);
  for (int l = 0; l < t.n_layers; ++l) {
    for (int i = 0; i < t.layer_width(l); ++i) {
      const int id = t.node_id(l, i);
      if (l == 0) {
        t.below_sites_[id] = (1ULL << (2 * i)) | (1ULL << (2 * i + 1));
      } else {
        const int c0 = t.node_id(l - 1, 2 * i), c1 = t.node_id(l - 1, 2 * i + 1);
        t.below_sites_[id] = t.below_sites_[c0] | t.below_sites_[c1];
        t.below_nodes_[id] = t.below_nodes_[c0] | t.below_nodes_[c1] |
                             (1ULL << c0) | (1ULL << c1);
      }
    }
  }

  for (int l = 0; l + 1 < t.n_layers; ++l)
    for (int i = 0; i < t.layer_width(l); ++i) {
      const int id = t.node_id(l, i);
      t.pairs.push_back({id, t.node_id(l + 1, i / 2), i % 2});
    }
  t.pairs.push_back({t.node_id(t.n_layers - 1, 0), t.node_id(t.n_layers - 1, 1), 2});
  return t;
}

int TreeTopology::layer_of(int node) const {
  for (int l = 0; l < n_layers; ++l)
    if (node < layer_offset(l) + layer_width(l)) return l;
  throw StructuralError("TreeTopology: node out of range");
}

int TreeTopology::neighbor(int node, int leg) const {
  const int l = layer_of(node);
  if (leg == 0 || leg == 1) {
    if (l == 0) return -1;
    return node_id(l - 1, 2 * pos_of(node) + leg);
  }
  if (leg != 2) throw StructuralError("TreeTopology: bad leg");
  if (l == n_layers - 1) return node_id(l, 1 - pos_of(node));
  return node_id(l + 1, pos_of(node) / 2);
}

int TreeTopology::parent_leg(int node) const {
  if (is_top(node)) return 2;
  return pos_of(node) % 2;
}

std::pair<int, int> TreeTopology::leaf_sites(int node) const {
  if (!is_leaf_node(node)) throw StructuralError("TreeTopology: not a leaf node");
  const int i = pos_of(node);
  return {2 * i + 1, 2 * i + 2};
}

std::uint64_t TreeTopology::branch_sites(int node, int leg) const {
  const std::uint64_t all = L == 64 ? ~0ULL : (1ULL << L) - 1;
  if (leg == 2) return all & ~below_sites_[node];
  const int c = neighbor(node, leg);
  if (c < 0) {
    const auto s = leaf_sites(node);
    return 1ULL << ((leg == 0 ? s.first : s.second) - 1);
  }
  return below_sites_[c];
}

std::uint64_t TreeTopology::branch_nodes(int node, int leg) const {
  const std::uint64_t all = (1ULL << num_nodes()) - 1;
  if (leg == 2) return all & ~(below_nodes_[node] | (1ULL << node));
  const int c = neighbor(node, leg);
  if (c < 0) return 0;
  return below_nodes_[c] | (1ULL << c);
}

std::vector<int> TreeTopology::path(int a, int b) const {
  // BFS over the node graph; at most L-2 nodes.
  std::vector<int> prev(num_nodes(), -2);
  std::vector<int> queue{a};
  prev[a] = -1;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int x = queue[qi];
    if (x == b) break;
    for (int leg = 0; leg < 3; ++leg) {
      const int y = neighbor(x, leg);
      if (y >= 0 && prev[y] == -2) {
        prev[y] = x;
        queue.push_back(y);
      }
    }
  }
  std::vector<int> out;
  for (int x = b; x != -1; x = prev[x]) out.push_back(x);
  std::reverse(out.begin(), out.end());
  if (out.empty() || out.front() != a) throw StructuralError("TreeTopology: no path");
  return out;
}

void TTNState::normalize() {
  const double n = norm();
  if (n == 0) throw NumericalError("TTNState: zero norm");
  tensors[center].scale(cplx(1.0 / n, 0));
  bump(center);
}

int TTNState::max_bond() const {
  int m = 0;
  for (int node = 0; node < topo.num_nodes(); ++node)
    m = std::max(m, tensors[node].index(2).dim());
  return m;
}

void TTNState::check_consistent() const {
  for (int node = 0; node < topo.num_nodes(); ++node) {
    const SymTensor& t = tensors[node];
    if (t.rank() != 3) throw StructuralError("TTNState: tensor rank != 3");
    t.validate();
    const int expect_charge = node == center ? n_particles : 0;
    if (t.total_charge() != expect_charge)
      throw StructuralError("TTNState: unexpected tensor charge");
    for (int leg = 0; leg < 2; ++leg) {
      const int c = topo.neighbor(node, leg);
      if (c < 0) {
        if (!(t.index(leg) == phys_index(d)))
          throw StructuralError("TTNState: physical leg mismatch");
      } else {
        const ChargeIndex& mine = t.index(leg);
        const ChargeIndex& theirs = tensors[c].index(2);
        if (mine.dir() == theirs.dir() || !mine.same_sectors(theirs))
          throw StructuralError("TTNState: link pairing violated");
      }
    }
  }
  // Top link pairing.
  const int t0 = topo.node_id(topo.n_layers - 1, 0);
  const int t1 = topo.node_id(topo.n_layers - 1, 1);
  const ChargeIndex& a = tensors[t0].index(2);
  const ChargeIndex& b = tensors[t1].index(2);
  if (a.dir() == b.dir() || !a.same_sectors(b))
    throw StructuralError("TTNState: top link pairing violated");
}

TTNState product_state(const TreeTopology& topo, int d, const std::vector<int>& occ) {
  if (static_cast<int>(occ.size()) != topo.L)
    throw StructuralError("product_state: occupation list size mismatch");
  int n_total = 0;
  for (int o : occ) {
    if (o < 0 || o >= d) throw StructuralError("product_state: occupation outside [0, d)");
    n_total += o;
  }
  TTNState st;
  st.topo = topo;
  st.d = d;
  st.n_particles = n_total;
  st.tensors.resize(topo.num_nodes());
  st.rev.assign(topo.num_nodes(), 0);
  st.center = topo.node_id(topo.n_layers - 1, 1);

  // Subtree particle counts drive the 1-dim link sectors.
  std::vector<int> below(topo.num_nodes(), 0);
  for (int l = 0; l < topo.n_layers; ++l)
    for (int i = 0; i < topo.layer_width(l); ++i) {
      const int id = topo.node_id(l, i);
      if (l == 0)
        below[id] = occ[2 * i] + occ[2 * i + 1];
      else
        below[id] = below[topo.neighbor(id, 0)] + below[topo.neighbor(id, 1)];
    }

  const ChargeIndex phys = phys_index(d);
  for (int node = 0; node < topo.num_nodes(); ++node) {
    const bool is_center = node == st.center;
    // Up leg: In everywhere except the center top node, whose Out leg closes
    // the top link.  Link charge: subtree count (center: left-half count).
    const int q = is_center ? below[topo.neighbor(node, 2)] : below[node];
    const ChargeIndex up(is_center ? Dir::Out : Dir::In, {{q, 1}});
    std::vector<ChargeIndex> legs;
    BlockKey key(3, 0);
    if (topo.is_leaf_node(node)) {
      const auto sites = topo.leaf_sites(node);
      legs = {phys, phys, up};
      key = {occ[sites.first - 1], occ[sites.second - 1], 0};
    } else {
      const int c0 = topo.neighbor(node, 0), c1 = topo.neighbor(node, 1);
      legs = {ChargeIndex(Dir::Out, {{below[c0], 1}}),
              ChargeIndex(Dir::Out, {{below[c1], 1}}), up};
    }
    SymTensor t(legs, is_center ? n_total : 0);
    t.block(key)[0] = cplx(1, 0);
    st.tensors[node] = std::move(t);
    st.bump(node);
  }
  st.check_consistent();
  return st;
}

namespace {

// One QR step moving the center to an adjacent node.
void move_center(TTNState& st, int to) {
  const int from = st.center;
  int leg = -1;
  for (int l = 0; l < 3; ++l)
    if (st.topo.neighbor(from, l) == to) leg = l;
  if (leg < 0) throw StructuralError("move_center: nodes not adjacent");

  std::vector<int> rows;
  for (int l = 0; l < 3; ++l)
    if (l != leg) rows.push_back(l);
  auto [q, r] = isometrize(st.tensors[from], rows);
  // q legs: rows..., link; put the link back at `leg`.
  std::vector<int> perm(3);
  perm[leg] = 2;
  perm[rows[0]] = 0;
  perm[rows[1]] = 1;
  st.tensors[from] = transpose(q, perm);

  const int far_leg = [&] {
    for (int l = 0; l < 3; ++l)
      if (st.topo.neighbor(to, l) == from) return l;
    throw StructuralError("move_center: asymmetric adjacency");
  }();
  SymTensor merged = contract(r, st.tensors[to], {{1, far_leg}});
  // merged legs: [link, to-legs except far_leg]; restore leg order.
  std::vector<int> perm2(3);
  perm2[far_leg] = 0;
  int src = 1;
  for (int l = 0; l < 3; ++l)
    if (l != far_leg) perm2[l] = src++;
  st.tensors[to] = transpose(merged, perm2);

  st.bump(from);
  st.bump(to);
  st.center = to;
}

}  // namespace

void isometrize_to(TTNState& state, int target) {
  if (target < 0 || target >= state.topo.num_nodes())
    throw StructuralError("isometrize_to: bad target");
  const std::vector<int> p = state.topo.path(state.center, target);
  for (std::size_t i = 1; i < p.size(); ++i) move_center(state, p[i]);
}

void canonicalize(TTNState& state) {
  // Sweep order visits every link child side first, so one QR pass gauges
  // the whole tree toward the last top node.
  for (const auto& pr : state.topo.pairs) {
    state.center = pr.lower;
    move_center(state, pr.upper);
  }
  state.normalize();
}

namespace {

using SectorMap = std::map<int, int>;  // charge -> dim

SectorMap convolve(const SectorMap& a, const SectorMap& b) {
  SectorMap out;
  for (const auto& pa : a)
    for (const auto& pb : b) out[pa.first + pb.first] += pa.second * pb.second;
  return out;
}

// Caps per-sector dims at d0 and keeps sectors nearest q_mean until the
// total reaches cap_total.
SectorMap cap_sectors(const SectorMap& in, int d0, int cap_total, double q_mean) {
  std::vector<std::pair<double, int>> order;
  order.reserve(in.size());
  for (const auto& kv : in) order.push_back({std::abs(kv.first - q_mean), kv.first});
  std::sort(order.begin(), order.end());
  SectorMap out;
  int total = 0;
  for (const auto& oq : order) {
    if (total >= cap_total && !out.empty()) break;
    const int dd = std::min(in.at(oq.second), d0);
    out[oq.second] = dd;
    total += dd;
  }
  return out;
}

ChargeIndex to_index(Dir dir, const SectorMap& m) {
  std::vector<Sector> s;
  s.reserve(m.size());
  for (const auto& kv : m) s.push_back({kv.first, kv.second});
  return ChargeIndex(dir, std::move(s));
}

}  // namespace

TTNState random_state(const TreeTopology& topo, int d, int n_particles, int d0,
                      std::uint64_t seed) {
  if (d0 < 1) throw StructuralError("random_state: d0 < 1");
  if (n_particles < 0 || n_particles > topo.L * (d - 1))
    throw StructuralError("random_state: particle count out of range");
  const int cap_total = 4 * d0;
  const double nbar = static_cast<double>(n_particles) / topo.L;

  SectorMap phys_map;
  for (int q = 0; q < d; ++q) phys_map[q] = 1;

  std::vector<SectorMap> up(topo.num_nodes());
  for (int l = 0; l < topo.n_layers; ++l)
    for (int i = 0; i < topo.layer_width(l); ++i) {
      const int id = topo.node_id(l, i);
      const SectorMap conv =
          l == 0 ? convolve(phys_map, phys_map)
                 : convolve(up[topo.neighbor(id, 0)], up[topo.neighbor(id, 1)]);
      up[id] = cap_sectors(conv, d0, cap_total, nbar * (2 << l));
    }

  const int center = topo.node_id(topo.n_layers - 1, 1);
  const int top0 = topo.node_id(topo.n_layers - 1, 0);
  // The top link must split N between the two halves. A single-layer tree
  // has leaves at the top, so the halves are bare physical pairs there.
  const SectorMap right =
      topo.n_layers == 1
          ? convolve(phys_map, phys_map)
          : convolve(up[topo.neighbor(center, 0)], up[topo.neighbor(center, 1)]);
  SectorMap toplink;
  for (const auto& kv : up[top0]) {
    const auto it = right.find(n_particles - kv.first);
    if (it == right.end()) continue;
    toplink[kv.first] = std::min({kv.second, it->second, d0});
  }
  toplink = cap_sectors(toplink, d0, cap_total, nbar * (topo.L / 2));
  if (toplink.empty()) throw StructuralError("random_state: no admissible top split");
  up[top0] = toplink;

  std::mt19937_64 rng(seed);
  TTNState st;
  st.topo = topo;
  st.d = d;
  st.n_particles = n_particles;
  st.tensors.resize(topo.num_nodes());
  st.rev.assign(topo.num_nodes(), 0);
  st.center = center;

  const ChargeIndex phys = phys_index(d);
  for (int node = 0; node < topo.num_nodes(); ++node) {
    const bool is_center = node == center;
    const ChargeIndex upleg = to_index(is_center ? Dir::Out : Dir::In,
                                       is_center ? up[top0] : up[node]);
    std::vector<ChargeIndex> legs;
    if (topo.is_leaf_node(node)) {
      legs = {phys, phys, upleg};
    } else {
      legs = {to_index(Dir::Out, up[topo.neighbor(node, 0)]),
              to_index(Dir::Out, up[topo.neighbor(node, 1)]), upleg};
    }
    st.tensors[node] = SymTensor::random(std::move(legs), is_center ? n_particles : 0, rng);
    st.bump(node);
  }
  canonicalize(st);
  st.check_consistent();
  return st;
}

cplx overlap(const TTNState& a, const TTNState& b) {
  if (a.topo.L != b.topo.L || a.d != b.d)
    throw StructuralError("overlap: incompatible states");
  const TreeTopology& topo = a.topo;
  // E(node): [conj(a).up, b.up] for the subtree below node, bottom-up.
  std::vector<SymTensor> env(topo.num_nodes());
  for (int l = 0; l < topo.n_layers; ++l)
    for (int i = 0; i < topo.layer_width(l); ++i) {
      const int id = topo.node_id(l, i);
      const SymTensor& bt = b.tensors[id];
      SymTensor acc = bt;
      if (l > 0) {
        // Apply child environments onto b's lower legs.
        for (int leg = 0; leg < 2; ++leg) {
          const int c = topo.neighbor(id, leg);
          SymTensor tmp = contract(env[c], acc, {{1, leg}});
          // tmp legs: [conj-a link, other legs...]; restore order.
          std::vector<int> perm(3);
          perm[leg] = 0;
          int src = 1;
          for (int x = 0; x < 3; ++x)
            if (x != leg) perm[x] = src++;
          acc = transpose(tmp, perm);
        }
      }
      env[id] = contract(conj(a.tensors[id]), acc, {{0, 0}, {1, 1}});
    }
  const int t0 = topo.node_id(topo.n_layers - 1, 0);
  const int t1 = topo.node_id(topo.n_layers - 1, 1);
  SymTensor s = contract(env[t0], env[t1], {{0, 0}, {1, 1}});
  if (s.rank() != 0) throw StructuralError("overlap: leftover legs");
  if (s.blocks().empty()) return cplx(0, 0);
  return s.blocks().begin()->second[0];
}

namespace {

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw StructuralError("checkpoint: truncated stream");
  return v;
}

}  // namespace

void write_tensor(std::ostream& os, const SymTensor& t) {
  put<std::int32_t>(os, t.rank());
  put<std::int32_t>(os, t.total_charge());
  for (int i = 0; i < t.rank(); ++i) {
    const ChargeIndex& idx = t.index(i);
    put<std::uint8_t>(os, idx.dir() == Dir::Out ? 1 : 0);
    put<std::int32_t>(os, idx.num_sectors());
    for (const Sector& s : idx.sectors()) {
      put<std::int32_t>(os, s.charge);
      put<std::int32_t>(os, s.dim);
    }
  }
  put<std::uint64_t>(os, t.num_blocks());
  for (const auto& kv : t.blocks()) {
    for (int x : kv.first) put<std::int32_t>(os, x);
    put<std::uint64_t>(os, kv.second.size());
    os.write(reinterpret_cast<const char*>(kv.second.data()),
             static_cast<std::streamsize>(kv.second.size() * sizeof(cplx)));
  }
}

SymTensor read_tensor(std::istream& is) {
  const int rank = get<std::int32_t>(is);
  const int charge = get<std::int32_t>(is);
  std::vector<ChargeIndex> idx;
  for (int i = 0; i < rank; ++i) {
    const Dir dir = get<std::uint8_t>(is) ? Dir::Out : Dir::In;
    const int ns = get<std::int32_t>(is);
    std::vector<Sector> sec(ns);
    for (Sector& s : sec) {
      s.charge = get<std::int32_t>(is);
      s.dim = get<std::int32_t>(is);
    }
    idx.emplace_back(dir, std::move(sec));
  }
  SymTensor t(std::move(idx), charge);
  const std::uint64_t nb = get<std::uint64_t>(is);
  for (std::uint64_t b = 0; b < nb; ++b) {
    BlockKey key(rank);
    for (int i = 0; i < rank; ++i) key[i] = get<std::int32_t>(is);
    const std::uint64_t n = get<std::uint64_t>(is);
    Block& blk = t.block(key);
    if (blk.size() != n) throw StructuralError("checkpoint: block size mismatch");
    is.read(reinterpret_cast<char*>(blk.data()),
            static_cast<std::streamsize>(n * sizeof(cplx)));
    if (!is) throw StructuralError("checkpoint: truncated block");
  }
  return t;
}

void save_checkpoint(const TTNState& state, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw StructuralError("save_checkpoint: cannot open " + path);
  os.write("TTNRING1", 8);
  put<std::int32_t>(os, state.topo.L);
  put<std::int32_t>(os, state.d);
  put<std::int32_t>(os, state.n_particles);
  put<std::int32_t>(os, state.center);
  for (const SymTensor& t : state.tensors) write_tensor(os, t);
  if (!os) throw StructuralError("save_checkpoint: write failed");
}

TTNState load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw StructuralError("load_checkpoint: cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, "TTNRING1", 8) != 0)
    throw StructuralError("load_checkpoint: bad magic");
  TTNState st;
  const int L = get<std::int32_t>(is);
  st.topo = TreeTopology::build(L);
  st.d = get<std::int32_t>(is);
  st.n_particles = get<std::int32_t>(is);
  st.center = get<std::int32_t>(is);
  st.tensors.resize(st.topo.num_nodes());
  st.rev.assign(st.topo.num_nodes(), 0);
  for (int i = 0; i < st.topo.num_nodes(); ++i) {
    st.tensors[i] = read_tensor(is);
    st.bump(i);
  }
  st.check_consistent();
  return st;
}

}  // namespace ttnring
