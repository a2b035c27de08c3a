#pragma once

// Binary tree tensor network over a ring of L = 2^n sites.  Layer 0 holds
// L/2 tensors with two physical legs each; each higher layer halves the
// count; the top layer has two tensors joined by the top link (no root
// tensor).  Every tensor has legs [lower0, lower1, up].
//
// Tree links are enumerated as update pairs in sweep order: layer by layer
// from the bottom, left to right, with the top link last.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ttnring/model.hpp"
#include "ttnring/symtensor.hpp"

namespace ttnring {

struct TreeTopology {
  int L = 0;
  int n_layers = 0;

  struct Pair {
    int lower = 0;             // node whose up leg is the link
    int upper = 0;             // parent (or top sibling for the top link)
    int lower_leg_on_upper = 0;  // leg of upper facing lower (2 for the top link)
  };
  std::vector<Pair> pairs;     // sweep order, size L - 3

  static TreeTopology build(int L);

  int num_nodes() const { return L - 2; }
  int num_pairs() const { return static_cast<int>(pairs.size()); }
  int layer_width(int l) const { return L >> (l + 1); }
  int layer_offset(int l) const { return L - (L >> l); }
  int node_id(int l, int i) const { return layer_offset(l) + i; }
  int layer_of(int node) const;
  int pos_of(int node) const { return node - layer_offset(layer_of(node)); }
  bool is_leaf_node(int node) const { return layer_of(node) == 0; }
  bool is_top(int node) const { return layer_of(node) == n_layers - 1; }

  // Neighbor across a leg: child node for legs 0/1 (-1 when the leg is a
  // physical site), parent for leg 2 (the sibling top node at the top).
  int neighbor(int node, int leg) const;
  // Leg of `parent` facing `node` (parent = neighbor(node, 2)).
  int parent_leg(int node) const;
  // 1-based sites on a layer-0 node.
  std::pair<int, int> leaf_sites(int node) const;

  // Site/node sets of the branch hanging off (node, leg), as bitmasks
  // (sites: bit k-1 for site k; nodes: bit node-id).  The branch excludes
  // `node` itself; for leg 2 it is everything on the far side of the link.
  std::uint64_t branch_sites(int node, int leg) const;
  std::uint64_t branch_nodes(int node, int leg) const;

  // Nodes along the unique tree path from `a` to `b`, inclusive.
  std::vector<int> path(int a, int b) const;

 private:
  std::vector<std::uint64_t> below_sites_, below_nodes_;  // per node subtree
};

struct TTNState {
  TreeTopology topo;
  int d = 0;
  int n_particles = 0;
  std::vector<SymTensor> tensors;  // per node, legs [lower0, lower1, up]
  int center = 0;                  // orthogonality center
  std::vector<std::uint64_t> rev;  // per-node revision, for env caching
  std::uint64_t rev_counter = 0;

  void bump(int node) { rev[node] = ++rev_counter; }
  double norm() const { return tensors[center].norm(); }
  void normalize();
  // Largest tree-link dimension.
  int max_bond() const;
  // Structural checks: leg pairing across every link, charge admissibility,
  // center charge N, others charge 0.
  void check_consistent() const;
};

// Product Fock state |occ_1 .. occ_L> as a bond-dimension-1 tree; the
// orthogonality center is the last top node and carries charge N.
TTNState product_state(const TreeTopology& topo, int d, const std::vector<int>& occ);

// Charge-aware random network with total charge `n_particles`: every link
// keeps the charge sectors its subtree can carry, at most `d0` states per
// sector and roughly 4 d0 overall (sectors nearest the mean filling win).
// Canonical gauge, unit norm, deterministic in `seed`.  Two-tensor sweeps
// need such a start: a bond-1 product state pins every split to rank 1.
TTNState random_state(const TreeTopology& topo, int d, int n_particles, int d0,
                      std::uint64_t seed = 7);

// Re-gauges a structurally consistent network into canonical form with the
// center at the last top node.
void canonicalize(TTNState& state);

// Moves the orthogonality center to `target` by QR steps along the path.
void isometrize_to(TTNState& state, int target);

// <a|b> for states on the same topology (independent gauges are fine).
cplx overlap(const TTNState& a, const TTNState& b);

// Binary checkpoint, exact round trip.
void save_checkpoint(const TTNState& state, const std::string& path);
TTNState load_checkpoint(const std::string& path);

void write_tensor(std::ostream& os, const SymTensor& t);
SymTensor read_tensor(std::istream& is);

}  // namespace ttnring
