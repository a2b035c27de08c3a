#pragma once

// Hamiltonian environments on the tree and the effective operators they
// assemble.  An environment for the branch hanging off (node, leg) is a
// pair-leg matrix [new, pair]: `pair` contracts the tensor leg facing the
// branch, `new` replaces it with identical structure.  Per branch we keep
//   - closed: sum (with coefficients) of all terms fully inside the branch,
//   - open: per crossing term, the dressed factor of its inside part
//     (no coefficient; coefficients are applied once at assembly).
// Identity content is implicit.  Caches invalidate via per-node revisions.

#include <map>
#include <optional>
#include <vector>

#include "ttnring/model.hpp"
#include "ttnring/ttn.hpp"

namespace ttnring {

// result = v with leg p contracted against the pair leg (leg 1) of the
// two-leg matrix m, leg order preserved.  Specialized gemm path; this is
// the inner loop of every effective-operator application.
SymTensor apply_port_matrix(const SymTensor& v, const SymTensor& m, int p);

class EnvCache {
 public:
  EnvCache(const TTNState* state, const TermList* terms);

  struct BranchEnv {
    std::optional<SymTensor> closed;
    std::map<int, SymTensor> open;  // term index -> factor
    std::uint64_t stamp = 0;
    bool computed = false;
  };

  // Environment of the branch hanging off (node, leg); leg must be a tree
  // link (never a physical leg).  Recomputes lazily when stale.
  const BranchEnv& get(int node, int leg);

  const TermList& terms() const { return *terms_; }
  const TTNState& state() const { return *state_; }

 private:
  BranchEnv compute(int node, int leg);
  // Pseudo-environment of a bare physical site.
  struct PhysEnv {
    std::optional<SymTensor> closed;       // 1-site terms, coefficients applied
    std::map<int, const SymTensor*> open;  // crossing term -> its local op
  };
  const PhysEnv& phys(int site);

  const TTNState* state_;
  const TermList* terms_;
  std::map<std::pair<int, int>, BranchEnv> cache_;
  std::map<int, PhysEnv> phys_;
  std::vector<std::uint64_t> term_site_masks_;
};

// Effective operator on a block: ports are the block's open legs, each
// backed by a branch environment or a bare physical site.  Supports sums
// of scaled term lists (H = hopping + u * interaction).
class EffHam {
 public:
  struct Port {
    int node = 0;
    int leg = 0;
    bool is_phys = false;
    int site = 0;  // if is_phys
  };

  // caches and scales must have equal sizes.
  EffHam(const std::vector<Port>& ports, const std::vector<EnvCache*>& caches,
         const std::vector<double>& scales);

  SymTensor apply(const SymTensor& v) const;
  int num_ports() const { return static_cast<int>(ports_.size()); }

 private:
  struct Factor {
    int port;
    const SymTensor* mat;
  };
  struct Prod {
    cplx coeff;
    Factor a, b;
  };
  std::vector<Port> ports_;
  std::vector<std::optional<SymTensor>> closed_;  // per port (scaled sums)
  std::vector<Prod> prods_;
};

// Ports of the one-tensor effective operator at `node` (its three legs).
std::vector<EffHam::Port> node_ports(const TTNState& state, int node);
// Ports of the two-tensor block for an update pair, matching the block
// built by contract(lower, upper, {{2, lower_leg_on_upper}}).
std::vector<EffHam::Port> pair_ports(const TTNState& state, const TreeTopology::Pair& pr);

// <state| sum(terms) |state> / <state|state>, via the one-tensor effective
// operator at the current center.
double expectation(TTNState& state, const TermList& terms);
// Same, reusing a live cache (term list must match the cache's).
double expectation(TTNState& state, EnvCache& cache);

}  // namespace ttnring
