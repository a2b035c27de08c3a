#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ttnring {

using cplx = std::complex<double>;

// Errors are split by how the CLI maps them to exit codes:
// structural/config misuse, capacity limits, numerical failures.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Dir : std::uint8_t { In, Out };

inline Dir opposite(Dir d) { return d == Dir::In ? Dir::Out : Dir::In; }

struct Sector {
  int charge = 0;
  int dim = 0;
  friend bool operator==(const Sector& a, const Sector& b) {
    return a.charge == b.charge && a.dim == b.dim;
  }
};

// One tensor leg: a direction plus a sorted list of (charge, degeneracy)
// sectors with distinct charges and positive degeneracies.
class ChargeIndex {
 public:
  ChargeIndex() = default;
  ChargeIndex(Dir dir, std::vector<Sector> sectors);

  Dir dir() const { return dir_; }
  const std::vector<Sector>& sectors() const { return sectors_; }
  int num_sectors() const { return static_cast<int>(sectors_.size()); }
  int dim() const { return total_dim_; }
  int sector_charge(int s) const { return sectors_[s].charge; }
  int sector_dim(int s) const { return sectors_[s].dim; }
  // Offset of sector s in the dense embedding of this leg.
  int sector_offset(int s) const { return offsets_[s]; }
  // Ordinal of the sector with the given charge, or -1.
  int find_charge(int q) const;
  // Signed charge flowing out of the tensor through sector s.
  int contribution(int s) const {
    return dir_ == Dir::Out ? sectors_[s].charge : -sectors_[s].charge;
  }
  bool same_sectors(const ChargeIndex& o) const { return sectors_ == o.sectors_; }
  ChargeIndex conjugated() const { return ChargeIndex(opposite(dir_), sectors_); }

  friend bool operator==(const ChargeIndex& a, const ChargeIndex& b) {
    return a.dir_ == b.dir_ && a.sectors_ == b.sectors_;
  }

 private:
  Dir dir_ = Dir::Out;
  std::vector<Sector> sectors_;
  std::vector<int> offsets_;
  int total_dim_ = 0;
};

// Block key: one sector ordinal per leg.
using BlockKey = std::vector<int>;

// Dense data of one symmetry block, row-major over the leg order.
using Block = std::vector<cplx>;

// U(1) block-sparse tensor.  A block keyed by sector ordinals is admissible
// iff sum(outgoing charges) - sum(incoming charges) == total_charge.
// Absent admissible blocks are zero; zero blocks need not be stored.
class SymTensor {
 public:
  SymTensor() = default;
  SymTensor(std::vector<ChargeIndex> indices, int total_charge);

  int rank() const { return static_cast<int>(indices_.size()); }
  const ChargeIndex& index(int i) const { return indices_[i]; }
  const std::vector<ChargeIndex>& indices() const { return indices_; }
  int total_charge() const { return total_charge_; }

  bool key_admissible(const BlockKey& key) const;
  std::vector<int> block_shape(const BlockKey& key) const;
  std::size_t block_size(const BlockKey& key) const;

  bool has_block(const BlockKey& key) const { return blocks_.count(key) != 0; }
  // Inserts a zero-filled block (or returns the existing one).
  Block& block(const BlockKey& key);
  const Block& block_at(const BlockKey& key) const;
  const std::map<BlockKey, Block>& blocks() const { return blocks_; }
  std::map<BlockKey, Block>& blocks_mut() { return blocks_; }
  void erase_block(const BlockKey& key) { blocks_.erase(key); }
  std::size_t num_blocks() const { return blocks_.size(); }
  std::size_t num_elements() const;

  double norm() const;
  double max_abs() const;
  void scale(cplx a);
  // y += a*x for tensors with identical index structure and charge.
  void add_scaled(cplx a, const SymTensor& x);
  void drop_zero_blocks(double tol = 0.0);

  // Full invariant check; throws StructuralError on violation.
  void validate() const;

  static SymTensor random(std::vector<ChargeIndex> indices, int total_charge,
                          std::mt19937_64& rng);

  // Calls fn(key) for every admissible key of this index structure.
  template <class Fn>
  void for_each_admissible(Fn&& fn) const {
    BlockKey key(indices_.size(), 0);
    foreach_rec(0, 0, key, fn);
  }

 private:
  template <class Fn>
  void foreach_rec(std::size_t pos, int acc, BlockKey& key, Fn&& fn) const {
    if (pos == indices_.size()) {
      if (acc == total_charge_) fn(key);
      return;
    }
    for (int s = 0; s < indices_[pos].num_sectors(); ++s) {
      key[pos] = s;
      foreach_rec(pos + 1, acc + indices_[pos].contribution(s), key, fn);
    }
  }

  std::vector<ChargeIndex> indices_;
  int total_charge_ = 0;
  std::map<BlockKey, Block> blocks_;
};

// ---- free operations ----

// Complex conjugate: toggles every leg direction, negates total charge,
// conjugates block data.  Block keys are unchanged.
SymTensor conj(const SymTensor& t);

// Leg permutation: result index i = t index perm[i].
SymTensor transpose(const SymTensor& t, const std::vector<int>& perm);

// Pairwise contraction over pairs (a-leg, b-leg).  Paired legs must have
// opposite directions and identical sector lists.  Result legs: free legs of
// a in order, then free legs of b.  Contracting all legs of both yields a
// rank-0 tensor holding the scalar.
SymTensor contract(const SymTensor& a, const SymTensor& b,
                   const std::vector<std::pair<int, int>>& pairs);

// <a|b> with conjugation on a; requires identical index structure.
cplx inner(const SymTensor& a, const SymTensor& b);

// a + b (identical structure required).
SymTensor add(const SymTensor& a, const SymTensor& b);

// Identity map on a leg: legs [idx.conjugated(), idx], charge 0.
// contract(t, identity_on(t.index(i)), {{i, 0}}) reproduces t with leg i
// moved to the last position.
SymTensor identity_on(const ChargeIndex& idx);

struct FusionPiece {
  BlockKey member_sectors;  // sector ordinal per member leg
  int offset = 0;           // offset inside the fused sector
  int dim = 0;
};

// Records everything needed to undo a fuse.
struct FusionRecord {
  std::vector<int> perm;          // applied to the original tensor
  std::vector<int> inv_perm;      // undoes perm
  int fused_pos = 0;              // fused leg position in the fused tensor
  Dir fused_dir = Dir::Out;
  std::vector<ChargeIndex> members;  // member legs in fusion order
  ChargeIndex fused;
  // pieces[s] lists the member-sector combos making up fused sector s,
  // in lexicographic member-ordinal order.
  std::vector<std::vector<FusionPiece>> pieces;
};

// Fuses the legs at positions `group` (order significant) into one leg with
// the direction of the first member.  Non-group legs keep their relative
// order; the fused leg sits where the first group member was.
std::pair<SymTensor, FusionRecord> fuse(const SymTensor& t,
                                        const std::vector<int>& group);

// Inverse of fuse.  Exact round trip: split(fuse(t, g)) == t up to blocks
// that were entirely zero.
SymTensor split(const SymTensor& t, const FusionRecord& rec);

struct SvdResult {
  SymTensor u;                          // rows..., new link (In)
  std::map<int, Eigen::VectorXd> s;     // link charge -> singular values (desc)
  SymTensor v;                          // new link (Out), cols...
  double discarded_weight = 0.0;        // sum of dropped sigma^2 / total
};

// Matricizes with `row_group` as rows (remaining legs as columns, original
// order), SVDs per link charge, truncates globally: drops sigma/sigma_max
// below rel_threshold, then caps the kept count at max_dim.  The link leg
// carries the net row-side charge; sectors truncated to zero are omitted.
SvdResult svd_truncate(const SymTensor& t, const std::vector<int>& row_group,
                       int max_dim, double rel_threshold);

// Absorbs singular values into u (side='u', scales link columns) or into v
// (side='v', scales link rows).
SymTensor absorb_singular(const SymTensor& uv, const std::map<int, Eigen::VectorXd>& s,
                          char side);

// QR with `row_group` as rows: returns (Q, R) with Q an isometry
// (Q^dagger Q = 1 over the new link) and t == contract(Q, R) over the link.
std::pair<SymTensor, SymTensor> isometrize(const SymTensor& t,
                                           const std::vector<int>& row_group);

std::string to_string(const SymTensor& t);

}  // namespace ttnring
