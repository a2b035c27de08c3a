#include "ttnring/symtensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ttnring {

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRow = Eigen::Map<RowMat>;
using MapRowC = Eigen::Map<const RowMat>;

std::size_t product(const std::vector<int>& v, std::size_t lo, std::size_t hi) {
  std::size_t p = 1;
  for (std::size_t i = lo; i < hi; ++i) p *= static_cast<std::size_t>(v[i]);
  return p;
}

}  // namespace

ChargeIndex::ChargeIndex(Dir dir, std::vector<Sector> sectors)
    : dir_(dir), sectors_(std::move(sectors)) {
  if (sectors_.empty()) throw StructuralError("ChargeIndex: no sectors");
  offsets_.resize(sectors_.size());
  int off = 0;
  for (std::size_t i = 0; i < sectors_.size(); ++i) {
    if (sectors_[i].dim <= 0) throw StructuralError("ChargeIndex: sector dim must be positive");
    if (i > 0 && sectors_[i].charge <= sectors_[i - 1].charge)
      throw StructuralError("ChargeIndex: charges must be strictly ascending");
    offsets_[i] = off;
    off += sectors_[i].dim;
  }
  total_dim_ = off;
}

int ChargeIndex::find_charge(int q) const {
  auto it = std::lower_bound(sectors_.begin(), sectors_.end(), q,
                             [](const Sector& s, int v) { return s.charge < v; });
  if (it == sectors_.end() || it->charge != q) return -1;
  return static_cast<int>(it - sectors_.begin());
}

SymTensor::SymTensor(std::vector<ChargeIndex> indices, int total_charge)
    : indices_(std::move(indices)), total_charge_(total_charge) {}

bool SymTensor::key_admissible(const BlockKey& key) const {
  if (key.size() != indices_.size()) return false;
  int acc = 0;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (key[i] < 0 || key[i] >= indices_[i].num_sectors()) return false;
    acc += indices_[i].contribution(key[i]);
  }
  return acc == total_charge_;
}

std::vector<int> SymTensor::block_shape(const BlockKey& key) const {
  std::vector<int> shape(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) shape[i] = indices_[i].sector_dim(key[i]);
  return shape;
}

std::size_t SymTensor::block_size(const BlockKey& key) const {
  std::size_t n = 1;
  for (std::size_t i = 0; i < key.size(); ++i)
    n *= static_cast<std::size_t>(indices_[i].sector_dim(key[i]));
  return n;
}

Block& SymTensor::block(const BlockKey& key) {
  auto it = blocks_.find(key);
  if (it != blocks_.end()) return it->second;
  if (!key_admissible(key))
    throw StructuralError("SymTensor: inadmissible block key " + to_string(*this));
  auto res = blocks_.emplace(key, Block(block_size(key), cplx(0, 0)));
  return res.first->second;
}

const Block& SymTensor::block_at(const BlockKey& key) const {
  auto it = blocks_.find(key);
  if (it == blocks_.end()) throw StructuralError("SymTensor: missing block");
  return it->second;
}

std::size_t SymTensor::num_elements() const {
  std::size_t n = 0;
  for (const auto& kv : blocks_) n += kv.second.size();
  return n;
}

double SymTensor::norm() const {
  double s = 0;
  for (const auto& kv : blocks_)
    for (const cplx& x : kv.second) s += std::norm(x);
  return std::sqrt(s);
}

double SymTensor::max_abs() const {
  double m = 0;
  for (const auto& kv : blocks_)
    for (const cplx& x : kv.second) m = std::max(m, std::abs(x));
  return m;
}

void SymTensor::scale(cplx a) {
  for (auto& kv : blocks_)
    for (cplx& x : kv.second) x *= a;
}

void SymTensor::add_scaled(cplx a, const SymTensor& x) {
  if (indices_ != x.indices_ || total_charge_ != x.total_charge_)
    throw StructuralError("add_scaled: index structure mismatch");
  for (const auto& kv : x.blocks_) {
    auto it = blocks_.find(kv.first);
    if (it == blocks_.end()) {
      Block b(kv.second.size());
      for (std::size_t i = 0; i < b.size(); ++i) b[i] = a * kv.second[i];
      blocks_.emplace(kv.first, std::move(b));
    } else {
      Block& b = it->second;
      for (std::size_t i = 0; i < b.size(); ++i) b[i] += a * kv.second[i];
    }
  }
}

void SymTensor::drop_zero_blocks(double tol) {
  for (auto it = blocks_.begin(); it != blocks_.end();) {
    double m = 0;
    for (const cplx& x : it->second) m = std::max(m, std::abs(x));
    if (m <= tol)
      it = blocks_.erase(it);
    else
      ++it;
  }
}

void SymTensor::validate() const {
  for (const auto& kv : blocks_) {
    if (!key_admissible(kv.first))
      throw StructuralError("SymTensor: stored block violates charge rule");
    if (kv.second.size() != block_size(kv.first))
      throw StructuralError("SymTensor: block data size mismatch");
  }
}

SymTensor SymTensor::random(std::vector<ChargeIndex> indices, int total_charge,
                            std::mt19937_64& rng) {
  SymTensor t(std::move(indices), total_charge);
  std::normal_distribution<double> g(0.0, 1.0);
  t.for_each_admissible([&](const BlockKey& key) {
    Block& b = t.block(key);
    for (cplx& x : b) x = cplx(g(rng), g(rng));
  });
  return t;
}

SymTensor conj(const SymTensor& t) {
  std::vector<ChargeIndex> idx;
  idx.reserve(t.rank());
  for (int i = 0; i < t.rank(); ++i) idx.push_back(t.index(i).conjugated());
  SymTensor out(std::move(idx), -t.total_charge());
  for (const auto& kv : t.blocks()) {
    Block b(kv.second.size());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::conj(kv.second[i]);
    out.blocks_mut().emplace(kv.first, std::move(b));
  }
  return out;
}

SymTensor transpose(const SymTensor& t, const std::vector<int>& perm) {
  const int r = t.rank();
  if (static_cast<int>(perm.size()) != r) throw StructuralError("transpose: bad perm size");
  std::vector<char> seen(r, 0);
  bool ident = true;
  for (int i = 0; i < r; ++i) {
    if (perm[i] < 0 || perm[i] >= r || seen[perm[i]])
      throw StructuralError("transpose: not a permutation");
    seen[perm[i]] = 1;
    if (perm[i] != i) ident = false;
  }
  if (ident) return t;

  std::vector<ChargeIndex> idx;
  idx.reserve(r);
  for (int i = 0; i < r; ++i) idx.push_back(t.index(perm[i]));
  SymTensor out(std::move(idx), t.total_charge());

  for (const auto& kv : t.blocks()) {
    const BlockKey& key = kv.first;
    const Block& src = kv.second;
    BlockKey nk(r);
    for (int i = 0; i < r; ++i) nk[i] = key[perm[i]];
    std::vector<int> ishape = t.block_shape(key);
    std::vector<std::size_t> istride(r, 1);
    for (int i = r - 2; i >= 0; --i)
      istride[i] = istride[i + 1] * static_cast<std::size_t>(ishape[i + 1]);
    std::vector<int> oshape(r);
    std::vector<std::size_t> ostride(r);
    for (int i = 0; i < r; ++i) {
      oshape[i] = ishape[perm[i]];
      ostride[i] = istride[perm[i]];
    }
    Block dst(src.size());
    std::vector<int> c(r, 0);
    std::size_t soff = 0;
    for (std::size_t k = 0; k < dst.size(); ++k) {
      dst[k] = src[soff];
      for (int i = r - 1; i >= 0; --i) {
        if (++c[i] < oshape[i]) {
          soff += ostride[i];
          break;
        }
        soff -= static_cast<std::size_t>(oshape[i] - 1) * ostride[i];
        c[i] = 0;
      }
    }
    out.blocks_mut().emplace(std::move(nk), std::move(dst));
  }
  return out;
}

SymTensor contract(const SymTensor& a, const SymTensor& b,
                   const std::vector<std::pair<int, int>>& pairs) {
  const int ra = a.rank(), rb = b.rank();
  std::vector<char> pa(ra, 0), pb(rb, 0);
  for (const auto& pr : pairs) {
    if (pr.first < 0 || pr.first >= ra || pr.second < 0 || pr.second >= rb)
      throw StructuralError("contract: leg out of range");
    if (pa[pr.first] || pb[pr.second]) throw StructuralError("contract: repeated leg");
    pa[pr.first] = pb[pr.second] = 1;
    const ChargeIndex& ia = a.index(pr.first);
    const ChargeIndex& ib = b.index(pr.second);
    if (ia.dir() == ib.dir())
      throw StructuralError("contract: paired legs must have opposite directions");
    if (!ia.same_sectors(ib))
      throw StructuralError("contract: paired legs must have identical sectors");
  }
  std::vector<int> fa, fb, permA, permB;
  for (int i = 0; i < ra; ++i)
    if (!pa[i]) fa.push_back(i);
  for (int j = 0; j < rb; ++j)
    if (!pb[j]) fb.push_back(j);
  permA = fa;
  for (const auto& pr : pairs) permA.push_back(pr.first);
  for (const auto& pr : pairs) permB.push_back(pr.second);
  for (int j : fb) permB.push_back(j);

  SymTensor ta = transpose(a, permA);
  SymTensor tb = transpose(b, permB);
  const std::size_t nfa = fa.size(), np = pairs.size(), nfb = fb.size();

  std::vector<ChargeIndex> ridx;
  for (int i : fa) ridx.push_back(a.index(i));
  for (int j : fb) ridx.push_back(b.index(j));
  SymTensor out(std::move(ridx), a.total_charge() + b.total_charge());

  // Group both sides by the paired part of the key.
  std::map<BlockKey, std::vector<const std::pair<const BlockKey, Block>*>> ga, gb;
  for (const auto& kv : ta.blocks()) {
    BlockKey pk(kv.first.begin() + nfa, kv.first.end());
    ga[pk].push_back(&kv);
  }
  for (const auto& kv : tb.blocks()) {
    BlockKey pk(kv.first.begin(), kv.first.begin() + np);
    gb[pk].push_back(&kv);
  }

  for (const auto& ge : ga) {
    auto itb = gb.find(ge.first);
    if (itb == gb.end()) continue;
    std::size_t pdim = 1;
    for (std::size_t i = 0; i < np; ++i)
      pdim *= static_cast<std::size_t>(ta.index(nfa + i).sector_dim(ge.first[i]));
    for (const auto* ablk : ge.second) {
      const std::size_t rdim = pdim ? ablk->second.size() / pdim : 0;
      for (const auto* bblk : itb->second) {
        const std::size_t cdim = pdim ? bblk->second.size() / pdim : 0;
        BlockKey ok;
        ok.reserve(nfa + nfb);
        ok.insert(ok.end(), ablk->first.begin(), ablk->first.begin() + nfa);
        ok.insert(ok.end(), bblk->first.begin() + np, bblk->first.end());
        Block& dst = out.block(ok);
        MapRow c(dst.data(), rdim, cdim);
        MapRowC am(ablk->second.data(), rdim, pdim);
        MapRowC bm(bblk->second.data(), pdim, cdim);
        c.noalias() += am * bm;
      }
    }
  }
  return out;
}

cplx inner(const SymTensor& a, const SymTensor& b) {
  if (a.indices() != b.indices() || a.total_charge() != b.total_charge())
    throw StructuralError("inner: index structure mismatch");
  cplx s(0, 0);
  for (const auto& kv : a.blocks()) {
    auto it = b.blocks().find(kv.first);
    if (it == b.blocks().end()) continue;
    const Block& x = kv.second;
    const Block& y = it->second;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  }
  return s;
}

SymTensor add(const SymTensor& a, const SymTensor& b) {
  SymTensor out = a;
  out.add_scaled(cplx(1, 0), b);
  return out;
}

SymTensor identity_on(const ChargeIndex& idx) {
  SymTensor t({idx.conjugated(), idx}, 0);
  for (int s = 0; s < idx.num_sectors(); ++s) {
    const int d = idx.sector_dim(s);
    Block& b = t.block({s, s});
    for (int i = 0; i < d; ++i) b[static_cast<std::size_t>(i) * d + i] = cplx(1, 0);
  }
  return t;
}

std::pair<SymTensor, FusionRecord> fuse(const SymTensor& t, const std::vector<int>& group) {
  const int r = t.rank();
  if (group.empty()) throw StructuralError("fuse: empty group");
  std::vector<char> ing(r, 0);
  for (int g : group) {
    if (g < 0 || g >= r) throw StructuralError("fuse: leg out of range");
    if (ing[g]) throw StructuralError("fuse: repeated leg");
    ing[g] = 1;
  }
  const int ng = static_cast<int>(group.size());

  FusionRecord rec;
  for (int i = 0; i < r; ++i) {
    if (i == group[0]) {
      for (int g : group) rec.perm.push_back(g);
    } else if (!ing[i]) {
      rec.perm.push_back(i);
    }
  }
  rec.inv_perm.resize(r);
  for (int i = 0; i < r; ++i) rec.inv_perm[rec.perm[i]] = i;
  int p = 0;
  while (rec.perm[p] != group[0]) ++p;
  rec.fused_pos = p;
  rec.fused_dir = t.index(group[0]).dir();
  for (int g : group) rec.members.push_back(t.index(g));

  // Enumerate member sector combos (last member fastest, matching row-major
  // flattening of the contiguous group axes) and group them by fused charge.
  std::map<int, std::vector<FusionPiece>> by_q;
  BlockKey combo(ng, 0);
  bool done = false;
  while (!done) {
    int contrib = 0, dim = 1;
    for (int i = 0; i < ng; ++i) {
      contrib += rec.members[i].contribution(combo[i]);
      dim *= rec.members[i].sector_dim(combo[i]);
    }
    const int q = rec.fused_dir == Dir::Out ? contrib : -contrib;
    FusionPiece piece;
    piece.member_sectors = combo;
    piece.dim = dim;
    by_q[q].push_back(std::move(piece));
    done = true;
    for (int i = ng - 1; i >= 0; --i) {
      if (++combo[i] < rec.members[i].num_sectors()) {
        done = false;
        break;
      }
      combo[i] = 0;
    }
  }
  std::vector<Sector> fsec;
  std::map<BlockKey, std::pair<int, int>> combo_loc;  // combo -> (ordinal, offset)
  for (auto& qv : by_q) {
    int off = 0;
    for (auto& piece : qv.second) {
      piece.offset = off;
      off += piece.dim;
      combo_loc[piece.member_sectors] = {static_cast<int>(fsec.size()), piece.offset};
    }
    fsec.push_back({qv.first, off});
    rec.pieces.push_back(std::move(qv.second));
  }
  rec.fused = ChargeIndex(rec.fused_dir, std::move(fsec));

  SymTensor tp = transpose(t, rec.perm);
  std::vector<ChargeIndex> nidx;
  for (int i = 0; i < p; ++i) nidx.push_back(tp.index(i));
  nidx.push_back(rec.fused);
  for (int i = p + ng; i < r; ++i) nidx.push_back(tp.index(i));
  SymTensor out(std::move(nidx), t.total_charge());

  for (const auto& kv : tp.blocks()) {
    const BlockKey& key = kv.first;
    BlockKey combo_key(key.begin() + p, key.begin() + p + ng);
    const auto loc = combo_loc.at(combo_key);
    BlockKey nk(key.begin(), key.begin() + p);
    nk.push_back(loc.first);
    nk.insert(nk.end(), key.begin() + p + ng, key.end());

    std::vector<int> ishape = tp.block_shape(key);
    const std::size_t pre = product(ishape, 0, p);
    const std::size_t mid = product(ishape, p, p + ng);
    const std::size_t post = product(ishape, p + ng, ishape.size());
    const std::size_t ftot = static_cast<std::size_t>(rec.fused.sector_dim(loc.first));

    Block& dst = out.block(nk);
    const Block& src = kv.second;
    for (std::size_t a = 0; a < pre; ++a)
      for (std::size_t m = 0; m < mid; ++m) {
        const std::size_t so = (a * mid + m) * post;
        const std::size_t dofs = (a * ftot + loc.second + m) * post;
        std::copy(src.begin() + so, src.begin() + so + post, dst.begin() + dofs);
      }
  }
  return {std::move(out), std::move(rec)};
}

SymTensor split(const SymTensor& t, const FusionRecord& rec) {
  const int p = rec.fused_pos;
  if (p >= t.rank() || !(t.index(p) == rec.fused))
    throw StructuralError("split: fused leg mismatch");
  const int ng = static_cast<int>(rec.members.size());
  const int r_out = t.rank() - 1 + ng;

  std::vector<ChargeIndex> midx;
  for (int i = 0; i < p; ++i) midx.push_back(t.index(i));
  for (const auto& m : rec.members) midx.push_back(m);
  for (int i = p + 1; i < t.rank(); ++i) midx.push_back(t.index(i));
  SymTensor wide(std::move(midx), t.total_charge());

  for (const auto& kv : t.blocks()) {
    const BlockKey& key = kv.first;
    const int sf = key[p];
    std::vector<int> ishape = t.block_shape(key);
    const std::size_t pre = product(ishape, 0, p);
    const std::size_t ftot = static_cast<std::size_t>(ishape[p]);
    const std::size_t post = product(ishape, p + 1, ishape.size());
    for (const FusionPiece& piece : rec.pieces[sf]) {
      BlockKey nk(key.begin(), key.begin() + p);
      nk.insert(nk.end(), piece.member_sectors.begin(), piece.member_sectors.end());
      nk.insert(nk.end(), key.begin() + p + 1, key.end());
      const std::size_t mid = static_cast<std::size_t>(piece.dim);
      // Skip pieces that are entirely zero.
      bool nonzero = false;
      for (std::size_t a = 0; a < pre && !nonzero; ++a)
        for (std::size_t m = 0; m < mid && !nonzero; ++m) {
          const std::size_t so = (a * ftot + piece.offset + m) * post;
          for (std::size_t i = 0; i < post; ++i)
            if (kv.second[so + i] != cplx(0, 0)) {
              nonzero = true;
              break;
            }
        }
      if (!nonzero) continue;
      Block& dst = wide.block(nk);
      for (std::size_t a = 0; a < pre; ++a)
        for (std::size_t m = 0; m < mid; ++m) {
          const std::size_t so = (a * ftot + piece.offset + m) * post;
          const std::size_t dofs = (a * mid + m) * post;
          std::copy(kv.second.begin() + so, kv.second.begin() + so + post,
                    dst.begin() + dofs);
        }
    }
  }
  (void)r_out;
  return transpose(wide, rec.inv_perm);
}

namespace {

// Shared matricization for svd_truncate / isometrize: rows = row_group legs,
// cols = remaining legs in original order, one dense matrix per link charge.
struct Matricization {
  std::vector<int> perm;
  SymTensor tp;  // transposed tensor, row legs first
  int nrow = 0;
  struct MSector {
    int r = 0;  // net outgoing charge of the row side
    std::vector<BlockKey> row_keys, col_keys;
    std::vector<int> row_off, row_dim, col_off, col_dim;
    Eigen::MatrixXcd m;
  };
  std::vector<MSector> sectors;
};

Matricization matricize(const SymTensor& t, const std::vector<int>& row_group) {
  const int r = t.rank();
  if (row_group.empty() || static_cast<int>(row_group.size()) >= r)
    throw StructuralError("matricize: row group must be a nonempty proper subset of legs");
  std::vector<char> inr(r, 0);
  for (int g : row_group) {
    if (g < 0 || g >= r) throw StructuralError("matricize: leg out of range");
    if (inr[g]) throw StructuralError("matricize: repeated leg");
    inr[g] = 1;
  }
  if (t.blocks().empty()) throw NumericalError("matricize: tensor has no blocks");

  Matricization mz;
  mz.perm = row_group;
  for (int i = 0; i < r; ++i)
    if (!inr[i]) mz.perm.push_back(i);
  mz.nrow = static_cast<int>(row_group.size());
  mz.tp = transpose(t, mz.perm);

  const int nr = mz.nrow;
  std::map<int, std::map<BlockKey, int>> rows_by_r, cols_by_r;
  for (const auto& kv : mz.tp.blocks()) {
    int rq = 0;
    for (int i = 0; i < nr; ++i) rq += mz.tp.index(i).contribution(kv.first[i]);
    rows_by_r[rq].emplace(BlockKey(kv.first.begin(), kv.first.begin() + nr), 0);
    cols_by_r[rq].emplace(BlockKey(kv.first.begin() + nr, kv.first.end()), 0);
  }
  for (auto& rv : rows_by_r) {
    Matricization::MSector ms;
    ms.r = rv.first;
    int off = 0;
    for (auto& kd : rv.second) {
      int d = 1;
      for (int i = 0; i < nr; ++i) d *= mz.tp.index(i).sector_dim(kd.first[i]);
      kd.second = off;
      ms.row_keys.push_back(kd.first);
      ms.row_off.push_back(off);
      ms.row_dim.push_back(d);
      off += d;
    }
    const int nrows = off;
    off = 0;
    auto& cmap = cols_by_r[rv.first];
    for (auto& kd : cmap) {
      int d = 1;
      for (int i = nr; i < r; ++i) d *= mz.tp.index(i).sector_dim(kd.first[i - nr]);
      kd.second = off;
      ms.col_keys.push_back(kd.first);
      ms.col_off.push_back(off);
      ms.col_dim.push_back(d);
      off += d;
    }
    ms.m = Eigen::MatrixXcd::Zero(nrows, off);
    mz.sectors.push_back(std::move(ms));
  }
  // Fill.
  for (const auto& kv : mz.tp.blocks()) {
    int rq = 0;
    for (int i = 0; i < nr; ++i) rq += mz.tp.index(i).contribution(kv.first[i]);
    Matricization::MSector* ms = nullptr;
    for (auto& s : mz.sectors)
      if (s.r == rq) {
        ms = &s;
        break;
      }
    BlockKey rk(kv.first.begin(), kv.first.begin() + nr);
    BlockKey ck(kv.first.begin() + nr, kv.first.end());
    const int ri = static_cast<int>(
        std::lower_bound(ms->row_keys.begin(), ms->row_keys.end(), rk) - ms->row_keys.begin());
    const int ci = static_cast<int>(
        std::lower_bound(ms->col_keys.begin(), ms->col_keys.end(), ck) - ms->col_keys.begin());
    MapRowC src(kv.second.data(), ms->row_dim[ri], ms->col_dim[ci]);
    ms->m.block(ms->row_off[ri], ms->col_off[ci], ms->row_dim[ri], ms->col_dim[ci]) = src;
  }
  return mz;
}

// Rebuilds the row-side tensor (rows..., link In) from per-sector matrices.
SymTensor rows_tensor(const Matricization& mz, const std::vector<Eigen::MatrixXcd>& qs,
                      const ChargeIndex& link) {
  std::vector<ChargeIndex> idx;
  for (int i = 0; i < mz.nrow; ++i) idx.push_back(mz.tp.index(i));
  idx.push_back(link);
  SymTensor u(std::move(idx), 0);
  for (std::size_t si = 0; si < mz.sectors.size(); ++si) {
    const auto& ms = mz.sectors[si];
    if (qs[si].cols() == 0) continue;
    const int ls = link.find_charge(ms.r);
    const int k = static_cast<int>(qs[si].cols());
    for (std::size_t ri = 0; ri < ms.row_keys.size(); ++ri) {
      BlockKey key = ms.row_keys[ri];
      key.push_back(ls);
      Block& b = u.block(key);
      MapRow dst(b.data(), ms.row_dim[ri], k);
      dst = qs[si].block(ms.row_off[ri], 0, ms.row_dim[ri], k);
    }
  }
  return u;
}

// Rebuilds the column-side tensor (link Out, cols...) from per-sector matrices.
SymTensor cols_tensor(const Matricization& mz, const std::vector<Eigen::MatrixXcd>& rs,
                      const ChargeIndex& link, int total_charge) {
  const int r = mz.tp.rank();
  std::vector<ChargeIndex> idx;
  idx.push_back(link);
  for (int i = mz.nrow; i < r; ++i) idx.push_back(mz.tp.index(i));
  SymTensor v(std::move(idx), total_charge);
  for (std::size_t si = 0; si < mz.sectors.size(); ++si) {
    const auto& ms = mz.sectors[si];
    if (rs[si].rows() == 0) continue;
    const int ls = link.find_charge(ms.r);
    const int k = static_cast<int>(rs[si].rows());
    for (std::size_t ci = 0; ci < ms.col_keys.size(); ++ci) {
      BlockKey key;
      key.push_back(ls);
      key.insert(key.end(), ms.col_keys[ci].begin(), ms.col_keys[ci].end());
      Block& b = v.block(key);
      MapRow dst(b.data(), k, ms.col_dim[ci]);
      dst = rs[si].block(0, ms.col_off[ci], k, ms.col_dim[ci]);
    }
  }
  return v;
}

}  // namespace

SvdResult svd_truncate(const SymTensor& t, const std::vector<int>& row_group,
                       int max_dim, double rel_threshold) {
  if (max_dim < 1) throw StructuralError("svd_truncate: max_dim must be >= 1");
  if (rel_threshold < 0) throw StructuralError("svd_truncate: negative threshold");
  Matricization mz = matricize(t, row_group);

  struct Cand {
    double sigma;
    int sec;
    int i;
  };
  std::vector<Eigen::BDCSVD<Eigen::MatrixXcd>> svds;
  std::vector<Cand> cands;
  double total_w = 0, sigma_max = 0;
  for (std::size_t si = 0; si < mz.sectors.size(); ++si) {
    svds.emplace_back(mz.sectors[si].m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svds.back().singularValues();
    for (int i = 0; i < sv.size(); ++i) {
      cands.push_back({sv[i], static_cast<int>(si), i});
      total_w += sv[i] * sv[i];
      sigma_max = std::max(sigma_max, sv[i]);
    }
  }
  if (sigma_max <= 0) throw NumericalError("svd_truncate: tensor is exactly zero");
  std::sort(cands.begin(), cands.end(), [&](const Cand& a, const Cand& b) {
    if (a.sigma != b.sigma) return a.sigma > b.sigma;
    const int ra = mz.sectors[a.sec].r, rb = mz.sectors[b.sec].r;
    if (ra != rb) return ra < rb;
    return a.i < b.i;
  });
  std::vector<int> keep(mz.sectors.size(), 0);
  int kept = 0;
  double drop_w = 0;
  for (const Cand& c : cands) {
    // Candidates are sorted, so once one fails every later one fails too;
    // summing the dropped weight directly avoids cancellation against total_w.
    if (kept < max_dim && c.sigma >= rel_threshold * sigma_max) {
      ++keep[c.sec];
      ++kept;
    } else {
      drop_w += c.sigma * c.sigma;
    }
  }

  std::vector<Sector> lsec;
  std::map<int, int> keep_by_r;
  for (std::size_t si = 0; si < mz.sectors.size(); ++si)
    if (keep[si] > 0) keep_by_r[mz.sectors[si].r] = keep[si];
  for (const auto& rv : keep_by_r) lsec.push_back({rv.first, rv.second});
  ChargeIndex ulink(Dir::In, lsec);
  ChargeIndex vlink(Dir::Out, lsec);

  SvdResult res;
  std::vector<Eigen::MatrixXcd> us(mz.sectors.size()), vs(mz.sectors.size());
  for (std::size_t si = 0; si < mz.sectors.size(); ++si) {
    const int k = keep[si];
    if (k == 0) {
      us[si].resize(mz.sectors[si].m.rows(), 0);
      vs[si].resize(0, mz.sectors[si].m.cols());
      continue;
    }
    us[si] = svds[si].matrixU().leftCols(k);
    vs[si] = svds[si].matrixV().leftCols(k).adjoint();
    res.s[mz.sectors[si].r] = svds[si].singularValues().head(k);
  }
  res.u = rows_tensor(mz, us, ulink);
  res.v = cols_tensor(mz, vs, vlink, t.total_charge());
  res.discarded_weight = total_w > 0 ? drop_w / total_w : 0.0;
  return res;
}

SymTensor absorb_singular(const SymTensor& uv, const std::map<int, Eigen::VectorXd>& s,
                          char side) {
  SymTensor out = uv;
  const int pos = side == 'u' ? uv.rank() - 1 : 0;
  const ChargeIndex& link = uv.index(pos);
  for (auto& kv : out.blocks_mut()) {
    const int ls = kv.first[pos];
    const auto it = s.find(link.sector_charge(ls));
    if (it == s.end()) throw StructuralError("absorb_singular: missing sector");
    const Eigen::VectorXd& sv = it->second;
    const std::size_t k = static_cast<std::size_t>(sv.size());
    Block& b = kv.second;
    if (side == 'u') {
      // Link is the last leg: scale columns.
      const std::size_t rows = b.size() / k;
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < k; ++j) b[i * k + j] *= sv[static_cast<int>(j)];
    } else {
      // Link is the first leg: scale rows.
      const std::size_t cols = b.size() / k;
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < cols; ++i) b[j * cols + i] *= sv[static_cast<int>(j)];
    }
  }
  return out;
}

std::pair<SymTensor, SymTensor> isometrize(const SymTensor& t,
                                           const std::vector<int>& row_group) {
  Matricization mz = matricize(t, row_group);
  std::vector<Eigen::MatrixXcd> qs(mz.sectors.size()), rs(mz.sectors.size());
  std::vector<Sector> lsec;
  std::map<int, int> k_by_r;
  for (std::size_t si = 0; si < mz.sectors.size(); ++si) {
    const Eigen::MatrixXcd& m = mz.sectors[si].m;
    const int k = static_cast<int>(std::min(m.rows(), m.cols()));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    qs[si] = qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), k);
    rs[si] = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    k_by_r[mz.sectors[si].r] = k;
  }
  for (const auto& rv : k_by_r) lsec.push_back({rv.first, rv.second});
  ChargeIndex qlink(Dir::In, lsec);
  ChargeIndex rlink(Dir::Out, lsec);
  SymTensor q = rows_tensor(mz, qs, qlink);
  SymTensor r = cols_tensor(mz, rs, rlink, t.total_charge());
  return {std::move(q), std::move(r)};
}

std::string to_string(const SymTensor& t) {
  std::ostringstream os;
  os << "SymTensor(rank=" << t.rank() << ", Q=" << t.total_charge() << ", legs=[";
  for (int i = 0; i < t.rank(); ++i) {
    if (i) os << ", ";
    os << (t.index(i).dir() == Dir::Out ? "out" : "in") << "{";
    for (int s = 0; s < t.index(i).num_sectors(); ++s) {
      if (s) os << ",";
      os << t.index(i).sector_charge(s) << ":" << t.index(i).sector_dim(s);
    }
    os << "}";
  }
  os << "], blocks=" << t.num_blocks() << ")";
  return os.str();
}

}  // namespace ttnring
