#include "ttnring/exact.hpp"

#include <algorithm>
#include <cmath>

#include "ttnring/krylov.hpp"

namespace ttnring {

namespace {

void enumerate_rec(int L, int d, int site, int left, std::uint64_t acc,
                   std::vector<std::uint64_t>& out) {
  if (site == L) {
    if (left == 0) out.push_back(acc);
    return;
  }
  const int remaining_cap = (L - site - 1) * (d - 1);
  for (int n = 0; n < d; ++n) {
    if (n > left) break;
    if (left - n > remaining_cap) continue;
    enumerate_rec(L, d, site + 1, left - n, acc | (std::uint64_t(n) << (4 * site)), out);
  }
}

}  // namespace

FockBasis FockBasis::build(int L, int d, int N) {
  if (L < 1 || L > 16) throw CapacityError("FockBasis: L must be in [1, 16]");
  if (d < 2 || d > 16) throw CapacityError("FockBasis: d must be in [2, 16]");
  if (N < 0 || N > (d - 1) * L) throw StructuralError("FockBasis: N outside sector range");
  FockBasis b;
  b.L = L;
  b.d = d;
  b.N = N;
  enumerate_rec(L, d, 0, N, 0, b.states);
  std::sort(b.states.begin(), b.states.end());
  return b;
}

std::ptrdiff_t FockBasis::index(std::uint64_t s) const {
  auto it = std::lower_bound(states.begin(), states.end(), s);
  if (it == states.end() || *it != s) return -1;
  return it - states.begin();
}

std::size_t sector_dimension(int L, int d, int N) {
  if (N < 0) return 0;
  // DP over sites: ways[n] = number of fillings of the first j sites with n.
  std::vector<std::size_t> ways(static_cast<std::size_t>(N) + 1, 0);
  ways[0] = 1;
  for (int j = 0; j < L; ++j) {
    std::vector<std::size_t> nw(ways.size(), 0);
    for (int n = 0; n <= N; ++n) {
      if (!ways[n]) continue;
      for (int k = 0; k < d && n + k <= N; ++k) nw[n + k] += ways[n];
    }
    ways.swap(nw);
  }
  return ways[N];
}

SectorHamiltonian build_sector_hamiltonian(const BHParams& p, std::size_t max_dim) {
  p.validate();
  const std::size_t dim = sector_dimension(p.L, p.d, p.particles());
  if (dim == 0) throw StructuralError("build_sector_hamiltonian: empty sector");
  if (dim > max_dim)
    throw CapacityError("build_sector_hamiltonian: sector dimension " + std::to_string(dim) +
                        " exceeds limit " + std::to_string(max_dim));
  SectorHamiltonian sh;
  sh.basis = FockBasis::build(p.L, p.d, p.particles());
  const std::size_t n = sh.basis.dim();
  const cplx hop = std::polar(1.0, p.phi / p.L);

  std::vector<Eigen::Triplet<cplx>> th, ti;
  th.reserve(n * static_cast<std::size_t>(2 * p.L));
  ti.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t s = sh.basis.states[i];
    double diag = 0;
    for (int j = 0; j < p.L; ++j) {
      const int nj = FockBasis::occ(s, j);
      diag += 0.5 * nj * (nj - 1);
      const int jp = (j + 1) % p.L;
      const int njp = FockBasis::occ(s, jp);
      // -J e^{i phi/L} b^+_{j+1} b_j moves one boson j -> j+1.
      if (nj > 0 && njp < p.d - 1) {
        const std::uint64_t s2 = FockBasis::with_occ(FockBasis::with_occ(s, j, nj - 1), jp, njp + 1);
        const std::ptrdiff_t i2 = sh.basis.index(s2);
        const double amp = std::sqrt(double(nj)) * std::sqrt(double(njp + 1));
        th.emplace_back(static_cast<int>(i2), static_cast<int>(i), -p.J * hop * amp);
        // Hermitian partner handled when the loop reaches the reverse hop.
      }
      // -J e^{-i phi/L} b^+_j b_{j+1} moves one boson j+1 -> j.
      if (njp > 0 && nj < p.d - 1) {
        const std::uint64_t s2 = FockBasis::with_occ(FockBasis::with_occ(s, jp, njp - 1), j, nj + 1);
        const std::ptrdiff_t i2 = sh.basis.index(s2);
        const double amp = std::sqrt(double(njp)) * std::sqrt(double(nj + 1));
        th.emplace_back(static_cast<int>(i2), static_cast<int>(i),
                        -p.J * std::conj(hop) * amp);
      }
    }
    if (diag != 0) ti.emplace_back(static_cast<int>(i), static_cast<int>(i), diag);
  }
  sh.h_hop.resize(static_cast<int>(n), static_cast<int>(n));
  sh.h_hop.setFromTriplets(th.begin(), th.end());
  sh.h_int.resize(static_cast<int>(n), static_cast<int>(n));
  sh.h_int.setFromTriplets(ti.begin(), ti.end());
  return sh;
}

SparseMat SectorHamiltonian::h(double u) const {
  SparseMat m = h_hop;
  m += u * h_int;
  return m;
}

SparseMat term_matrix(const FockBasis& basis, const TermList& terms) {
  const std::size_t n = basis.dim();
  std::vector<Eigen::Triplet<cplx>> tr;
  // Dense d x d copies of each local operator for generic application.
  auto dense_op = [&](const SymTensor& op) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(basis.d, basis.d);
    for (const auto& kv : op.blocks()) {
      const int r = op.index(0).sector_charge(kv.first[0]);
      const int c = op.index(1).sector_charge(kv.first[1]);
      m(r, c) = kv.second[0];
    }
    return m;
  };
  for (const Term& term : terms) {
    std::vector<Eigen::MatrixXcd> mats;
    for (const auto& op : term.ops) mats.push_back(dense_op(op));
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t s = basis.states[i];
      if (term.sites.size() == 1) {
        const int site = term.sites[0] - 1;
        const int nocc = FockBasis::occ(s, site);
        for (int m = 0; m < basis.d; ++m) {
          const cplx amp = mats[0](m, nocc);
          if (amp == cplx(0, 0)) continue;
          const std::ptrdiff_t i2 = basis.index(FockBasis::with_occ(s, site, m));
          if (i2 < 0) continue;
          tr.emplace_back(static_cast<int>(i2), static_cast<int>(i), term.coeff * amp);
        }
      } else {
        const int sa = term.sites[0] - 1, sb = term.sites[1] - 1;
        const int na = FockBasis::occ(s, sa), nb = FockBasis::occ(s, sb);
        for (int ma = 0; ma < basis.d; ++ma) {
          const cplx aa = mats[0](ma, na);
          if (aa == cplx(0, 0)) continue;
          for (int mb = 0; mb < basis.d; ++mb) {
            const cplx ab = mats[1](mb, nb);
            if (ab == cplx(0, 0)) continue;
            const std::uint64_t s2 =
                FockBasis::with_occ(FockBasis::with_occ(s, sa, ma), sb, mb);
            const std::ptrdiff_t i2 = basis.index(s2);
            if (i2 < 0) continue;
            tr.emplace_back(static_cast<int>(i2), static_cast<int>(i),
                            term.coeff * aa * ab);
          }
        }
      }
    }
  }
  SparseMat m(static_cast<int>(n), static_cast<int>(n));
  m.setFromTriplets(tr.begin(), tr.end());
  return m;
}

SparseMat translation_matrix(const FockBasis& basis) {
  const std::size_t n = basis.dim();
  std::vector<Eigen::Triplet<cplx>> tr;
  tr.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t s = basis.states[i];
    std::uint64_t s2 = 0;
    for (int j = 0; j < basis.L; ++j) {
      const int jp = (j + 1) % basis.L;
      s2 = FockBasis::with_occ(s2, jp, FockBasis::occ(s, j));
    }
    const std::ptrdiff_t i2 = basis.index(s2);
    tr.emplace_back(static_cast<int>(i2), static_cast<int>(i), cplx(1, 0));
  }
  SparseMat m(static_cast<int>(n), static_cast<int>(n));
  m.setFromTriplets(tr.begin(), tr.end());
  return m;
}

namespace {

// Lanczos with full reorthogonalization for the k lowest eigenpairs of a
// sparse Hermitian matrix.  Used when the sector is too big for dense work.
std::pair<Eigen::VectorXd, Eigen::MatrixXcd> lanczos_lowest_k(const SparseMat& h, int k,
                                                              double tol, int max_m) {
  const int n = static_cast<int>(h.rows());
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
  // Deterministic start vector spread over the whole basis.
  for (int i = 0; i < n; ++i)
    v[i] = cplx(std::cos(0.7 * (i + 1)), std::sin(1.3 * (i + 1) + 0.25));
  v.normalize();

  std::vector<Eigen::VectorXcd> basis;
  basis.push_back(v);
  std::vector<double> alpha, beta;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  for (int m = 0; m < max_m; ++m) {
    Eigen::VectorXcd w = h * basis[m];
    const double a = std::real(basis[m].dot(w));
    alpha.push_back(a);
    w -= a * basis[m];
    if (m > 0) w -= beta[m - 1] * basis[m - 1];
    for (const auto& q : basis) w -= q.dot(w) * q;
    const double b = w.norm();
    const int dim = m + 1;
    // Ritz convergence is checked periodically; the small eigensolve is
    // cubic in dim and would dominate if run every iteration.
    const bool check =
        (dim >= k + 2 && dim % 10 == 0) || b <= 1e-13 || dim == max_m;
    if (check) {
      Eigen::MatrixXd tm = Eigen::MatrixXd::Zero(dim, dim);
      for (int i = 0; i < dim; ++i) {
        tm(i, i) = alpha[i];
        if (i + 1 < dim) tm(i, i + 1) = tm(i + 1, i) = beta[i];
      }
      es.compute(tm);
      bool conv = true;
      for (int j = 0; j < k; ++j) {
        const double resid = b * std::abs(es.eigenvectors()(dim - 1, j));
        if (resid > tol * std::max(1.0, std::abs(es.eigenvalues()[j]))) {
          conv = false;
          break;
        }
      }
      if (conv || b <= 1e-13 || dim == max_m) {
        if (!conv && b > 1e-13 && dim == max_m)
          throw NumericalError("lanczos_lowest_k: no convergence");
        Eigen::VectorXd evals = es.eigenvalues().head(k);
        Eigen::MatrixXcd vecs(n, k);
        for (int j = 0; j < k; ++j) {
          Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
          for (int i = 0; i < dim; ++i) x += es.eigenvectors()(i, j) * basis[i];
          x.normalize();
          vecs.col(j) = x;
        }
        return {evals, vecs};
      }
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  throw NumericalError("lanczos_lowest_k: unreachable");
}

}  // namespace

SpectrumResult low_spectrum(const FockBasis& basis, const SparseMat& h, int k, double tol,
                            double degeneracy_tol) {
  const int n = static_cast<int>(h.rows());
  if (k < 1 || k > n) throw StructuralError("low_spectrum: bad k");
  SpectrumResult res;
  const int dense_cutoff = 2000;
  if (n <= dense_cutoff) {
    Eigen::MatrixXcd hd(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hd);
    res.energies = es.eigenvalues().head(k);
    res.states = es.eigenvectors().leftCols(k);
  } else {
    auto [evals, vecs] = lanczos_lowest_k(h, k, tol, std::min(n, 600));
    res.energies = evals;
    res.states = vecs;
  }

  // Translation labels: rotate each (quasi-)degenerate cluster to shift
  // eigenstates.  The shift commutes with h, so the projected block is
  // unitary up to numerical error.
  const SparseMat tmat = translation_matrix(basis);
  res.tau.resize(k);
  int lo = 0;
  while (lo < k) {
    int hi = lo + 1;
    while (hi < k && std::abs(res.energies[hi] - res.energies[hi - 1]) < degeneracy_tol) ++hi;
    const int w = hi - lo;
    Eigen::MatrixXcd block = res.states.middleCols(lo, w).adjoint() *
                             (tmat * res.states.middleCols(lo, w));
    if (w == 1) {
      cplx t = block(0, 0);
      res.tau[lo] = t / std::abs(t);
    } else {
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(block);
      res.states.middleCols(lo, w) =
          (res.states.middleCols(lo, w) * ces.eigenvectors()).eval();
      for (int j = 0; j < w; ++j) {
        res.states.col(lo + j).normalize();
        cplx t = ces.eigenvalues()[j];
        res.tau[lo + j] = t / std::abs(t);
      }
    }
    lo = hi;
  }
  return res;
}

void exact_evolve(const SectorHamiltonian& sh, const AnnealSchedule& s, Eigen::VectorXcd& psi,
                  double t_start, double t_end, double dt, double krylov_tol,
                  const std::function<void(int, double, const Eigen::VectorXcd&)>& measure) {
  if (dt <= 0) throw StructuralError("exact_evolve: dt must be positive");
  if (measure) measure(0, t_start, psi);
  double t = t_start;
  int step = 0;
  const cplx mi(0, -1);
  while (t < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
    const double step_dt = std::min(dt, t_end - t);
    const double u_mid = schedule_u(s, t + 0.5 * step_dt);
    auto apply = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
      return sh.h_hop * v + u_mid * (sh.h_int * v);
    };
    psi = krylov_expm(apply, psi, mi * step_dt, krylov_tol);
    t += step_dt;
    ++step;
    if (measure) measure(step, t, psi);
  }
}

Eigen::VectorXd ModeDecomposition::weights() const {
  Eigen::VectorXd w(c.size());
  for (int i = 0; i < c.size(); ++i) w[i] = std::norm(c[i]);
  return w;
}

double ModeDecomposition::reconstruct(double t) const {
  cplx acc(0, 0);
  for (int a = 0; a < c.size(); ++a)
    for (int b = 0; b < c.size(); ++b)
      acc += std::conj(c[a]) * c[b] *
             std::exp(cplx(0, 1) * (energies[a] - energies[b]) * t) * i_mat(a, b);
  return std::real(acc);
}

ModeDecomposition current_mode_decomposition(const SpectrumResult& spec,
                                             const Eigen::VectorXcd& psi,
                                             const SparseMat& current) {
  ModeDecomposition md;
  md.c = spec.states.adjoint() * psi;
  md.energies = spec.energies;
  md.i_mat = spec.states.adjoint() * (current * spec.states);
  return md;
}

}  // namespace ttnring
