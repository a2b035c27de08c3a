#pragma once

// Exact diagonalization on the fixed-N Fock sector, used as the reference
// for ground-state, spectral, and time-evolution results at small L.

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ttnring/model.hpp"

namespace ttnring {

using SparseMat = Eigen::SparseMatrix<cplx>;

// Occupation basis of the N-particle sector, packed 4 bits per site
// (so L <= 16 and d <= 16), sorted ascending for binary-search lookup.
struct FockBasis {
  int L = 0, d = 0, N = 0;
  std::vector<std::uint64_t> states;

  static FockBasis build(int L, int d, int N);
  std::size_t dim() const { return states.size(); }
  std::ptrdiff_t index(std::uint64_t s) const;  // -1 if absent

  static int occ(std::uint64_t s, int site) {  // site 0-based
    return static_cast<int>((s >> (4 * site)) & 0xFULL);
  }
  static std::uint64_t with_occ(std::uint64_t s, int site, int n) {
    return (s & ~(0xFULL << (4 * site))) | (std::uint64_t(n) << (4 * site));
  }
};

// Number of Fock states with L sites, occupations < d, N particles.
std::size_t sector_dimension(int L, int d, int N);

// Hamiltonian assembled directly from occupation arithmetic (hops + diagonal).
// `max_dim` guards runaway sector sizes.
struct SectorHamiltonian {
  FockBasis basis;
  SparseMat h_hop;   // hopping part (J, phi dependent)
  SparseMat h_int;   // interaction part at unit U (includes the 1/2)
  SparseMat h(double u) const;
};
SectorHamiltonian build_sector_hamiltonian(const BHParams& p,
                                           std::size_t max_dim = 20000);

// Generic sparse assembly of a TermList in the given basis.  Independent of
// the occupation-arithmetic route above; used for observables and as a
// consistency check on the Hamiltonian build.
SparseMat term_matrix(const FockBasis& basis, const TermList& terms);

// Low part of the spectrum with translation labels.  States within
// `degeneracy_tol` are treated as one multiplet and rotated to translation
// eigenstates; tau is the eigenvalue of the one-site cyclic shift j -> j+1.
struct SpectrumResult {
  Eigen::VectorXd energies;
  Eigen::MatrixXcd states;  // dim x k, columns normalized
  Eigen::VectorXcd tau;
};
SpectrumResult low_spectrum(const FockBasis& basis, const SparseMat& h, int k,
                            double tol = 1e-10, double degeneracy_tol = 1e-8);

// One-site cyclic shift as a permutation matrix in the sector basis.
SparseMat translation_matrix(const FockBasis& basis);

// Midpoint-frozen exact propagation: per step, psi <- exp(-i H(t+dt/2) dt) psi
// with H(t) = h_hop + schedule_u(s, t) * h_int, via the shared Krylov
// exponential.  Calls `measure(step_index, t_after, psi)` after every step
// and once for the initial state (step_index 0, t = t_start).
void exact_evolve(const SectorHamiltonian& sh, const AnnealSchedule& s,
                  Eigen::VectorXcd& psi, double t_start, double t_end, double dt,
                  double krylov_tol,
                  const std::function<void(int, double, const Eigen::VectorXcd&)>& measure);

// Expansion of a state over spectrum eigenstates plus the current matrix in
// that eigenbasis; reconstructs I(t) = sum_ab conj(c_a) c_b e^{i(E_a-E_b)t} I_ab.
struct ModeDecomposition {
  Eigen::VectorXcd c;       // <alpha|psi> at t = 0 of the reconstruction clock
  Eigen::VectorXd energies;
  Eigen::MatrixXcd i_mat;   // <alpha|I|beta>
  Eigen::VectorXd weights() const;
  double reconstruct(double t) const;
};
ModeDecomposition current_mode_decomposition(const SpectrumResult& spec,
                                             const Eigen::VectorXcd& psi,
                                             const SparseMat& current);

}  // namespace ttnring
