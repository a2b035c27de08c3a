#pragma once

// Flux-pierced Bose-Hubbard ring:
//   H = -J sum_j (e^{i phi/L} b^+_{j+1} b_j + h.c.) + (U/2) sum_j n_j (n_j - 1)
// with periodic wrap j = L -> 1 carrying the same bond phase.  Units: hbar = 1,
// energies in J, times in hbar/J.  The total current operator is
//   I = -(1/hbar) dH/dphi = (1/L) sum_k I_k,
//   I_k = (i J/hbar) (e^{i phi/L} b^+_{k+1} b_k - h.c.).

#include <complex>
#include <vector>

#include "ttnring/symtensor.hpp"

namespace ttnring {

struct BHParams {
  int L = 8;        // ring sites; >= 2 (tree layouts additionally need a power of two)
  int d = 3;        // local dimension: occupations 0 .. d-1
  int N = -1;       // conserved total particle number; -1 means N = L (unit filling)
  double J = 1.0;   // hopping scale
  double U = 0.0;   // on-site interaction
  double phi = 0.0; // total flux through the ring, radians

  int particles() const { return N < 0 ? L : N; }
  void validate() const;
};

// Linear interaction ramp: U(t) = u_i (1 + gamma t) for t <= t0, then u_f.
// Ramp end t0 = (u_f/u_i - 1)/gamma.
struct AnnealSchedule {
  double u_i = 2.0;
  double u_f = 7.0;
  double gamma = 1.0 / 6.0;  // in J/hbar

  double t0() const { return (u_f / u_i - 1.0) / gamma; }
  void validate() const;
};

double schedule_u(const AnnealSchedule& s, double t);

// One Hamiltonian/observable term: coeff * op_1(site_1) [* op_2(site_2)].
// Sites are 1-based and strictly ascending; ops match sites in order.
struct Term {
  std::vector<int> sites;
  std::vector<SymTensor> ops;
  cplx coeff;
};
using TermList = std::vector<Term>;

// Physical leg: Out direction, one sector per occupation 0..d-1, each dim 1.
ChargeIndex phys_index(int d);

// Local operators as 2-leg tensors [Out(ket', full), In(ket, full)] so that
// contracting leg 1 with a state's physical leg applies the operator.
SymTensor op_b(int d);      // annihilation, charge -1
SymTensor op_bdag(int d);   // creation, charge +1
SymTensor op_n(int d);      // number, charge 0
SymTensor op_nn(int d);     // n(n-1), charge 0

// Full Hamiltonian at p.U.
TermList hamiltonian_terms(const BHParams& p);
// Split form: H = hopping_terms + U * interaction_terms.  The interaction
// part carries coefficient 1/2 per site so the U scale applies verbatim.
TermList hopping_terms(const BHParams& p);
TermList interaction_terms(const BHParams& p);

// Total current operator I (already divided by L).
TermList current_terms(const BHParams& p);
// Bond current I_k on bond (k, k+1 mod L), k in 1..L.
TermList local_current_term(const BHParams& p, int k);

}  // namespace ttnring
