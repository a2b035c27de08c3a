#pragma once

// Strong-coupling expansion for the Mott gap at unit filling.  The hopping
// part is the perturbation; energies come out in units of J (with U given
// in J).  Intermediate occupation states are untruncated (values up to 3
// occur), independent of any simulation cutoff d.

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "ttnring/model.hpp"

namespace ttnring {

using OccState = std::vector<std::uint8_t>;
using OccAmplitudes = std::map<OccState, cplx>;

// Applies the hopping operator -sum_j (e^{i phi/L} b^+_{j+1} b_j + h.c.)
// (J = 1) to a superposition of occupation states on an L-ring.
OccAmplitudes apply_hopping(const OccAmplitudes& in, int L, double phi);

// Interaction quanta of a state: sum_j n_j (n_j - 1) / 2 (its unperturbed
// energy in units of U).
int interaction_quanta(const OccState& o);

// Translation-invariant holon-doublon pair states at unit filling:
// |s> = (1/sqrt L) sum_q shift^q |0 1 .. 1 2 1 .. 1>, doublon s+1 sites
// right of the holon, s = 0 .. L-2.  They span the tau = 1 part of the
// one-pair shell.
struct HolonDoublonBasis {
  int L = 0;
  std::vector<OccState> base;  // unshifted pattern per s

  static HolonDoublonBasis build(int L);
  // |s> expanded over occupation states.
  OccAmplitudes state(int s) const;
  // <s'|V|s> in the shell; tridiagonal with elements
  // -3 (delta_{s,s'+1} e^{-i phi/L} + delta_{s',s+1} e^{i phi/L}).
  Eigen::MatrixXcd shell_matrix(double phi) const;
};

// Lowest eigenpair of the shell matrix: the first-order coefficient
// E1^(1) (in J) and its shell eigenvector.  Analytically -6 cos(pi/L).
struct FirstOrder {
  double e1 = 0;
  Eigen::VectorXcd vec;
};
FirstOrder first_order(int L, double phi);

// Ground-state second-order coefficient (units J^2/U), both routes:
// closed form -4L and the explicit sum over intermediate states.
struct SecondOrderGround {
  double closed = 0;
  double enumerated = 0;
};
SecondOrderGround second_order_ground(int L);

// Second-order coefficient of the first excited tau = 1 level (units
// J^2/U): sum over intermediate occupation states outside the one-pair
// shell of |w_k|^2 / (1 - e_k), e_k the interaction quanta.
double second_order_excited(int L, double phi);

// Gap estimate at interaction u (in J):
//   delta1 = u + E1^(1)
//   delta2 = u + E1^(1) + (E1^(2) - E0^(2)) / u
struct PerturbGap {
  double u = 0;
  double delta1 = 0;
  double delta2 = 0;
  double e11 = 0;  // first-order coefficient
  double e02 = 0;  // ground second-order coefficient
  double e12 = 0;  // excited second-order coefficient
  double c = 0;    // e12 - e02
};
PerturbGap gap(int L, double phi, double u);

}  // namespace ttnring
