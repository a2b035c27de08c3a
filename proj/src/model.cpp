#include "ttnring/model.hpp"

#include <cmath>

namespace ttnring {

void BHParams::validate() const {
  if (L < 2) throw StructuralError("BHParams: L must be >= 2");
  if (d < 2) throw StructuralError("BHParams: d must be >= 2");
  if (d > 16) throw CapacityError("BHParams: d > 16 not supported");
  if (N < -1) throw StructuralError("BHParams: N must be -1 (unit filling) or >= 0");
  const int n = particles();
  if (n < 0 || n > (d - 1) * L)
    throw StructuralError("BHParams: N outside [0, (d-1)L]");
  if (J <= 0) throw StructuralError("BHParams: J must be positive");
  if (U < 0) throw StructuralError("BHParams: U must be >= 0");
}

void AnnealSchedule::validate() const {
  if (u_i <= 0) throw StructuralError("AnnealSchedule: u_i must be positive");
  if (u_f < u_i) throw StructuralError("AnnealSchedule: u_f must be >= u_i");
  if (gamma <= 0) throw StructuralError("AnnealSchedule: gamma must be positive");
}

double schedule_u(const AnnealSchedule& s, double t) {
  if (t <= 0) return s.u_i;
  if (t >= s.t0()) return s.u_f;
  return s.u_i * (1.0 + s.gamma * t);
}

ChargeIndex phys_index(int d) {
  std::vector<Sector> sec;
  sec.reserve(d);
  for (int n = 0; n < d; ++n) sec.push_back({n, 1});
  return ChargeIndex(Dir::Out, std::move(sec));
}

namespace {

SymTensor local_op(int d, int charge) {
  const ChargeIndex ket = phys_index(d);
  return SymTensor({ket, ket.conjugated()}, charge);
}

}  // namespace

SymTensor op_b(int d) {
  SymTensor t = local_op(d, -1);
  for (int n = 1; n < d; ++n) t.block({n - 1, n})[0] = std::sqrt(double(n));
  return t;
}

SymTensor op_bdag(int d) {
  SymTensor t = local_op(d, +1);
  for (int n = 0; n + 1 < d; ++n) t.block({n + 1, n})[0] = std::sqrt(double(n + 1));
  return t;
}

SymTensor op_n(int d) {
  SymTensor t = local_op(d, 0);
  for (int n = 1; n < d; ++n) t.block({n, n})[0] = double(n);
  return t;
}

SymTensor op_nn(int d) {
  SymTensor t = local_op(d, 0);
  for (int n = 2; n < d; ++n) t.block({n, n})[0] = double(n) * double(n - 1);
  return t;
}

namespace {

// Bond term coeff * O_a(k) O_b(k+1) with ring wrap, stored with ascending sites.
Term bond_term(int L, int k, SymTensor oa, SymTensor ob, cplx coeff) {
  const int kp = k % L + 1;
  Term t;
  t.coeff = coeff;
  if (k < kp) {
    t.sites = {k, kp};
    t.ops = {std::move(oa), std::move(ob)};
  } else {
    t.sites = {kp, k};
    t.ops = {std::move(ob), std::move(oa)};
  }
  return t;
}

}  // namespace

TermList hopping_terms(const BHParams& p) {
  p.validate();
  TermList out;
  const cplx hop = std::polar(1.0, p.phi / p.L);
  for (int j = 1; j <= p.L; ++j) {
    // -J e^{i phi/L} b^+_{j+1} b_j  and its conjugate.
    out.push_back(bond_term(p.L, j, op_b(p.d), op_bdag(p.d), -p.J * hop));
    out.push_back(bond_term(p.L, j, op_bdag(p.d), op_b(p.d), -p.J * std::conj(hop)));
  }
  return out;
}

TermList interaction_terms(const BHParams& p) {
  p.validate();
  TermList out;
  for (int j = 1; j <= p.L; ++j) {
    Term t;
    t.sites = {j};
    t.ops = {op_nn(p.d)};
    t.coeff = 0.5;
    out.push_back(std::move(t));
  }
  return out;
}

TermList hamiltonian_terms(const BHParams& p) {
  TermList out = hopping_terms(p);
  for (Term t : interaction_terms(p)) {
    t.coeff *= p.U;
    out.push_back(std::move(t));
  }
  return out;
}

TermList local_current_term(const BHParams& p, int k) {
  p.validate();
  if (k < 1 || k > p.L) throw StructuralError("local_current_term: bond out of range");
  const cplx hop = std::polar(1.0, p.phi / p.L);
  const cplx i_unit(0, 1);
  TermList out;
  // I_k = (i J) (e^{i phi/L} b^+_{k+1} b_k - e^{-i phi/L} b^+_k b_{k+1}), hbar = 1.
  out.push_back(bond_term(p.L, k, op_b(p.d), op_bdag(p.d), i_unit * p.J * hop));
  out.push_back(bond_term(p.L, k, op_bdag(p.d), op_b(p.d), -i_unit * p.J * std::conj(hop)));
  return out;
}

TermList current_terms(const BHParams& p) {
  TermList out;
  for (int k = 1; k <= p.L; ++k) {
    for (Term t : local_current_term(p, k)) {
      t.coeff /= double(p.L);
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace ttnring
