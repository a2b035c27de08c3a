#include <cmath>
#include <complex>

#include "doctest.h"
#include "test_util.hpp"
#include "ttnring/model.hpp"

using namespace ttnring;

TEST_CASE("local operators carry the boson matrix elements") {
  const int d = 4;
  const oracle::DenseTensor b = oracle::embed(op_b(d));
  const oracle::DenseTensor bd = oracle::embed(op_bdag(d));
  const oracle::DenseTensor n = oracle::embed(op_n(d));
  const oracle::DenseTensor nn = oracle::embed(op_nn(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const cplx vb = b.at({i, j});
      const cplx vbd = bd.at({i, j});
      CHECK(std::abs(vb - (i == j - 1 ? std::sqrt(double(j)) : 0.0)) < 1e-15);
      CHECK(std::abs(vbd - (i == j + 1 ? std::sqrt(double(j + 1)) : 0.0)) < 1e-15);
      CHECK(std::abs(n.at({i, j}) - (i == j ? double(i) : 0.0)) < 1e-15);
      CHECK(std::abs(nn.at({i, j}) - (i == j ? double(i) * (i - 1) : 0.0)) < 1e-15);
    }
  CHECK(op_b(d).total_charge() == -1);
  CHECK(op_bdag(d).total_charge() == 1);
  CHECK(op_n(d).total_charge() == 0);

  const ChargeIndex ph = phys_index(d);
  CHECK(ph.dir() == Dir::Out);
  CHECK(ph.num_sectors() == d);
  for (int q = 0; q < d; ++q) {
    CHECK(ph.sector_charge(q) == q);
    CHECK(ph.sector_dim(q) == 1);
  }
}

TEST_CASE("term lists cover every bond once with conjugate partners") {
  BHParams p;
  p.L = 6;
  p.d = 3;
  p.phi = 0.7 * M_PI;
  p.U = 3.5;

  const TermList hop = hopping_terms(p);
  REQUIRE(hop.size() == std::size_t(2 * p.L));
  const cplx phase = std::polar(1.0, p.phi / p.L);
  for (const Term& t : hop) {
    REQUIRE(t.sites.size() == 2);
    CHECK(t.sites[0] < t.sites[1]);
    CHECK(t.sites[0] >= 1);
    CHECK(t.sites[1] <= p.L);
    CHECK(std::abs(t.coeff) == doctest::Approx(p.J).epsilon(1e-14));
    const bool forward = std::abs(t.coeff - (-p.J * phase)) < 1e-14;
    const bool backward = std::abs(t.coeff - (-p.J * std::conj(phase))) < 1e-14;
    CHECK((forward || backward));
  }
  // The wrap bond appears as (1, L) with the raising operator on site 1.
  int wrap = 0;
  for (const Term& t : hop)
    if (t.sites[0] == 1 && t.sites[1] == p.L) ++wrap;
  CHECK(wrap == 2);

  const TermList inter = interaction_terms(p);
  REQUIRE(inter.size() == std::size_t(p.L));
  for (const Term& t : inter) {
    REQUIRE(t.sites.size() == 1);
    CHECK(t.coeff == cplx(0.5, 0));
  }

  const TermList full = hamiltonian_terms(p);
  CHECK(full.size() == hop.size() + inter.size());
  CHECK(full.back().coeff == cplx(0.5 * p.U, 0));
}

TEST_CASE("current terms sum the bond currents over L") {
  BHParams p;
  p.L = 4;
  p.d = 3;
  p.phi = 0.3;
  const TermList cur = current_terms(p);
  CHECK(cur.size() == std::size_t(2 * p.L));
  for (const Term& t : cur)
    CHECK(std::abs(t.coeff) == doctest::Approx(p.J / p.L).epsilon(1e-14));

  const TermList bond = local_current_term(p, 2);
  REQUIRE(bond.size() == 2);
  CHECK(bond[0].sites == std::vector<int>{2, 3});
  // Hermitian pairing: the reversed-direction coefficient is the conjugate.
  CHECK(std::abs(bond[1].coeff - std::conj(bond[0].coeff)) < 1e-15);
  CHECK_THROWS_AS(local_current_term(p, 0), StructuralError);
  CHECK_THROWS_AS(local_current_term(p, 5), StructuralError);
}

TEST_CASE("interaction ramp holds its endpoints") {
  AnnealSchedule s;
  s.u_i = 2.0;
  s.u_f = 7.0;
  s.gamma = 1.0 / 6.0;
  CHECK(s.t0() == doctest::Approx(15.0).epsilon(1e-14));
  CHECK(schedule_u(s, -1.0) == 2.0);
  CHECK(schedule_u(s, 0.0) == 2.0);
  CHECK(schedule_u(s, 7.5) == doctest::Approx(4.5).epsilon(1e-14));
  CHECK(schedule_u(s, 15.0) == 7.0);
  CHECK(schedule_u(s, 100.0) == 7.0);

  AnnealSchedule flat;
  flat.u_i = flat.u_f = 4.0;
  flat.gamma = 0.5;
  flat.validate();
  CHECK(flat.t0() == 0.0);
  CHECK(schedule_u(flat, 3.0) == 4.0);
}

TEST_CASE("parameter validation rejects unusable settings") {
  BHParams p;
  p.L = 8;
  p.d = 3;
  p.validate();

  BHParams bad = p;
  bad.L = 1;
  CHECK_THROWS_AS(bad.validate(), StructuralError);
  bad = p;
  bad.d = 1;
  CHECK_THROWS_AS(bad.validate(), StructuralError);
  bad = p;
  bad.N = 17;  // more than (d-1) L
  CHECK_THROWS_AS(bad.validate(), StructuralError);
  bad = p;
  bad.J = 0;
  CHECK_THROWS_AS(bad.validate(), StructuralError);
  bad = p;
  bad.U = -1;
  CHECK_THROWS_AS(bad.validate(), StructuralError);

  AnnealSchedule s;
  s.u_i = 0;
  CHECK_THROWS_AS(s.validate(), StructuralError);
  s.u_i = 5;
  s.u_f = 2;
  CHECK_THROWS_AS(s.validate(), StructuralError);
  s.u_f = 6;
  s.gamma = 0;
  CHECK_THROWS_AS(s.validate(), StructuralError);
}
