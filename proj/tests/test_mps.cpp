#include <gtest/gtest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "sptnoise/errors.hpp"
#include "sptnoise/mps.hpp"

using namespace sptnoise;

namespace {

MpsTensor random_tensor(int d, int D, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<CMatrix> a;
  for (int i = 0; i < d; ++i) {
    CMatrix m(D, D);
    for (int r = 0; r < D; ++r)
      for (int c = 0; c < D; ++c) m(r, c) = cplx(nd(rng), nd(rng));
    a.push_back(m);
  }
  return MpsTensor(a);
}

// T_X written out directly from its definition.
CMatrix oracle_transfer(const MpsTensor& a, const CMatrix& x) {
  int D = a.D();
  CMatrix t = CMatrix::Zero(D * D, D * D);
  for (int i = 0; i < a.d(); ++i)
    for (int j = 0; j < a.d(); ++j) {
      if (x(i, j) == cplx(0)) continue;
      t += x(i, j) * kron(a[j], a[i].conjugate());
    }
  return t;
}

Eigen::VectorXcd sorted_spectrum(const CMatrix& t) {
  Eigen::ComplexEigenSolver<CMatrix> es(t);
  Eigen::VectorXcd ev = es.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
  return ev;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

}  // namespace

TEST(Spin1, AngularMomentumAlgebra) {
  const cplx i(0, 1);
  EXPECT_LT(max_abs(commutator(spin1('x'), spin1('y')) - i * spin1('z')), 1e-14);
  EXPECT_LT(max_abs(commutator(spin1('y'), spin1('z')) - i * spin1('x')), 1e-14);
  CMatrix casimir = spin1('x') * spin1('x') + spin1('y') * spin1('y') + spin1('z') * spin1('z');
  EXPECT_LT(max_abs(casimir - 2.0 * CMatrix::Identity(3, 3)), 1e-14);
  EXPECT_THROW(spin1('q'), ValidationError);
}

TEST(Spin1, FlipsFormKleinGroup) {
  auto rep = spin1_rep();
  EXPECT_EQ(rep.dim(), 3);
  EXPECT_LT(max_abs(spin1_flip('x') * spin1_flip('y') - spin1_flip('z')), 1e-14);
  EXPECT_LT(max_abs(rep(rep.group().element({1, 1})) - spin1_flip('z')), 1e-14);
}

TEST(OnsiteRep, RejectsNonHomomorphism) {
  auto g = FiniteAbelianGroup::zn_squared(2);
  std::vector<CMatrix> m(4, CMatrix::Identity(2, 2));
  m[1] = CMatrix::Identity(2, 2) * cplx(0, 1);
  EXPECT_THROW(OnsiteRep(g, m), ValidationError);
  m[1] = CMatrix::Identity(2, 2) * 2.0;
  EXPECT_THROW(OnsiteRep(g, m), ValidationError);
}

TEST(Transfer, ZeroOperatorGivesZero) {
  auto s = aklt();
  EXPECT_EQ(max_abs(transfer_operator(s.tensor, CMatrix::Zero(3, 3))), 0.0);
  EXPECT_THROW(transfer_operator(s.tensor, CMatrix::Identity(2, 2)), ValidationError);
}

TEST(Transfer, AkltSpectrum) {
  auto s = aklt();
  auto ev = sorted_spectrum(transfer_operator(s.tensor, CMatrix::Identity(3, 3)));
  EXPECT_NEAR(std::abs(ev[0] - 1.0), 0.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(std::abs(ev[i] + 1.0 / 3.0), 0.0, 1e-12);
  auto flip = sorted_spectrum(transfer_operator(s.tensor, spin1_flip('z')));
  EXPECT_NEAR(std::abs(flip[0]), 1.0, 1e-12);
}

TEST(Transfer, MatchesDefinition) {
  auto a = random_tensor(3, 4, 7);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  CMatrix x(3, 3), r(4, 4);
  for (int i = 0; i < 9; ++i) x(i / 3, i % 3) = cplx(nd(rng), nd(rng));
  for (int i = 0; i < 16; ++i) r(i / 4, i % 4) = cplx(nd(rng), nd(rng));
  CMatrix t = oracle_transfer(a, x);
  EXPECT_LT(max_abs(transfer_operator(a, x) - t), 1e-12);
  TransferMap map(a, x);
  EXPECT_LT((vec(map.right(r)) - t * vec(r)).norm(), 1e-11);
  // Left action is dual under the pairing Tr(Λ R).
  CMatrix l = r.adjoint() * r + x(0, 1) * CMatrix::Identity(4, 4);
  EXPECT_NEAR(std::abs((map.left(l) * r).trace() - (l * map.right(r)).trace()), 0.0, 1e-10);
}

TEST(Transfer, LeadingEigenpairIdentityMatrix) {
  auto e = leading_eigs(CMatrix::Identity(4, 4));
  EXPECT_NEAR(std::abs(e.value - 1.0), 0.0, 1e-14);
  EXPECT_TRUE(e.degenerate);
}

TEST(Transfer, AkltFixedPoint) {
  auto s = aklt();
  auto e = leading_transfer_eig(s.tensor, CMatrix::Identity(3, 3), true);
  EXPECT_NEAR(std::abs(e.value - 1.0), 0.0, 1e-12);
  EXPECT_FALSE(e.degenerate);
  EXPECT_NEAR(e.second_modulus, 1.0 / 3.0, 1e-12);
  CMatrix r = e.right / e.right.trace();
  EXPECT_LT(max_abs(r - 0.5 * CMatrix::Identity(2, 2)), 1e-12);
}

TEST(Transfer, IterativeRouteAgreesWithDense) {
  auto a = canonicalize(random_tensor(3, 12, 3));
  CMatrix x = spin1_flip('z') * 0.5 + CMatrix::Identity(3, 3) * 0.3;
  auto ev = sorted_spectrum(oracle_transfer(a, x));
  auto e = leading_transfer_eig(a, x, true);
  EXPECT_NEAR(std::abs(e.value - ev[0]), 0.0, 1e-10);
  EXPECT_NEAR(e.second_modulus, std::abs(ev[1]), 1e-8);
  TransferMap map(a, x);
  EXPECT_LT(max_abs(map.right(e.right) - e.value * e.right), 1e-10);
  EXPECT_LT(max_abs(map.left(e.left) - e.value * e.left), 1e-10);
  EXPECT_NEAR(std::abs((e.left * e.right).trace() - 1.0), 0.0, 1e-10);
}

TEST(Injectivity, Examples) {
  EXPECT_TRUE(is_injective(aklt().tensor));
  CMatrix p0 = CMatrix::Zero(2, 2), p1 = CMatrix::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  EXPECT_FALSE(is_injective(MpsTensor({p0, p1})));
  EXPECT_THROW(canonicalize(MpsTensor({p0, p1})), NumericalError);
}

TEST(Canonical, AkltIsFixed) {
  auto s = aklt();
  auto c = canonicalize(s.tensor);
  for (int i = 0; i < 3; ++i) EXPECT_LT(max_abs(c[i] - s.tensor[i]), 1e-12);
  EXPECT_LT(left_canonical_defect(c), 1e-12);
}

TEST(Canonical, RescalesScaledAklt) {
  auto s = aklt();
  std::vector<CMatrix> m;
  for (const auto& x : s.tensor.matrices()) m.push_back(2.0 * x);
  auto c = canonicalize(MpsTensor(m));
  auto e = leading_transfer_eig(c, CMatrix::Identity(3, 3));
  EXPECT_NEAR(std::abs(e.value - 1.0), 0.0, 1e-12);
  for (int i = 0; i < 3; ++i) EXPECT_LT(max_abs(c[i] - s.tensor[i]), 1e-12);
}

TEST(Canonical, RandomTensorsSatisfyFixedPointConditions) {
  for (unsigned seed = 0; seed < 6; ++seed) {
    auto c = canonicalize(random_tensor(2 + seed % 3, 3 + seed, seed));
    EXPECT_LT(left_canonical_defect(c), 1e-10);
    auto e = leading_transfer_eig(c, CMatrix::Identity(c.d(), c.d()));
    EXPECT_NEAR(std::abs(e.value - 1.0), 0.0, 1e-10);
    CMatrix rho = right_fixed_point(c);
    EXPECT_NEAR(std::abs(rho.trace() - 1.0), 0.0, 1e-10);
    TransferMap map(c, CMatrix::Identity(c.d(), c.d()));
    EXPECT_LT(max_abs(map.right(rho) - rho), 1e-10);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Canonical, GaugeTransformDoesNotChangeFixedPointSpectrum) {
  auto a = canonicalize(random_tensor(3, 5, 21));
  CMatrix g = CMatrix::Identity(5, 5);
  g(0, 1) = 0.4;
  g(3, 2) = cplx(0, -0.7);
  auto b = canonicalize(gauge_transform(a, g));
  auto ea = sorted_spectrum(oracle_transfer(a, CMatrix::Identity(3, 3)));
  auto eb = sorted_spectrum(oracle_transfer(b, CMatrix::Identity(3, 3)));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(ea[i]), std::abs(eb[i]), 1e-9);
}

TEST(VirtualRep, AkltIsPauli) {
  auto s = aklt();
  auto v = extract_virtual_rep(s);
  const auto& g = s.rep.group();
  EXPECT_LT(v.max_residual, 1e-10);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double expect = (a != 0 && b != 0 && a != b) ? -1.0 : 1.0;
      EXPECT_NEAR(std::abs(v.commutator_table[a][b] - expect), 0.0, 1e-10);
    }
  // V_g is a Pauli matrix up to phase: squares to a scalar, traceless.
  for (int a = 1; a < 4; ++a) {
    CMatrix sq = v.v[a] * v.v[a];
    EXPECT_LT(max_abs(sq - sq(0, 0) * CMatrix::Identity(2, 2)), 1e-10);
    EXPECT_NEAR(std::abs(v.v[a].trace()), 0.0, 1e-10);
  }
  EXPECT_EQ(match_cocycle(g, v.commutator_table), 1);
}

TEST(VirtualRep, ProductStateIsTrivial) {
  CVector up = CVector::Zero(3);
  up(1) = 1.0;  // S_z = 0, invariant under all flips up to sign
  auto s = product_state(up, spin1_rep());
  auto v = extract_virtual_rep(s);
  for (const auto& row : v.commutator_table)
    for (cplx c : row) EXPECT_NEAR(std::abs(c - 1.0), 0.0, 1e-12);
  EXPECT_EQ(match_cocycle(s.rep.group(), v.commutator_table), 0);
}

TEST(VirtualRep, NonSymmetricStateIsRejected) {
  CVector v = CVector::Zero(3);
  v(0) = 1.0;
  v(1) = 1.0;
  v.normalize();
  EXPECT_THROW(extract_virtual_rep(product_state(v, spin1_rep())), NumericalError);
}

TEST(Generator, PauliSignsForZ2) {
  auto g = FiniteAbelianGroup::zn_squared(2);
  auto s = random_symmetric_mps(g, 1, 2, 4, 0);
  auto v = extract_virtual_rep(s);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double expect = (a != 0 && b != 0 && a != b) ? -1.0 : 1.0;
      EXPECT_NEAR(std::abs(v.commutator_table[a][b] - expect), 0.0, 1e-8);
    }
}

TEST(Generator, CommutatorTableMatchesCocycle) {
  for (int n = 2; n <= 4; ++n) {
    auto g = FiniteAbelianGroup::zn_squared(n);
    for (int k = 0; k < n; ++k) {
      Cocycle w(g, k);
      int D = n;  // a multiple of every possible complexity n/gcd(k,n)
      auto s = random_symmetric_mps(g, k, D, n * n, 100 + n * 10 + k);
      EXPECT_TRUE(is_injective(s.tensor));
      EXPECT_LT(left_canonical_defect(s.tensor), 1e-10);
      auto v = extract_virtual_rep(s);
      for (const auto& a : g.elements())
        for (const auto& b : g.elements())
          ASSERT_NEAR(std::abs(v.commutator_table[g.index_of(a)][g.index_of(b)] - commutator_phase(w, a, b)), 0.0,
                      1e-8)
              << "n=" << n << " k=" << k;
      EXPECT_EQ(match_cocycle(g, v.commutator_table), k);
    }
  }
}

TEST(Generator, IsDeterministicPerSeed) {
  auto g = FiniteAbelianGroup::zn_squared(2);
  auto a = random_symmetric_mps(g, 1, 4, 4, 42);
  auto b = random_symmetric_mps(g, 1, 4, 4, 42);
  auto c = random_symmetric_mps(g, 1, 4, 4, 43);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(a.tensor[i], b.tensor[i]);
  EXPECT_GT(max_abs(a.tensor[0] - c.tensor[0]), 1e-6);
}

TEST(Generator, RejectsIncompatibleBondDimension) {
  auto g = FiniteAbelianGroup::zn_squared(4);
  EXPECT_THROW(random_symmetric_mps(g, 1, 6, 16, 0), ValidationError);
  EXPECT_THROW(random_symmetric_mps(g, 1, 4, 9, 0), ValidationError);
  EXPECT_THROW(prescribed_virtual_rep(g, 2, 3), ValidationError);
  EXPECT_THROW(random_symmetric_mps(FiniteAbelianGroup({2, 4}), 1, 4, 8, 0), ValidationError);
}

TEST(Generator, PrescribedRepIsProjective) {
  auto g = FiniteAbelianGroup::zn_squared(4);
  for (int k = 0; k < 4; ++k) {
    auto v = prescribed_virtual_rep(g, k, 8);
    Cocycle w(g, k);
    for (const auto& a : g.elements())
      for (const auto& b : g.elements()) {
        const CMatrix& va = v[g.index_of(a)];
        const CMatrix& vb = v[g.index_of(b)];
        CMatrix lhs = va.adjoint() * vb * va * vb.adjoint();
        EXPECT_LT(max_abs(lhs - commutator_phase(w, a, b) * CMatrix::Identity(8, 8)), 1e-12);
      }
  }
}

TEST(Trajectory, IdentityKrausLeavesStateUnchanged) {
  auto s = aklt();
  auto t = apply_kraus_trajectory(s, CMatrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) EXPECT_LT(max_abs(t.tensor[i] - s.tensor[i]), 1e-12);
}

TEST(Trajectory, SymmetricKrausKeepsHaldaneTable) {
  auto s = aklt();
  const std::vector<CMatrix> kraus = {CMatrix::Identity(3, 3), spin1_flip('x'), spin1_flip('y'), spin1_flip('z')};
  for (const auto& k : kraus) {
    auto v = extract_virtual_rep(apply_kraus_trajectory(s, k));
    EXPECT_EQ(match_cocycle(s.rep.group(), v.commutator_table), 1);
  }
}

TEST(Trajectory, NonInjectiveResultIsRefused) {
  CMatrix proj = CMatrix::Zero(3, 3);
  proj(1, 1) = 1.0;  // projects onto |0⟩: A^0 alone is diagonal
  EXPECT_THROW(apply_kraus_trajectory(aklt(), proj), NumericalError);
}

TEST(TwistedSector, AkltHaldaneCharges) {
  auto s = aklt();
  const auto& g = s.rep.group();
  for (const auto& h : g.elements())
    for (const auto& x : g.elements()) {
      double expect = (!h.is_identity() && !x.is_identity() && !(h == x)) ? -1.0 : 1.0;
      EXPECT_NEAR(std::abs(twisted_sector_charge(s, h, x, 8) - expect), 0.0, 1e-8);
    }
}

TEST(TwistedSector, TrivialClassHasUnitCharges) {
  auto g = FiniteAbelianGroup::zn_squared(2);
  auto s = random_symmetric_mps(g, 0, 2, 4, 5);
  for (const auto& h : g.elements())
    for (const auto& x : g.elements()) EXPECT_NEAR(std::abs(twisted_sector_charge(s, h, x, 4) - 1.0), 0.0, 1e-8);
}

TEST(TwistedSector, RejectsShortChains) {
  auto s = aklt();
  EXPECT_THROW(twisted_sector_charge(s, s.rep.group().identity(), s.rep.group().identity(), 1), ValidationError);
}
