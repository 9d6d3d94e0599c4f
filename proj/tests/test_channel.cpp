#include <gtest/gtest.h>

#include <cmath>

#include "sptnoise/channel.hpp"
#include "sptnoise/errors.hpp"
#include "support.hpp"

using namespace sptnoise;
using sptnoise::testing::random_density;
using sptnoise::testing::random_unitary;

namespace {

const CMatrix kI3 = CMatrix::Identity(3, 3);

OnsiteRep z4_regular() { return regular_rep(FiniteAbelianGroup::zn_squared(4)); }

// Sector of ρ ↦ U ρ U† labelled by α, as a projector in Liouville space.
double sector_norm(const Superoperator& s, const OnsiteRep& rep, const Character& a) {
  return max_abs(s.matrix() * sector_projector(rep, a));
}

}  // namespace

TEST(Validate, Examples) {
  EXPECT_EQ(validate(QuantumChannel::identity(3)).deviation, 0.0);
  EXPECT_TRUE(validate(dephasing(0.5)).pass);
  auto twice = validate(QuantumChannel(2, {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)}));
  EXPECT_FALSE(twice.pass);
  EXPECT_NEAR(twice.deviation, 1.0, 1e-15);
}

TEST(Channel, RejectsShapeMismatch) {
  EXPECT_THROW(QuantumChannel(3, {CMatrix::Identity(2, 2)}), ValidationError);
  EXPECT_THROW(QuantumChannel(3, {}), ValidationError);
}

TEST(Dual, UnitaryConjugation) {
  std::mt19937_64 rng(1);
  CMatrix u = random_unitary(3, rng);
  CMatrix x = sptnoise::testing::random_complex(3, 3, rng);
  EXPECT_LT(max_abs(QuantumChannel::unitary(u).apply_dual(x) - u.adjoint() * x * u), 1e-13);
  EXPECT_LT(max_abs(dual(QuantumChannel::unitary(u)).apply(x) - u.adjoint() * x * u), 1e-13);
}

TEST(Dual, DepolarisingClosedForm) {
  std::mt19937_64 rng(2);
  for (int d : {2, 3, 4})
    for (double lam : {0.1, 0.5, 1.0}) {
      CMatrix x = sptnoise::testing::random_complex(d, d, rng);
      CMatrix expect = (1 - lam) * x + (lam / d) * x.trace() * CMatrix::Identity(d, d);
      EXPECT_LT(max_abs(depolarising(d, lam).apply_dual(x) - expect), 1e-12);
      EXPECT_LT(max_abs(liouville(depolarising(d, lam)).apply_dual(x) - expect), 1e-12);
    }
}

TEST(Dual, DephasingScalesSz) {
  for (double lam : {0.0, 0.3, 0.5, 1.0})
    EXPECT_LT(max_abs(dephasing(lam).apply_dual(spin1('z')) - (1 - lam) * spin1('z')), 1e-14);
}

TEST(Liouville, MatchesKrausAction) {
  std::mt19937_64 rng(3);
  auto ch = depolarising(3, 0.37);
  CMatrix rho = random_density(3, rng);
  EXPECT_LT(max_abs(liouville(ch).apply(rho) - ch.apply(rho)), 1e-14);
}

TEST(Algebra, ComposeWithIdentity) {
  auto ch = dephasing(0.4);
  auto a = liouville(compose(QuantumChannel::identity(3), ch)).matrix();
  EXPECT_LT(max_abs(a - liouville(ch).matrix()), 1e-14);
  auto b = compose(Superoperator::identity(3), liouville(ch)).matrix();
  EXPECT_LT(max_abs(b - liouville(ch).matrix()), 1e-14);
}

TEST(Algebra, ComposeOrder) {
  std::mt19937_64 rng(4);
  CMatrix u = random_unitary(3, rng), v = random_unitary(3, rng);
  CMatrix rho = random_density(3, rng);
  // compose(a, b) applies b first.
  auto c = compose(QuantumChannel::unitary(u), QuantumChannel::unitary(v));
  EXPECT_LT(max_abs(c.apply(rho) - u * v * rho * v.adjoint() * u.adjoint()), 1e-13);
  auto s = compose(liouville(QuantumChannel::unitary(u)), liouville(QuantumChannel::unitary(v)));
  EXPECT_LT(max_abs(s.apply(rho) - u * v * rho * v.adjoint() * u.adjoint()), 1e-13);
}

TEST(Algebra, ConvexCombinationOfEqualUnitaries) {
  std::mt19937_64 rng(5);
  CMatrix u = random_unitary(3, rng);
  auto ch = QuantumChannel::unitary(u);
  auto mix = convex_combine({0.5, 0.5}, {ch, ch});
  EXPECT_LT(max_abs(liouville(mix).matrix() - liouville(ch).matrix()), 1e-13);
  auto smix = convex_combine({0.5, 0.5}, {liouville(ch), liouville(ch)});
  EXPECT_LT(max_abs(smix.matrix() - liouville(ch).matrix()), 1e-13);
  EXPECT_THROW(convex_combine({0.5}, {ch, ch}), ValidationError);
  EXPECT_THROW(convex_combine({0.7, 0.7}, {ch, ch}), ValidationError);
}

TEST(Algebra, DephasingComposesMultiplicatively) {
  auto c = compose(dephasing(0.2), dephasing(0.7));
  EXPECT_LT(max_abs(c.apply_dual(spin1('z')) - 0.8 * 0.3 * spin1('z')), 1e-14);
}

TEST(Algebra, TensorActsFactorwise) {
  std::mt19937_64 rng(6);
  auto a = depolarising(2, 0.3);
  auto b = dephasing(0.6);
  CMatrix ra = random_density(2, rng), rb = random_density(3, rng);
  CMatrix expect = kron(a.apply(ra), b.apply(rb));
  EXPECT_LT(max_abs(tensor(a, b).apply(kron(ra, rb)) - expect), 1e-13);
  EXPECT_LT(max_abs(tensor(liouville(a), liouville(b)).apply(kron(ra, rb)) - expect), 1e-13);
}

TEST(Choi, CompletePositivityAndKrausRecovery) {
  auto s = liouville(depolarising(3, 0.8));
  EXPECT_TRUE(is_completely_positive(s));
  auto k = kraus_from_superop(s);
  EXPECT_LT(max_abs(liouville(k).matrix() - s.matrix()), 1e-12);
  EXPECT_TRUE(validate(k).pass);

  // Transposition is positive but not completely positive.
  CMatrix t = CMatrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) t(b * 2 + a, a * 2 + b) = 1.0;
  EXPECT_FALSE(is_completely_positive(Superoperator(t)));
  EXPECT_THROW(kraus_from_superop(Superoperator(t)), NumericalError);
}

TEST(Choi, MatrixOfIdentityIsMaximallyEntangled) {
  CMatrix j = choi_matrix(Superoperator::identity(2));
  CVector phi = CVector::Zero(4);
  phi(0) = phi(3) = 1.0;
  EXPECT_LT(max_abs(j - phi * phi.adjoint()), 1e-15);
}

TEST(Symmetry, WeakExamples) {
  auto rep = spin1_rep();
  EXPECT_TRUE(is_weakly_symmetric(liouville(depolarising(3, 0.5)), rep));
  EXPECT_TRUE(is_weakly_symmetric(liouville(dephasing(0.5)), rep));
  EXPECT_TRUE(is_weakly_symmetric(liouville(QuantumChannel::unitary(spin1_flip('x'))), rep));
  std::mt19937_64 rng(7);
  EXPECT_FALSE(is_weakly_symmetric(liouville(QuantumChannel::unitary(random_unitary(3, rng))), rep));
}

TEST(Symmetry, StrongExamples) {
  auto rep = spin1_rep();
  auto theta = is_strongly_symmetric(liouville(dephasing(0.5)), rep);
  ASSERT_TRUE(theta.has_value());
  for (double t : *theta) EXPECT_NEAR(std::remainder(t, 2 * M_PI), 0.0, 1e-10);
  EXPECT_FALSE(is_strongly_symmetric(liouville(depolarising(3, 0.5)), rep).has_value());
  for (int i = 0; i < 4; ++i) {
    auto th = is_strongly_symmetric(liouville(QuantumChannel::unitary(rep.at(i))), rep);
    ASSERT_TRUE(th.has_value());
    for (double t : *th) EXPECT_NEAR(std::remainder(t, 2 * M_PI), 0.0, 1e-10);
  }
}

TEST(Symmetry, StrongImpliesWeakAndIdentityTwist) {
  auto rep = spin1_rep();
  for (double lam : {0.1, 0.5, 1.0}) {
    auto s = liouville(dephasing(lam));
    auto r = classify(s, rep);
    EXPECT_TRUE(r.weak);
    ASSERT_TRUE(r.strong.has_value());
    ASSERT_TRUE(r.twist.has_value());
    EXPECT_EQ(r.twist->sigma, Endomorphism::identity(rep.group()));
  }
}

TEST(Symmetry, PhaseIsACharacter) {
  // K|b⟩ = |b + β⟩ on the regular rep gives K†U_gK = χ_β(g) U_g.
  auto rep = z4_regular();
  const auto& g = rep.group();
  auto beta = g.character({1, 3});
  CMatrix k = CMatrix::Zero(16, 16);
  for (int b = 0; b < 16; ++b) k(g.index_of(g.character_at(b) * beta), b) = 1.0;
  auto th = is_strongly_symmetric(liouville(QuantumChannel::unitary(k)), rep);
  ASSERT_TRUE(th.has_value());
  for (const auto& a : g.elements()) {
    EXPECT_NEAR(std::abs(std::polar(1.0, (*th)[g.index_of(a)]) - character_value(beta, a)), 0.0, 1e-10);
    for (const auto& c : g.elements()) {
      double lhs = (*th)[g.index_of(a)] + (*th)[g.index_of(c)];
      EXPECT_NEAR(std::remainder(lhs - (*th)[g.index_of(a + c)], 2 * M_PI), 0.0, 1e-10);
    }
  }
}

TEST(Twist, ConstantMapForZeroSs) {
  auto rep = z4_regular();
  auto ch = k_ss(0);
  auto r = detect_twist(liouville(ch), rep);
  ASSERT_TRUE(r.twist.has_value()) << r.note;
  EXPECT_EQ(r.twist->sigma.det(), 0);
  for (const auto& g : rep.group().elements()) {
    EXPECT_TRUE(r.twist->sigma.apply(g).is_identity());
    CMatrix out = ch.apply_dual(rep(g));
    EXPECT_LT(max_abs(out - out(0, 0) * CMatrix::Identity(16, 16)), 1e-12);
  }
}

TEST(Twist, DetectedMapReproducesDual) {
  auto rep = z4_regular();
  const auto& g = rep.group();
  for (int k = 0; k < 4; ++k) {
    auto ch = k_ss(k);
    auto r = detect_twist(liouville(ch), rep);
    ASSERT_TRUE(r.twist.has_value()) << "k=" << k << " " << r.note;
    EXPECT_EQ(r.twist->sigma.det(), k);
    for (const auto& x : g.elements()) {
      cplx phase = std::polar(1.0, r.twist->theta[g.index_of(x)]);
      EXPECT_LT(max_abs(ch.apply_dual(rep(x)) - phase * rep(r.twist->sigma.apply(x))), 1e-12);
    }
  }
}

TEST(Twist, RandomTwistedChannelsAreDetected) {
  auto rep = z4_regular();
  const auto& g = rep.group();
  for (auto [a, b, c, d] : std::vector<std::array<int, 4>>{{1, 0, 0, 2}, {2, 1, 1, 2}, {3, 1, 0, 1}, {0, 0, 0, 0}}) {
    auto sigma = Endomorphism::from_entries(g, a, b, c, d);
    auto ch = sptnoise::testing::random_twisted_channel(sigma, 9);
    ASSERT_TRUE(validate(ch).pass);
    auto r = detect_twist(liouville(ch), rep);
    ASSERT_TRUE(r.twist.has_value()) << r.note;
    EXPECT_EQ(r.twist->sigma, sigma);
  }
}

TEST(Twist, NoneForDepolarising) {
  auto r = detect_twist(liouville(depolarising(3, 0.5)), spin1_rep());
  EXPECT_FALSE(r.twist.has_value());
  EXPECT_FALSE(r.ambiguous);
}

TEST(Genericness, Examples) {
  auto rep = spin1_rep();
  auto id = Endomorphism::identity(rep.group());
  auto all = genericness(Superoperator::identity(3), rep, id);
  EXPECT_EQ(all.present.size(), 4u);
  EXPECT_TRUE(all.generic);
  EXPECT_TRUE(genericness(liouville(dephasing(0.5)), rep, id).generic);
  auto full = genericness(liouville(dephasing(1.0)), rep, id);
  EXPECT_FALSE(full.generic);
  ASSERT_EQ(full.present.size(), 1u);
  EXPECT_TRUE(full.present[0].is_trivial());
}

TEST(Genericness, DephasingBlockNormsScaleByOneMinusLambda) {
  auto rep = spin1_rep();
  for (double lam : {0.2, 0.5}) {
    auto s = liouville(dephasing(lam));
    for (const auto& a : rep.group().characters()) {
      double expect = a.is_trivial() ? 1.0 : 1.0 - lam;
      EXPECT_NEAR(sector_norm(s, rep, a) / max_abs(sector_projector(rep, a)), expect, 1e-12);
    }
  }
}

TEST(Genericness, TwistedChannelsAnnihilateKernelSectors) {
  // In the regular rep completeness forces a twisted channel to kill every
  // operator sector in the kernel of σ*.
  auto rep = z4_regular();
  const auto& g = rep.group();
  auto sigma = Endomorphism::from_entries(g, 1, 0, 0, 2);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto s = liouville(sptnoise::testing::random_twisted_channel(sigma, seed));
    for (const auto& a : g.characters()) {
      bool in_kernel = sigma.pullback(a).is_trivial();
      if (in_kernel && !a.is_trivial())
        EXPECT_LT(sector_norm(s, rep, a), 1e-12);
      else
        EXPECT_GT(sector_norm(s, rep, a), 1e-3);
    }
  }
}

TEST(Dilation, UnitaryChannelIsItself) {
  std::mt19937_64 rng(8);
  CMatrix u = random_unitary(3, rng);
  auto dil = dilate(QuantumChannel::unitary(u));
  EXPECT_EQ(dil.ancilla, 1);
  EXPECT_LT(max_abs(dil.w - u), 1e-14);
}

TEST(Dilation, DephasingIsSymmetric) {
  auto ch = dephasing(0.5);
  auto dil = dilate(ch);
  ASSERT_EQ(dil.w.rows(), 12);
  EXPECT_TRUE(is_unitary(dil.w, 1e-10));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      CMatrix e = CMatrix::Zero(3, 3);
      e(a, b) = 1.0;
      EXPECT_LT(max_abs(dilation_apply(dil, e) - ch.apply(e)), 1e-10);
    }
  EXPECT_LT(dilation_commutation_defect(dil, spin1_rep()), 1e-8);
}

TEST(Dilation, DepolarisingIsNotSymmetric) {
  auto ch = depolarising(3, 0.5);
  auto dil = dilate(ch);
  EXPECT_TRUE(is_unitary(dil.w, 1e-10));
  std::mt19937_64 rng(10);
  CMatrix rho = random_density(3, rng);
  EXPECT_LT(max_abs(dilation_apply(dil, rho) - ch.apply(rho)), 1e-10);
  EXPECT_GE(dilation_commutation_defect(dil, spin1_rep()), 1e-2);
}

TEST(Dilation, SsZooChannelsDilateSymmetrically) {
  auto rep = z4_regular();
  auto dil = dilate(k_ss(1, 0.3));
  EXPECT_TRUE(is_unitary(dil.w, 1e-10));
  EXPECT_LT(dilation_commutation_defect(dil, rep), 1e-8);
}

TEST(Dilation, RejectsIncompleteKraus) {
  EXPECT_THROW(dilate(QuantumChannel(2, {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)})), ValidationError);
}

TEST(Lindblad, TrivialGeneratorIsIdentity) {
  Lindbladian lb{3, CMatrix::Zero(3, 3), {}};
  for (double t : {0.0, 1.0, 50.0}) EXPECT_LT(max_abs(evolve(lb, t).matrix() - CMatrix::Identity(9, 9)), 1e-14);
}

TEST(Lindblad, CoserClosedForm) {
  auto lb = coser();
  CVector phi = CVector::Zero(3);
  phi(1) = 1.0;
  // T_φ = vec(|φ⟩⟨φ|) vec(1)ᵀ.
  CMatrix tphi = vec(phi * phi.adjoint()) * vec(CMatrix::Identity(3, 3)).transpose();
  for (double t : {0.1, 1.0, 30.0}) {
    CMatrix expect = tphi + std::exp(-t) * (CMatrix::Identity(9, 9) - tphi);
    EXPECT_LT(max_abs(evolve(lb, t).matrix() - expect), 1e-12);
  }
  EXPECT_LT(max_abs(evolve(lb, 30.0).matrix() - tphi), 1e-12);
}

TEST(Lindblad, QubitDephasingRate) {
  const double gamma = 0.35;
  CMatrix sz = CMatrix::Zero(2, 2);
  sz(0, 0) = 1.0;
  sz(1, 1) = -1.0;
  Lindbladian lb{2, CMatrix::Zero(2, 2), {std::sqrt(gamma) * sz}};
  CMatrix rho = CMatrix::Constant(2, 2, 0.5);
  for (double t : {0.5, 2.0}) {
    CMatrix out = evolve(lb, t).apply(rho);
    EXPECT_NEAR(std::abs(out(0, 1)), 0.5 * std::exp(-2 * gamma * t), 1e-12);
    EXPECT_NEAR(out(0, 0).real(), 0.5, 1e-12);
  }
}

TEST(Lindblad, RejectsNonHermitianHamiltonian) {
  CMatrix h = CMatrix::Zero(3, 3);
  h(0, 1) = 1.0;
  EXPECT_THROW(validate_lindbladian(Lindbladian{3, h, {}}), ValidationError);
  EXPECT_THROW(evolve(Lindbladian{3, CMatrix::Zero(3, 3), {}}, -1.0), ValidationError);
}

TEST(Lindblad, SymmetryExamples) {
  auto rep = spin1_rep();
  auto c = lindblad_symmetry(coser(), rep);
  EXPECT_TRUE(c.weak);
  EXPECT_FALSE(c.strong);
  auto flip = lindblad_symmetry(Lindbladian{3, CMatrix::Zero(3, 3), {spin1_flip('x')}}, rep);
  EXPECT_TRUE(flip.weak);
  EXPECT_TRUE(flip.strong);
  CMatrix sz2 = spin1('z') * spin1('z');
  auto ham = lindblad_symmetry(Lindbladian{3, sz2, {}}, rep);
  EXPECT_TRUE(ham.strong);
  auto broken = lindblad_symmetry(Lindbladian{3, spin1('x'), {}}, rep);
  EXPECT_FALSE(broken.weak);
  EXPECT_FALSE(broken.strong);
}

TEST(Zoo, FullyDephasingAndDepolarising) {
  std::mt19937_64 rng(12);
  CMatrix rho = random_density(3, rng);
  auto full = dephasing(1.0);
  EXPECT_LT(max_abs(full.apply_dual(spin1('x'))), 1e-14);
  EXPECT_LT(max_abs(depolarising(3, 1.0).apply(rho) - kI3 / 3.0), 1e-14);
}

TEST(Zoo, KssThreeStructure) {
  auto ch = k_ss(3);
  ASSERT_EQ(ch.kraus().size(), 2u);
  for (const auto& k : ch.kraus()) {
    ASSERT_EQ(k.rows(), 16);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        CMatrix blk = k.block(4 * a, 4 * b, 4, 4);
        if (a == b)
          EXPECT_LT(max_abs(blk - k.block(0, 0, 4, 4)), 1e-15);
        else
          EXPECT_EQ(max_abs(blk), 0.0);
      }
  }
  for (int j = 0; j < 4; ++j) EXPECT_TRUE(validate(k_ss(j)).pass) << j;
}

TEST(Zoo, NamedConstruction) {
  auto deph = std::get<QuantumChannel>(zoo("dephasing", {0.5}));
  EXPECT_LT(max_abs(liouville(deph).matrix() - liouville(dephasing(0.5)).matrix()), 1e-15);
  EXPECT_TRUE(std::holds_alternative<Lindbladian>(zoo("coser", {})));
  EXPECT_EQ(std::get<QuantumChannel>(zoo("k_ss", {2})).dim(), 16);
  EXPECT_THROW(zoo("nonsense", {}), ValidationError);
  EXPECT_THROW(zoo("dephasing", {}), ValidationError);
  EXPECT_THROW(zoo("dephasing", {1.5}), ValidationError);
  EXPECT_THROW(zoo("k_ss", {1.5}), ValidationError);
  EXPECT_THROW(zoo("k_ss", {7}), ValidationError);
}

TEST(Zoo, WeaklySymmetricDepolarising16) {
  auto rep = z4_regular();
  auto s = liouville(ws_depolarising16(0.5));
  EXPECT_TRUE(is_weakly_symmetric(s, rep));
  EXPECT_FALSE(is_strongly_symmetric(s, rep).has_value());
}
