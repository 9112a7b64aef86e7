#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "amrt/errors.hpp"
#include "amrt/fields.hpp"

namespace amrt {
namespace {

FieldPair random_pair(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  FieldPair fp = FieldPair::zeros(n, 0.75);
  for (RealGrid* a : fp.arrays())
    for (double& v : *a) v = nd(rng);
  return fp;
}

FieldPair single(double f1, double f2, double F11, double F12, double F22) {
  FieldPair fp = FieldPair::zeros(1);
  fp.f1[0] = f1;
  fp.f2[0] = f2;
  fp.F11[0] = F11;
  fp.F12[0] = F12;
  fp.F22[0] = F22;
  return fp;
}

TEST(Components, DefinitionExamples) {
  auto a = components_from_fields(single(2, 0, 0, 0, 0));
  EXPECT_DOUBLE_EQ(a.c0[0], 0.0);
  EXPECT_EQ(a.c1[0], cplx(1.0, 0.0));
  EXPECT_EQ(a.c2[0], cplx(0.0, 0.0));
  auto b = components_from_fields(single(0, 0, 1, 0, 1));
  EXPECT_DOUBLE_EQ(b.c0[0], 1.0);
  EXPECT_EQ(b.c1[0], cplx(0.0, 0.0));
  EXPECT_EQ(b.c2[0], cplx(0.0, 0.0));
  auto c = components_from_fields(single(0, 0, 1, 2, -1));
  EXPECT_DOUBLE_EQ(c.c0[0], 0.0);
  EXPECT_EQ(c.c2[0], cplx(0.5, 1.0));
}

TEST(Components, RecoveryExamples) {
  ComplexComponents cc{{0.0}, {cplx(1.0, 0.0)}, {cplx(0.0, 0.0)}};
  FieldPair fp = fields_from_components(cc);
  EXPECT_DOUBLE_EQ(fp.f1[0], 2.0);
  EXPECT_DOUBLE_EQ(fp.f2[0], 0.0);
  EXPECT_DOUBLE_EQ(fp.F11[0] + std::abs(fp.F12[0]) + fp.F22[0], 0.0);
  cc = {{1.0}, {cplx{}}, {cplx{}}};
  fp = fields_from_components(cc);
  EXPECT_DOUBLE_EQ(fp.F11[0], 1.0);
  EXPECT_DOUBLE_EQ(fp.F22[0], 1.0);
  EXPECT_DOUBLE_EQ(fp.F12[0], 0.0);
}

TEST(Components, TwoSidedInverse) {
  const FieldPair fp = random_pair(500, 3);
  const FieldPair back = fields_from_components(components_from_fields(fp));
  const auto x = fp.arrays();
  const auto y = back.arrays();
  for (int c = 0; c < 5; ++c)
    for (std::size_t i = 0; i < fp.size(); ++i) EXPECT_NEAR((*x[c])[i], (*y[c])[i], 1e-14);
  const ComplexComponents cc = components_from_fields(fp);
  const ComplexComponents cc2 = components_from_fields(fields_from_components(cc));
  for (std::size_t i = 0; i < fp.size(); ++i) {
    EXPECT_NEAR(cc.c0[i], cc2.c0[i], 1e-14);
    EXPECT_NEAR(std::abs(cc.c1[i] - cc2.c1[i]), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(cc.c2[i] - cc2.c2[i]), 0.0, 1e-14);
  }
}

TEST(Components, Linearity) {
  const FieldPair fp = random_pair(200, 4), gp = random_pair(200, 5);
  const double a = 0.5, b = -2.0;
  const auto lhs = components_from_fields(combine(a, fp, b, gp));
  const auto cf = components_from_fields(fp), cg = components_from_fields(gp);
  for (std::size_t i = 0; i < fp.size(); ++i) {
    EXPECT_NEAR(lhs.c0[i], a * cf.c0[i] + b * cg.c0[i], 1e-14);
    EXPECT_NEAR(std::abs(lhs.c1[i] - (a * cf.c1[i] + b * cg.c1[i])), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(lhs.c2[i] - (a * cf.c2[i] + b * cg.c2[i])), 0.0, 1e-14);
  }
}

TEST(DirectionPairing, Examples) {
  FieldPair id = single(0, 0, 1, 0, 1);
  for (double phi : {0.0, 0.3, 1.9, 4.0}) EXPECT_NEAR(direction_pairing(id, phi)[0], 1.0, 1e-15);
  EXPECT_NEAR(direction_pairing(single(1, 0, 0, 0, 0), kPi / 2.0)[0], 0.0, 1e-15);
}

TEST(DirectionPairing, RealAndTrigonometricFormsAgree) {
  const FieldPair fp = random_pair(100, 9);
  const ComplexComponents cc = components_from_fields(fp);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (std::size_t i = 0; i < fp.size(); ++i) {
    const double phi = angle(rng);
    const double real_form = direction_pairing(fp, phi)[i];
    // independent trigonometric expansion written out with cos and sin
    const double trig = cc.c0[i] + 2.0 * (cc.c2[i].real() * std::cos(2 * phi) + cc.c2[i].imag() * std::sin(2 * phi)) +
                        2.0 * (cc.c1[i].real() * std::cos(phi) + cc.c1[i].imag() * std::sin(phi));
    EXPECT_NEAR(real_form, trig, 1e-12);
    EXPECT_NEAR(pairing_from_components(cc.c0[i], cc.c1[i], cc.c2[i], phi), trig, 1e-12);
  }
}

TEST(Phantom, EmptySpecGivesZeroFields) {
  const DomainGrid g(Domain::disk(), 32);
  const FieldPair fp = make_phantom(PhantomSpec{}, g);
  for (const RealGrid* a : fp.arrays())
    for (double v : *a) EXPECT_EQ(v, 0.0);
}

TEST(Phantom, UnitBumpPeakAtOrigin) {
  PhantomSpec spec;
  spec.bumps[static_cast<int>(Component::F11)] = {{1.0, {0.0, 0.0}, 0.2}};
  const DomainGrid g(Domain::disk(), 32);
  const FieldPair fp = make_phantom(spec, g);
  EXPECT_NEAR(fp.F11[g.index(16, 16)], 1.0, 1e-15);
}

TEST(Phantom, SeededSpecIsReproducible) {
  const DomainGrid g(Domain::disk(), 32);
  const FieldPair a = make_phantom(random_phantom_spec(42), g);
  const FieldPair b = make_phantom(random_phantom_spec(42), g);
  const auto x = a.arrays(), y = b.arrays();
  for (int c = 0; c < 5; ++c) EXPECT_EQ(*x[c], *y[c]);
}

TEST(Phantom, VanishesOutsideSupport) {
  const DomainGrid g(Domain::disk(), 64);
  const FieldPair fp = make_phantom(random_phantom_spec(7), g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.node(i).norm() < fp.support_radius) continue;
    for (const RealGrid* a : fp.arrays()) EXPECT_EQ((*a)[i], 0.0);
  }
}

TEST(Phantom, OutOfSupportBumpRejected) {
  PhantomSpec spec;
  spec.bumps[0] = {{1.0, {0.8, 0.0}, 0.2}};
  EXPECT_THROW(validate(spec, Domain::disk()), ConfigError);
  ScalarSpec s{0.75, {{1.0, {0.0, 0.9}, 0.2}}};
  EXPECT_THROW(validate(s, Domain::disk()), ConfigError);
  PhantomSpec wide;
  wide.support_radius = 1.2;
  EXPECT_THROW(validate(wide, Domain::disk()), ConfigError);
}

TEST(GradientField, ZeroPotentialGivesZeroField) {
  const DomainGrid g(Domain::disk(), 32);
  const FieldPair fp = make_gradient_field(ScalarSpec{}, g);
  for (const RealGrid* a : fp.arrays())
    for (double v : *a) EXPECT_EQ(v, 0.0);
}

TEST(GradientField, RadialPotentialGivesRadialField) {
  const DomainGrid g(Domain::disk(), 64);
  const ScalarSpec psi{0.75, {{1.0, {0.0, 0.0}, 0.25}}};
  const FieldPair fp = make_gradient_field(psi, g);
  EXPECT_NEAR(fp.f1[g.index(32, 32)], 0.0, 1e-14);
  EXPECT_NEAR(fp.f2[g.index(32, 32)], 0.0, 1e-14);
  // central differences keep the lattice symmetries of a radial potential exactly
  for (std::size_t i : g.inside_nodes()) {
    const std::size_t swapped = g.index(g.row(i), g.column(i));
    EXPECT_NEAR(fp.f1[i], fp.f2[swapped], 1e-14);
    const std::size_t mirrored = g.index(g.nodes_per_axis() - 1 - g.column(i), g.row(i));
    EXPECT_NEAR(fp.f1[i], -fp.f1[mirrored], 1e-14);
    EXPECT_NEAR(fp.f2[i], fp.f2[mirrored], 1e-14);
    EXPECT_EQ(fp.F11[i], 0.0);
  }
}

TEST(GradientField, LatticeDifferencesMatchAnalyticGradient) {
  const ScalarSpec psi = random_scalar_spec(3);
  const TensorSampler exact = gradient_sampler(psi);
  double prev = 0.0;
  for (int res : {32, 64, 128}) {
    const DomainGrid g(Domain::disk(), res);
    const FieldPair fp = make_gradient_field(psi, g);
    double err = 0.0;
    for (std::size_t i : g.inside_nodes()) {
      const TensorSample s = exact(g.node(i));
      err = std::max({err, std::abs(fp.f1[i] - s.f1), std::abs(fp.f2[i] - s.f2)});
    }
    if (prev > 0.0) EXPECT_GT(prev / err, 3.0);
    prev = err;
  }
}

}  // namespace
}  // namespace amrt
