#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "amrt/errors.hpp"
#include "amrt/pipeline.hpp"

namespace amrt {
namespace {

TensorSampler sampler(const PhantomSpec& spec) {
  Phantom ph(spec);
  return [ph](Vec2 x) { return ph(x); };
}

ReconstructionOptions small_options() {
  ReconstructionOptions o;
  o.N = 12;
  o.factor.n_angles = 64;
  return o;
}

double max_diff(const FieldPair& a, const FieldPair& b) {
  double m = 0.0;
  const auto x = a.arrays(), y = b.arrays();
  for (int c = 0; c < 5; ++c)
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs((*x[c])[i] - (*y[c])[i]));
  return m;
}

double max_abs(const FieldPair& a) {
  double m = 0.0;
  for (const RealGrid* arr : a.arrays())
    for (double v : *arr) m = std::max(m, std::abs(v));
  return m;
}

TEST(Reconstruct, ZeroSinogramGivesZeroFields) {
  const DomainGrid g(Domain::disk(), 32);
  const MomentSinogram ms = MomentSinogram::zeros({g.domain(), 64, 64});
  EXPECT_EQ(max_abs(reconstruct_nonattenuated(ms, g, small_options()).fields), 0.0);
}

TEST(Reconstruct, TooFewAnglesRejected) {
  const DomainGrid g(Domain::disk(), 16);
  ReconstructionOptions o = small_options();
  o.N = 40;
  EXPECT_THROW(reconstruct_nonattenuated(MomentSinogram::zeros({g.domain(), 32, 32}), g, o), StageError);
}

TEST(Reconstruct, LinearInTheData) {
  const DomainGrid g(Domain::disk(), 32);
  const ForwardOptions fo{64, 64, 1.0 / 64.0};
  const auto a = forward_all(sampler(random_phantom_spec(1)), Attenuation::none(), g.domain(), fo);
  const auto b = forward_all(sampler(random_phantom_spec(2)), Attenuation::none(), g.domain(), fo);
  MomentSinogram sum = a;
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < sum.layers[k].size(); ++i) sum.layers[k][i] = 2.0 * a.layers[k][i] - b.layers[k][i];
  const auto ra = reconstruct_nonattenuated(a, g, small_options()).fields;
  const auto rb = reconstruct_nonattenuated(b, g, small_options()).fields;
  const auto rs = reconstruct_nonattenuated(sum, g, small_options()).fields;
  EXPECT_LE(max_diff(rs, combine(2.0, ra, -1.0, rb)), 1e-9 * std::max(1.0, max_abs(rs)));
}

TEST(Reconstruct, ZeroAttenuationGaugeMatchesNonAttenuated) {
  const DomainGrid g(Domain::disk(), 32);
  const auto ms = forward_all(sampler(random_phantom_spec(3)), Attenuation::none(), g.domain(), {64, 64, 1.0 / 64.0});
  const auto plain = reconstruct_nonattenuated(ms, g, small_options());
  const auto gauged = reconstruct_attenuated(ms, Attenuation::none(), g, small_options());
  EXPECT_LE(max_diff(plain.fields, gauged.fields), 1e-10);
}

TEST(Reconstruct, CoarseRoundTripRecoversPhantom) {
  const DomainGrid g(Domain::disk(), 32);
  const PhantomSpec spec = random_phantom_spec(4);
  const auto ms = forward_all(sampler(spec), Attenuation::none(), g.domain(), {128, 128, 1.0 / 128.0});
  ReconstructionOptions o;
  o.N = 24;
  const Reconstruction r = reconstruct_nonattenuated(ms, g, o);
  const auto [ef, eF] = relative_errors(r.fields, make_phantom(spec, g), g, spec.support_radius);
  EXPECT_LE(ef, 0.1);
  EXPECT_LE(eF, 0.5);
}

TEST(RelativeErrors, IdenticalFieldsGiveZero) {
  const DomainGrid g(Domain::disk(), 32);
  const FieldPair fp = make_phantom(random_phantom_spec(5), g);
  const auto [ef, eF] = relative_errors(fp, fp, g, 0.75);
  EXPECT_EQ(ef, 0.0);
  EXPECT_EQ(eF, 0.0);
}

TEST(RelativeErrors, ScaledFieldGivesScaleDefect) {
  const DomainGrid g(Domain::disk(), 32);
  const FieldPair fp = make_phantom(random_phantom_spec(5), g);
  const auto [ef, eF] = relative_errors(combine(1.1, fp, 0.0, fp), fp, g, 0.75);
  EXPECT_NEAR(ef, 0.1, 1e-12);
  EXPECT_NEAR(eF, 0.1, 1e-12);
}

TEST(WeightedSeqNorm, BoundaryExamples) {
  const Domain d = Domain::disk();
  const int nb = 256;
  SeqField one(nb, 2);
  for (int i = 0; i < nb; ++i) one.at(i, 0) = 1.0;
  EXPECT_NEAR(weighted_seq_norm(one, d, 3.5, 0), std::sqrt(kTwoPi), 1e-12);
  EXPECT_NEAR(weighted_seq_norm(one, d, 3.5, 2), std::sqrt(kTwoPi), 1e-12);

  SeqField shifted(nb, 2);
  for (int i = 0; i < nb; ++i) shifted.at(i, 1) = 1.0;
  EXPECT_NEAR(weighted_seq_norm(shifted, d, 1.0, 0), 2.0 * std::sqrt(kTwoPi), 1e-12);

  SeqField wave(nb, 0);
  for (int i = 0; i < nb; ++i) wave.at(i, 0) = std::polar(1.0, kTwoPi * i / nb);
  const double step = kTwoPi / nb, damp = std::sin(step) / step;
  EXPECT_NEAR(weighted_seq_norm(wave, d, 0.0, 1), std::sqrt(kTwoPi * (1.0 + damp * damp)), 1e-12);
}

TEST(WeightedSeqNorm, LatticeExamples) {
  const DomainGrid g(Domain::disk(), 64);
  SeqField s(g.size(), 0);
  double mass = 0.0, area = 0.0;
  for (std::size_t i : g.inside_nodes()) {
    s.at(i, 0) = g.node(i).as_complex();
    mass += g.area_weight(i) * std::norm(s.at(i, 0));
    area += g.area_weight(i);
  }
  // d_x z = 1 and d_y z = i are differentiated exactly, each contributing the area
  EXPECT_NEAR(weighted_seq_norm(s, g, 0.0, 0), std::sqrt(mass), 1e-12);
  EXPECT_NEAR(weighted_seq_norm(s, g, 0.0, 1), std::sqrt(mass + 2.0 * area), 1e-12);
  EXPECT_NEAR(mass, kPi / 2.0, 1e-2);
  EXPECT_NEAR(weighted_seq_norm(s, g, 2.0, 0), std::sqrt(mass), 1e-12);
}

TEST(WeightedSeqNorm, InvalidArguments) {
  const DomainGrid g(Domain::disk(), 16);
  EXPECT_THROW(weighted_seq_norm(SeqField(8, 1), g.domain(), 1.0, 4), ArgumentError);
  EXPECT_THROW(weighted_seq_norm(SeqField(8, 1), g, 1.0, 1), ArgumentError);
}

TEST(StabilityRatio, ZeroFieldAndZeroData) {
  const DomainGrid g(Domain::disk(), 32);
  const MomentSinogram zero = MomentSinogram::zeros({g.domain(), 64, 64});
  EXPECT_EQ(stability_ratio(FieldPair::zeros(g.size()), zero, g, 8).ratio, 0.0);
  const FieldPair fp = make_phantom(random_phantom_spec(6), g);
  EXPECT_EQ(stability_ratio(fp, zero, g, 8).ratio, std::numeric_limits<double>::infinity());
}

TEST(StabilityRatio, FiniteAndScaleInvariant) {
  const DomainGrid g(Domain::disk(), 32);
  const PhantomSpec spec = random_phantom_spec(7);
  const FieldPair fp = make_phantom(spec, g);
  auto ms = forward_all(sampler(spec), Attenuation::none(), g.domain(), {64, 64, 1.0 / 64.0});
  const StabilityRatio a = stability_ratio(fp, ms, g, 12);
  EXPECT_TRUE(std::isfinite(a.ratio));
  EXPECT_GT(a.ratio, 0.0);
  for (auto& l : ms.layers)
    for (double& v : l) v *= 3.0;
  const StabilityRatio b = stability_ratio(combine(3.0, fp, 0.0, fp), ms, g, 12);
  EXPECT_NEAR(b.ratio, a.ratio, 1e-12 * a.ratio);
}

}  // namespace
}  // namespace amrt
