#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "amrt/errors.hpp"
#include "amrt/forward.hpp"
#include "oracle.hpp"

namespace amrt {
namespace {

PhantomSpec radial_identity(double width) {
  PhantomSpec spec;
  spec.bumps[static_cast<int>(Component::F11)] = {{1.0, {0.0, 0.0}, width}};
  spec.bumps[static_cast<int>(Component::F22)] = {{1.0, {0.0, 0.0}, width}};
  return spec;
}

TensorSampler sampler(const PhantomSpec& spec) {
  Phantom ph(spec);
  return [ph](Vec2 x) { return ph(x); };
}

double max_abs(const RealGrid& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

TEST(AttenuationTail, ZeroAttenuation) {
  const Domain d = Domain::disk();
  EXPECT_EQ(attenuation_tail(Attenuation::none(), d, Ray{{0.2, 0.1}, 0.4}, -0.5, 0.01), 0.0);
}

TEST(AttenuationTail, BeyondChordExitIsZero) {
  const Domain d = Domain::disk();
  const Attenuation att = Attenuation::from_spec({0.85, {{0.3, {0.0, 0.0}, 0.4}}}, d);
  EXPECT_EQ(attenuation_tail(att, d, Ray{{0.0, 0.0}, 0.0}, 1.5, 0.01), 0.0);
}

TEST(AttenuationTail, MatchesIndependentQuadrature) {
  const Domain d = Domain::disk();
  const ScalarSpec spec{0.9, {{0.5, {0.0, 0.0}, 1.5}}};
  const Attenuation att = Attenuation::from_spec(spec, d);
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  for (double phi : {0.0, 0.7, 2.5}) {
    const Ray ray{{0.0, 0.0}, phi};
    for (double s : {-1.0, -0.3, 0.4}) {
      const Vec2 u = direction(phi);
      const double expect = GK::integrate(
          [&](double t) { return oracle::scalar_value(spec, t * u.x, t * u.y); }, s, 1.0, 15, 1e-13);
      EXPECT_NEAR(attenuation_tail(att, d, ray, s, 1.0 / 256.0), expect, 1e-8);
    }
  }
}

TEST(MomentTransform, ZeroFieldGivesZeroSinogram) {
  const ForwardOptions fo{32, 32, 1.0 / 64.0};
  const Attenuation att = Attenuation::from_spec({0.85, {{0.3, {0.1, 0.0}, 0.3}}}, Domain::disk());
  for (int k = 0; k < 3; ++k)
    EXPECT_EQ(max_abs(moment_transform(sampler(PhantomSpec{}), att, Domain::disk(), fo, k)), 0.0);
}

TEST(MomentTransform, OrderOutOfRange) {
  EXPECT_THROW(moment_transform(sampler(PhantomSpec{}), Attenuation::none(), Domain::disk(), {}, 3), ArgumentError);
}

TEST(MomentTransform, OddFirstMomentThroughOrigin) {
  const Domain d = Domain::disk();
  const TensorSampler f = sampler(radial_identity(0.2));
  for (double phi : {0.0, 1.0, 3.3}) {
    const auto m = ray_moments(f, Attenuation::none(), d, Ray{{0.0, 0.0}, phi}, 1.0 / 128.0);
    EXPECT_NEAR(m[1], 0.0, 1e-14);
    EXPECT_GT(m[0], 0.1);
  }
}

TEST(MomentTransform, MatchesDenseQuadratureAtFootDistance) {
  const Domain d = Domain::disk();
  const PhantomSpec spec = radial_identity(0.2);
  const TensorSampler f = sampler(spec);
  for (double p : {0.0, 0.2, 0.45}) {
    const double phi = 0.8;
    const Vec2 base = p * perpendicular(phi);
    const auto m = ray_moments(f, Attenuation::none(), d, Ray{base, phi}, 1.0 / 128.0);
    EXPECT_NEAR(m[0], oracle::oracle_moment(spec, nullptr, 0, d, base.x, base.y, phi), 1e-8);
  }
}

TEST(MomentTransform, FootPointInvariance) {
  const Domain d = Domain::disk();
  const TensorSampler f = sampler(random_phantom_spec(2));
  const Attenuation att = Attenuation::from_spec({0.85, {{0.3, {0.1, -0.05}, 0.35}}}, d);
  const double phi = 1.3;
  const Chord c = d.chord_times({0.1, 0.2}, phi);
  const Vec2 exit = Vec2{0.1, 0.2} + c.tau_plus * direction(phi);
  const Vec2 mid = Vec2{0.1, 0.2} - 0.3 * direction(phi);
  const auto a = ray_moments(f, att, d, Ray{exit, phi}, 1.0 / 128.0);
  const auto b = ray_moments(f, att, d, Ray{mid, phi}, 1.0 / 128.0);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
}

TEST(MomentTransform, QuadratureConvergesUnderHalving) {
  const Domain d = Domain::disk();
  const TensorSampler f = sampler(random_phantom_spec(4));
  const Attenuation att = Attenuation::from_spec({0.85, {{0.3, {0.1, -0.05}, 0.35}}}, d);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int r = 0; r < 10; ++r) {
    const double theta = angle(rng);
    const Vec2 x = d.boundary_point(theta);
    const double phi = theta + 0.9 * (angle(rng) / kTwoPi - 0.5) * kPi;
    const auto ref = ray_moments(f, att, d, Ray{x, phi}, 1.0 / 1024.0);
    std::array<double, 3> prev{};
    for (double h : {1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0}) {
      const auto m = ray_moments(f, att, d, Ray{x, phi}, h);
      for (int k = 0; k < 3; ++k) {
        const double err = std::abs(m[k] - ref[k]);
        if (prev[k] > 1e-11) EXPECT_GT(prev[k] / err, 3.5) << "ray " << r << " order " << k;
        prev[k] = err;
      }
    }
    for (int k = 0; k < 3; ++k) EXPECT_LE(prev[k], 1e-8);
  }
}

TEST(MomentTransform, RadialIdentityIsAngleIndependent) {
  const Domain d = Domain::disk();
  const TensorSampler f = sampler(radial_identity(0.25));
  for (double p : {0.0, 0.3, 0.6}) {
    double lo = 1e300, hi = -1e300;
    for (int j = 0; j < 32; ++j) {
      const double phi = kTwoPi * j / 32.0;
      const double m0 = ray_moments(f, Attenuation::none(), d, Ray{p * perpendicular(phi), phi}, 1.0 / 128.0)[0];
      lo = std::min(lo, m0);
      hi = std::max(hi, m0);
    }
    EXPECT_LE(hi - lo, 1e-8);
  }
}

TEST(ForwardAll, LinearityWithoutAttenuation) {
  const Domain d = Domain::disk();
  const PhantomSpec a = random_phantom_spec(5), b = random_phantom_spec(6);
  const TensorSampler fa = sampler(a), fb = sampler(b);
  const TensorSampler sum = [&](Vec2 x) {
    const TensorSample p = fa(x), q = fb(x);
    return TensorSample{p.f1 + q.f1, p.f2 + q.f2, p.F11 + q.F11, p.F12 + q.F12, p.F22 + q.F22};
  };
  const ForwardOptions fo{32, 32, 1.0 / 64.0};
  const auto ma = forward_all(fa, Attenuation::none(), d, fo), mb = forward_all(fb, Attenuation::none(), d, fo);
  const auto ms = forward_all(sum, Attenuation::none(), d, fo);
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < ms.layers[k].size(); ++i)
      EXPECT_NEAR(ms.layers[k][i], ma.layers[k][i] + mb.layers[k][i], 1e-12);
}

TEST(ForwardAll, IncomingEntriesAreZero) {
  const auto ms = forward_all(sampler(random_phantom_spec(1)), Attenuation::none(), Domain::disk(), {32, 32, 0.02});
  for (std::size_t i = 0; i < ms.layout.size(); ++i)
    if (!ms.outgoing[i])
      for (int k = 0; k < 3; ++k) EXPECT_EQ(ms.layers[k][i], 0.0);
}

TEST(ForwardAll, GradientFieldAnnihilatedByZerothMoment) {
  const ScalarSpec psi = random_scalar_spec(3);
  const auto ms = forward_all(gradient_sampler(psi), Attenuation::none(), Domain::disk(), {64, 64, 1.0 / 256.0});
  EXPECT_LE(max_abs(ms.layers[0]), 1e-8);
  EXPECT_GT(max_abs(ms.layers[1]), 1e-2);
}

TEST(ForwardAll, LatticeGradientFieldAnnihilatedToSecondOrder) {
  const ScalarSpec psi = random_scalar_spec(3);
  double prev = 0.0;
  for (int res : {64, 128}) {
    const DomainGrid g(Domain::disk(), res);
    const auto ms = forward_all(make_gradient_field(psi, g), g, Attenuation::none(), 64, 64);
    const double m = max_abs(ms.layers[0]);
    if (prev > 0.0) EXPECT_GT(prev / m, 3.5);
    prev = m;
  }
  EXPECT_LE(prev, 1e-3);
}

TEST(AddNoise, DeterministicAndScaled) {
  auto a = forward_all(sampler(random_phantom_spec(1)), Attenuation::none(), Domain::disk(), {32, 32, 0.02});
  auto b = a, c = a;
  add_noise(b, 0.01, 3);
  add_noise(c, 0.01, 3);
  EXPECT_EQ(b.layers[0], c.layers[0]);
  double ss = 0.0, ref = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.layout.size(); ++i) {
    if (!a.outgoing[i]) {
      EXPECT_EQ(b.layers[0][i], 0.0);
      continue;
    }
    ss += std::pow(b.layers[0][i] - a.layers[0][i], 2);
    ref += a.layers[0][i] * a.layers[0][i];
    ++n;
  }
  EXPECT_NEAR(std::sqrt(ss / n) / std::sqrt(ref / n), 0.01, 0.002);
  EXPECT_THROW(add_noise(a, -1.0, 1), ArgumentError);
}

}  // namespace
}  // namespace amrt
