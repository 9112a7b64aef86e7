#include "amrt/fields.hpp"

#include <cmath>
#include <memory>
#include <random>

#include "amrt/errors.hpp"

namespace amrt {

namespace {

// smooth_cutoff(r) = exp(-c rho^4 / (1 - rho^2)), rho = r / radius
constexpr double kCutoffStrength = 1.0;

double gaussian(const GaussianBump& b, Vec2 x) {
  const Vec2 d = x - b.center;
  return b.amplitude * std::exp(-d.dot(d) / (2.0 * b.width * b.width));
}

double bump_sum(const std::vector<GaussianBump>& bumps, Vec2 x) {
  double s = 0.0;
  for (const auto& b : bumps) s += gaussian(b, x);
  return s;
}

void check_bumps(const std::vector<GaussianBump>& bumps, double support_radius) {
  for (const auto& b : bumps) {
    if (!(b.width > 0.0)) throw ConfigError("bump width must be positive");
    if (b.center.norm() >= support_radius) throw ConfigError("bump centre lies outside support_radius");
  }
}

void check_support(double support_radius, const Domain& domain) {
  if (!(support_radius > 0.0)) throw ConfigError("support_radius must be positive");
  if (support_radius >= std::min(domain.semi_a(), domain.semi_b()))
    throw ConfigError("support disk must lie strictly inside the domain");
}

}  // namespace

FieldPair FieldPair::zeros(std::size_t n, double support_radius) {
  FieldPair fp;
  for (RealGrid* a : fp.arrays()) a->assign(n, 0.0);
  fp.support_radius = support_radius;
  return fp;
}

FieldPair combine(double a, const FieldPair& x, double b, const FieldPair& y) {
  if (x.size() != y.size()) throw ArgumentError("combine: field sizes differ");
  FieldPair out = FieldPair::zeros(x.size(), x.support_radius);
  auto xs = x.arrays();
  auto ys = y.arrays();
  auto os = out.arrays();
  for (int c = 0; c < 5; ++c)
    for (std::size_t i = 0; i < x.size(); ++i) (*os[c])[i] = a * (*xs[c])[i] + b * (*ys[c])[i];
  return out;
}

ComplexComponents components_from_fields(const FieldPair& fp) {
  const std::size_t n = fp.size();
  ComplexComponents cc{RealGrid(n), ComplexGrid(n), ComplexGrid(n)};
  for (std::size_t i = 0; i < n; ++i) {
    cc.c0[i] = 0.5 * (fp.F11[i] + fp.F22[i]);
    cc.c1[i] = cplx(0.5 * fp.f1[i], 0.5 * fp.f2[i]);
    cc.c2[i] = cplx(0.25 * (fp.F11[i] - fp.F22[i]), 0.5 * fp.F12[i]);
  }
  return cc;
}

FieldPair fields_from_components(const ComplexComponents& cc, double support_radius) {
  const std::size_t n = cc.c0.size();
  FieldPair fp = FieldPair::zeros(n, support_radius);
  for (std::size_t i = 0; i < n; ++i) {
    fp.f1[i] = 2.0 * cc.c1[i].real();
    fp.f2[i] = 2.0 * cc.c1[i].imag();
    fp.F11[i] = cc.c0[i] + 2.0 * cc.c2[i].real();
    fp.F22[i] = cc.c0[i] - 2.0 * cc.c2[i].real();
    fp.F12[i] = 2.0 * cc.c2[i].imag();
  }
  return fp;
}

double pairing_from_components(double c0, cplx c1, cplx c2, double phi) {
  const cplx e1 = std::polar(1.0, phi);
  return c0 + 2.0 * (std::conj(c2) * e1 * e1).real() + 2.0 * (std::conj(c1) * e1).real();
}

RealGrid direction_pairing(const FieldPair& fp, double phi) {
  const Vec2 u = direction(phi);
  RealGrid out(fp.size());
  for (std::size_t i = 0; i < fp.size(); ++i)
    out[i] = pairing({fp.f1[i], fp.f2[i], fp.F11[i], fp.F12[i], fp.F22[i]}, u);
  return out;
}

TensorSampler grid_sampler(const DomainGrid& grid, const FieldPair& fp) {
  return [&grid, &fp](Vec2 x) {
    return TensorSample{bilinear(grid, fp.f1, x), bilinear(grid, fp.f2, x), bilinear(grid, fp.F11, x),
                        bilinear(grid, fp.F12, x), bilinear(grid, fp.F22, x)};
  };
}

const char* component_name(Component c) {
  switch (c) {
    case Component::f1: return "f1";
    case Component::f2: return "f2";
    case Component::F11: return "F11";
    case Component::F12: return "F12";
    case Component::F22: return "F22";
  }
  return "?";
}

double smooth_cutoff(double r, double radius) {
  const double rho = r / radius;
  if (rho >= 1.0) return 0.0;
  const double rho2 = rho * rho;
  return std::exp(-kCutoffStrength * rho2 * rho2 / (1.0 - rho2));
}

double smooth_cutoff_derivative(double r, double radius) {
  const double rho = r / radius;
  if (rho >= 1.0) return 0.0;
  const double rho2 = rho * rho;
  const double q = 1.0 - rho2;
  const double dexp = (4.0 * rho2 * rho - 2.0 * rho2 * rho2 * rho) / (q * q);
  return -kCutoffStrength * smooth_cutoff(r, radius) * dexp / radius;
}

ScalarPhantom::ScalarPhantom(ScalarSpec spec) : spec_(std::move(spec)) {
  check_bumps(spec_.bumps, spec_.support_radius);
}

double ScalarPhantom::value(Vec2 x) const {
  const double chi = smooth_cutoff(x.norm(), spec_.support_radius);
  if (chi == 0.0) return 0.0;
  return chi * bump_sum(spec_.bumps, x);
}

Vec2 ScalarPhantom::gradient(Vec2 x) const {
  const double r = x.norm();
  const double chi = smooth_cutoff(r, spec_.support_radius);
  if (chi == 0.0) return {};
  double sum = 0.0;
  Vec2 grad_sum;
  for (const auto& b : spec_.bumps) {
    const double g = gaussian(b, x);
    sum += g;
    grad_sum = grad_sum - (x - b.center) * (g / (b.width * b.width));
  }
  const double dchi = smooth_cutoff_derivative(r, spec_.support_radius);
  const Vec2 radial = r > 0.0 ? x * (1.0 / r) : Vec2{};
  return grad_sum * chi + radial * (dchi * sum);
}

RealGrid ScalarPhantom::sample(const DomainGrid& grid) const {
  RealGrid out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = value(grid.node(i));
  return out;
}

Phantom::Phantom(PhantomSpec spec) : spec_(std::move(spec)) {
  for (const auto& list : spec_.bumps) check_bumps(list, spec_.support_radius);
}

TensorSample Phantom::operator()(Vec2 x) const {
  const double chi = smooth_cutoff(x.norm(), spec_.support_radius);
  if (chi == 0.0) return {};
  return {chi * bump_sum(spec_.bumps[0], x), chi * bump_sum(spec_.bumps[1], x), chi * bump_sum(spec_.bumps[2], x),
          chi * bump_sum(spec_.bumps[3], x), chi * bump_sum(spec_.bumps[4], x)};
}

namespace {

std::vector<GaussianBump> random_bumps(std::mt19937_64& rng, const RandomPhantomOptions& o) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<GaussianBump> out;
  for (int k = 0; k < o.bumps_per_component; ++k) {
    const double r = o.center_radius * std::sqrt(unit(rng));
    const double t = kTwoPi * unit(rng);
    GaussianBump b;
    b.center = {r * std::cos(t), r * std::sin(t)};
    b.width = o.min_width + (o.max_width - o.min_width) * unit(rng);
    b.amplitude = o.max_amplitude * (2.0 * unit(rng) - 1.0);
    out.push_back(b);
  }
  return out;
}

}  // namespace

PhantomSpec random_phantom_spec(std::uint64_t seed, const RandomPhantomOptions& opts) {
  std::mt19937_64 rng(seed);
  PhantomSpec spec;
  spec.support_radius = opts.support_radius;
  for (auto& list : spec.bumps) list = random_bumps(rng, opts);
  return spec;
}

ScalarSpec random_scalar_spec(std::uint64_t seed, const RandomPhantomOptions& opts) {
  std::mt19937_64 rng(seed);
  return ScalarSpec{opts.support_radius, random_bumps(rng, opts)};
}

void validate(const PhantomSpec& spec, const Domain& domain) {
  check_support(spec.support_radius, domain);
  for (const auto& list : spec.bumps) check_bumps(list, spec.support_radius);
}

void validate(const ScalarSpec& spec, const Domain& domain) {
  check_support(spec.support_radius, domain);
  check_bumps(spec.bumps, spec.support_radius);
}

FieldPair make_phantom(const PhantomSpec& spec, const DomainGrid& grid) {
  validate(spec, grid.domain());
  const Phantom phantom(spec);
  FieldPair fp = FieldPair::zeros(grid.size(), spec.support_radius);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const TensorSample s = phantom(grid.node(i));
    fp.f1[i] = s.f1;
    fp.f2[i] = s.f2;
    fp.F11[i] = s.F11;
    fp.F12[i] = s.F12;
    fp.F22[i] = s.F22;
  }
  return fp;
}

FieldPair make_gradient_field(const ScalarSpec& psi, const DomainGrid& grid) {
  validate(psi, grid.domain());
  const RealGrid v = ScalarPhantom(psi).sample(grid);
  const int n = grid.nodes_per_axis();
  const double h = grid.spacing();
  FieldPair fp = FieldPair::zeros(grid.size(), psi.support_radius);
  auto at = [&](int i, int j) { return (i < 0 || j < 0 || i >= n || j >= n) ? 0.0 : v[grid.index(i, j)]; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const std::size_t idx = grid.index(i, j);
      fp.f1[idx] = (at(i + 1, j) - at(i - 1, j)) / (2.0 * h);
      fp.f2[idx] = (at(i, j + 1) - at(i, j - 1)) / (2.0 * h);
    }
  return fp;
}

TensorSampler gradient_sampler(const ScalarSpec& psi) {
  auto phantom = std::make_shared<ScalarPhantom>(psi);
  return [phantom](Vec2 x) {
    const Vec2 g = phantom->gradient(x);
    return TensorSample{g.x, g.y, 0.0, 0.0, 0.0};
  };
}

FieldPair sample_fields(const TensorSampler& field, const DomainGrid& grid, double support_radius) {
  FieldPair fp = FieldPair::zeros(grid.size(), support_radius);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const TensorSample s = field(grid.node(i));
    fp.f1[i] = s.f1;
    fp.f2[i] = s.f2;
    fp.F11[i] = s.F11;
    fp.F12[i] = s.F12;
    fp.F22[i] = s.F22;
  }
  return fp;
}

}  // namespace amrt
