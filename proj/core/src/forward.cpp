#include "amrt/forward.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "amrt/errors.hpp"

namespace amrt {

Attenuation Attenuation::from_spec(const ScalarSpec& spec, const Domain& domain) {
  validate(spec, domain);
  for (const auto& b : spec.bumps)
    if (b.amplitude < 0.0) throw ConfigError("attenuation bumps must have non-negative amplitude");
  Attenuation att;
  att.domain_ = std::make_shared<const Domain>(domain);
  auto phantom = std::make_shared<const ScalarPhantom>(spec);
  att.sampler_ = [phantom](Vec2 x) { return phantom->value(x); };
  return att;
}

Attenuation Attenuation::from_grid(const DomainGrid& grid, RealGrid values) {
  if (values.size() != grid.size()) throw ArgumentError("attenuation grid size mismatch");
  for (double v : values)
    if (!(v >= 0.0)) throw ConfigError("attenuation must be non-negative");
  Attenuation att;
  att.domain_ = std::make_shared<const Domain>(grid.domain());
  auto g = std::make_shared<const DomainGrid>(grid);
  auto vals = std::make_shared<const RealGrid>(std::move(values));
  att.sampler_ = [g, vals](Vec2 x) { return bilinear(*g, *vals, x); };
  return att;
}

double Attenuation::operator()(Vec2 x) const {
  if (!sampler_ || !domain_->contains(x, 0.0)) return 0.0;
  return sampler_(x);
}

RealGrid Attenuation::sample(const DomainGrid& grid) const {
  RealGrid out(grid.size(), 0.0);
  if (is_zero()) return out;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (grid.inside(i)) out[i] = (*this)(grid.node(i));
  return out;
}

std::vector<std::uint8_t> SinogramLayout::outgoing_mask() const {
  std::vector<std::uint8_t> mask(size(), 0);
  for (int i = 0; i < n_boundary; ++i) {
    const Vec2 x = point(i);
    for (int j = 0; j < n_angles; ++j)
      mask[index(i, j)] = domain.classify_boundary(x, phi(j)) == BoundaryClass::outgoing ? 1 : 0;
  }
  return mask;
}

MomentSinogram MomentSinogram::zeros(const SinogramLayout& layout) {
  MomentSinogram ms;
  ms.layout = layout;
  for (auto& l : ms.layers) l.assign(layout.size(), 0.0);
  ms.outgoing = layout.outgoing_mask();
  return ms;
}

bool MomentSinogram::complete() const {
  for (const auto& l : layers)
    if (l.size() != layout.size()) return false;
  return outgoing.size() == layout.size();
}

namespace {

struct LineSpan {
  Vec2 foot;
  Vec2 u;
  double s_begin;
  double s_end;
};

LineSpan line_span(const Domain& domain, const Ray& ray) {
  const Chord c = domain.chord_times(ray.base, ray.phi);
  const double p = ray.offset();
  return {ray.foot(), ray.dir(), p - c.tau_minus, p + c.tau_plus};
}

int even_intervals(double length, double h, int minimum) {
  int n = static_cast<int>(std::ceil(length / h));
  if (n % 2) ++n;
  return std::max(n, minimum);
}

// Per-interval integrals of samples f_0..f_n at spacing h, fourth-order accurate.
void interval_integrals(const std::vector<double>& f, double h, std::vector<double>& out) {
  const int n = static_cast<int>(f.size()) - 1;
  out.assign(n, 0.0);
  const double c = h / 24.0;
  for (int j = 1; j + 2 <= n; ++j) out[j] = c * (-f[j - 1] + 13.0 * f[j] + 13.0 * f[j + 1] - f[j + 2]);
  out[0] = c * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
  out[n - 1] = c * (9.0 * f[n] + 19.0 * f[n - 1] - 5.0 * f[n - 2] + f[n - 3]);
}

}  // namespace

double attenuation_tail(const Attenuation& att, const Domain& domain, const Ray& ray, double s, double h_ray) {
  if (att.is_zero()) return 0.0;
  const LineSpan span = line_span(domain, ray);
  const double s0 = std::max(s, span.s_begin);
  if (s0 >= span.s_end) return 0.0;
  const int n = even_intervals(span.s_end - s0, h_ray, 2);
  const double h = (span.s_end - s0) / n;
  double sum = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    sum += w * att(span.foot + span.u * (s0 + j * h));
  }
  return sum * h / 3.0;
}

std::array<double, 3> ray_moments(const TensorSampler& field, const Attenuation& att, const Domain& domain,
                                  const Ray& ray, double h_ray) {
  const LineSpan span = line_span(domain, ray);
  const double length = span.s_end - span.s_begin;
  if (length <= 0.0) return {0.0, 0.0, 0.0};
  const int n = even_intervals(length, h_ray, 4);
  const double h = length / n;

  std::vector<double> weight(n + 1, 1.0);
  if (!att.is_zero()) {
    std::vector<double> a(n + 1);
    for (int j = 0; j <= n; ++j) a[j] = att(span.foot + span.u * (span.s_begin + j * h));
    std::vector<double> pieces;
    interval_integrals(a, h, pieces);
    double tail = 0.0;
    for (int j = n; j >= 0; --j) {
      weight[j] = std::exp(-tail);
      if (j > 0) tail += pieces[j - 1];
    }
  }

  std::array<double, 3> m{0.0, 0.0, 0.0};
  for (int j = 0; j <= n; ++j) {
    const double s = span.s_begin + j * h;
    const double simpson = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    const double v = simpson * weight[j] * pairing(field(span.foot + span.u * s), span.u);
    m[0] += v;
    m[1] += v * s;
    m[2] += v * s * s;
  }
  for (double& x : m) x *= h / 3.0;
  return m;
}

MomentSinogram forward_all(const TensorSampler& field, const Attenuation& att, const Domain& domain,
                           const ForwardOptions& opts) {
  if (opts.n_boundary <= 0 || opts.n_angles <= 0) throw ArgumentError("sinogram dimensions must be positive");
  if (!(opts.h_ray > 0.0)) throw ArgumentError("h_ray must be positive");
  MomentSinogram ms = MomentSinogram::zeros(SinogramLayout{domain, opts.n_boundary, opts.n_angles});
  ms.h_ray = opts.h_ray;
  const SinogramLayout& L = ms.layout;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < L.n_boundary; ++i) {
    const Vec2 x = L.point(i);
    for (int j = 0; j < L.n_angles; ++j) {
      const std::size_t idx = L.index(i, j);
      if (!ms.outgoing[idx]) continue;
      const auto m = ray_moments(field, att, domain, Ray{x, L.phi(j)}, opts.h_ray);
      for (int k = 0; k < 3; ++k) ms.layers[k][idx] = m[k];
    }
  }
  return ms;
}

MomentSinogram forward_all(const FieldPair& fp, const DomainGrid& grid, const Attenuation& att, int n_boundary,
                           int n_angles) {
  if (fp.size() != grid.size()) throw ArgumentError("field grids do not match the domain lattice");
  return forward_all(grid_sampler(grid, fp), att, grid.domain(),
                     ForwardOptions{n_boundary, n_angles, 0.5 * grid.spacing()});
}

RealGrid moment_transform(const TensorSampler& field, const Attenuation& att, const Domain& domain,
                          const ForwardOptions& opts, int k) {
  if (k < 0 || k > 2) throw ArgumentError("moment order must be 0, 1 or 2");
  return forward_all(field, att, domain, opts).layers[k];
}

void add_noise(MomentSinogram& ms, double level, std::uint64_t seed) {
  if (level < 0.0) throw ArgumentError("noise level must be non-negative");
  if (level == 0.0) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& layer : ms.layers) {
    double ss = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < layer.size(); ++i)
      if (ms.outgoing[i]) {
        ss += layer[i] * layer[i];
        ++count;
      }
    const double sigma = level * (count ? std::sqrt(ss / count) : 0.0);
    for (std::size_t i = 0; i < layer.size(); ++i)
      if (ms.outgoing[i]) layer[i] += sigma * normal(rng);
  }
}

}  // namespace amrt
