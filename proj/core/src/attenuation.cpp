#include "amrt/attenuation.hpp"

#include <algorithm>
#include <cmath>

#include "amrt/errors.hpp"
#include "amrt/fft.hpp"

namespace amrt {

namespace {

double simpson_line(const Attenuation& att, Vec2 start, Vec2 u, double length, double h) {
  if (length <= 0.0) return 0.0;
  int n = std::max(2, static_cast<int>(std::ceil(length / h)));
  if (n % 2) ++n;
  const double step = length / n;
  double sum = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    sum += w * att(start + u * (j * step));
  }
  return sum * step / 3.0;
}

// Four-point Lagrange interpolation of row[0..n) at fractional index x, zero outside.
double cubic_sample(const double* row, int n, double x) {
  const int i = static_cast<int>(std::floor(x));
  const double t = x - i;
  auto at = [&](int k) { return (k < 0 || k >= n) ? 0.0 : row[k]; };
  const double pm = at(i - 1), p0 = at(i), p1 = at(i + 1), p2 = at(i + 2);
  return p0 + t * (0.5 * (p1 - pm) +
                   t * (pm - 2.5 * p0 + 2.0 * p1 - 0.5 * p2 + t * (1.5 * (p0 - p1) + 0.5 * (p2 - pm))));
}

}  // namespace

RadonTable radon_of_a(const Attenuation& att, const Domain& domain, const IntegratingFactorOptions& opts) {
  if (opts.hilbert_samples < 8) throw ArgumentError("hilbert_samples too small");
  RadonTable t;
  const double window = opts.window_factor * domain.diameter();
  t.samples = opts.hilbert_samples;
  t.ds = window / t.samples;
  t.s0 = -0.5 * window;
  t.n_angles = opts.n_angles;
  t.values.assign(static_cast<std::size_t>(t.samples) * t.n_angles, 0.0);
  if (att.is_zero()) return t;
  const double R = domain.half_width();
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < t.n_angles; ++j) {
    const Vec2 u = direction(t.phi(j));
    const Vec2 up = perpendicular(t.phi(j));
    for (int m = 0; m < t.samples; ++m) {
      const double s = t.s(m);
      if (std::abs(s) >= R) continue;
      t.values[static_cast<std::size_t>(j) * t.samples + m] = simpson_line(att, up * s - u * R, u, 2.0 * R, opts.h_ray);
    }
  }
  return t;
}

std::vector<double> hilbert_transform(const std::vector<double>& f, double ds, int pad_factor) {
  const int n = static_cast<int>(f.size());
  if (n == 0) return {};
  if (pad_factor < 1) throw ArgumentError("pad_factor must be >= 1");
  const int P = n * pad_factor;
  std::vector<cplx> buf(P, cplx{});
  for (int i = 0; i < n; ++i) buf[i] = f[i];
  fft::dft(buf, fft::Direction::forward);
  for (int k = 0; k < P; ++k) {
    if (k == 0 || 2 * k == P) {
      buf[k] = 0.0;
    } else if (2 * k < P) {
      buf[k] *= cplx(0.0, -1.0);
    } else {
      buf[k] *= cplx(0.0, 1.0);
    }
  }
  fft::dft(buf, fft::Direction::backward);

  // (1/L) cot(pi d / L) = 1/(pi d) - pi d/(3 L^2) - pi^3 d^3/(45 L^4) - 2 pi^5 d^5/(945 L^6) - ...
  const double L = P * ds;
  const double c1 = kPi / (3.0 * L * L);
  const double c3 = std::pow(kPi, 3) / (45.0 * std::pow(L, 4));
  const double c5 = 2.0 * std::pow(kPi, 5) / (945.0 * std::pow(L, 6));
  double mu[6] = {0, 0, 0, 0, 0, 0};
  for (int i = 0; i < n; ++i) {
    const double t = i * ds;
    double tp = 1.0;
    for (double& m : mu) {
      m += f[i] * tp * ds;
      tp *= t;
    }
  }
  // int f(t) (s - t)^p dt from the moments
  auto moment_poly = [&](double s, int p) {
    static constexpr double binom[6][6] = {{1, 0, 0, 0, 0, 0},  {1, 1, 0, 0, 0, 0},  {1, 2, 1, 0, 0, 0},
                                           {1, 3, 3, 1, 0, 0},  {1, 4, 6, 4, 1, 0},  {1, 5, 10, 10, 5, 1}};
    double acc = 0.0;
    for (int k = 0; k <= p; ++k) acc += binom[p][k] * std::pow(s, p - k) * ((k % 2) ? -mu[k] : mu[k]);
    return acc;
  };
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double s = i * ds;
    // the expansion about d = 0 is valid only while |s - t| < L/2, i.e. with padding
    const double corr =
        pad_factor >= 2 ? c1 * moment_poly(s, 1) + c3 * moment_poly(s, 3) + c5 * moment_poly(s, 5) : 0.0;
    out[i] = buf[i].real() / P + corr;
  }
  return out;
}

RadonTable hilbert_rows(const RadonTable& ra, int pad_factor) {
  RadonTable out = ra;
#pragma omp parallel for
  for (int j = 0; j < ra.n_angles; ++j) {
    const std::size_t off = static_cast<std::size_t>(j) * ra.samples;
    std::vector<double> row(ra.values.begin() + off, ra.values.begin() + off + ra.samples);
    const std::vector<double> h = hilbert_transform(row, ra.ds, pad_factor);
    std::copy(h.begin(), h.end(), out.values.begin() + off);
  }
  return out;
}

IntegratingFactor::IntegratingFactor(std::size_t points, int N) : points_(points), N_(N) {
  if (N < 0) throw ArgumentError("integrating factor truncation must be non-negative");
  alpha_.assign(points * (N + 1), cplx{});
  beta_.assign(points * (N + 1), cplx{});
}

IntegratingFactor IntegratingFactor::identity(std::size_t points, int N) {
  IntegratingFactor f(points, N);
  for (std::size_t p = 0; p < points; ++p) {
    f.alpha(p)[0] = 1.0;
    f.beta(p)[0] = 1.0;
  }
  return f;
}

std::vector<cplx> integrating_factor_samples(const Attenuation& att, const Domain& domain, Vec2 z,
                                             const RadonTable& ra, const RadonTable& hra, double h_ray) {
  std::vector<cplx> H(ra.n_angles);
  for (int j = 0; j < ra.n_angles; ++j) {
    const double phi = ra.phi(j);
    const Vec2 u = direction(phi);
    const double tau = domain.chord_times(z, phi).tau_plus;
    const double da = simpson_line(att, z, u, tau, h_ray);
    const double x = (z.dot(perpendicular(phi)) - ra.s0) / ra.ds;
    const std::size_t off = static_cast<std::size_t>(j) * ra.samples;
    const double r = cubic_sample(ra.values.data() + off, ra.samples, x);
    const double hr = cubic_sample(hra.values.data() + off, hra.samples, x);
    H[j] = cplx(da - 0.5 * r, 0.5 * hr);
  }
  return H;
}

namespace {

IntegratingFactor build_factor(const Attenuation& att, const Domain& domain, const std::vector<Vec2>& points,
                               const std::vector<std::uint8_t>* active, int N, const IntegratingFactorOptions& opts) {
  const int M = opts.n_angles;
  if (M < 2 * N + 2) throw ArgumentError("integrating factor needs n_angles >= 2N+2");
  IntegratingFactor f = IntegratingFactor::identity(points.size(), N);
  if (att.is_zero()) return f;
  const RadonTable ra = radon_of_a(att, domain, opts);
  const RadonTable hra = hilbert_rows(ra, opts.pad_factor);
  double neg = 0.0, conv = 0.0, prod = 0.0;
  const long count = static_cast<long>(points.size());
#pragma omp parallel
  {
    std::vector<cplx> em(M), ep(M);
    double neg_l = 0.0, conv_l = 0.0, prod_l = 0.0;
#pragma omp for schedule(dynamic, 16)
    for (long p = 0; p < count; ++p) {
      if (active && !(*active)[p]) continue;
      const std::vector<cplx> H = integrating_factor_samples(att, domain, points[p], ra, hra, opts.h_ray);
      for (int j = 0; j < M; ++j) {
        em[j] = std::exp(-H[j]);
        ep[j] = std::exp(H[j]);
        prod_l = std::max(prod_l, std::abs(em[j] * ep[j] - 1.0));
      }
      fft::dft(em.data(), M, 1, fft::Direction::forward);
      fft::dft(ep.data(), M, 1, fft::Direction::forward);
      for (int j = 0; j < M; ++j) {
        em[j] /= static_cast<double>(M);
        ep[j] /= static_cast<double>(M);
      }
      for (int n = 1; n < M / 2; ++n) {
        neg_l = std::max(neg_l, std::abs(em[M - n]) / std::abs(em[0]));
        neg_l = std::max(neg_l, std::abs(ep[M - n]) / std::abs(ep[0]));
      }
      cplx* a = f.alpha(p);
      cplx* b = f.beta(p);
      for (int n = 0; n <= N; ++n) {
        a[n] = em[n];
        b[n] = ep[n];
      }
      for (int n = 0; n <= N; ++n) {
        cplx c{};
        for (int m = 0; m <= n; ++m) c += a[m] * b[n - m];
        conv_l = std::max(conv_l, std::abs(c - (n == 0 ? 1.0 : 0.0)));
      }
    }
#pragma omp critical
    {
      neg = std::max(neg, neg_l);
      conv = std::max(conv, conv_l);
      prod = std::max(prod, prod_l);
    }
  }
  f.negative_defect = neg;
  f.convolution_defect = conv;
  f.product_defect = prod;
  return f;
}

}  // namespace

IntegratingFactor integrating_factor(const Attenuation& att, const Domain& domain, const std::vector<Vec2>& points,
                                     int N, const IntegratingFactorOptions& opts) {
  for (const Vec2& p : points)
    if (domain.level(p) > 1e-10) throw DomainError("integrating_factor: point outside the domain");
  return build_factor(att, domain, points, nullptr, N, opts);
}

IntegratingFactor integrating_factor(const Attenuation& att, const DomainGrid& grid, int N,
                                     const IntegratingFactorOptions& opts) {
  std::vector<Vec2> pts(grid.size());
  std::vector<std::uint8_t> active(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    pts[i] = grid.node(i);
    active[i] = grid.inside(i) ? 1 : 0;
  }
  return build_factor(att, grid.domain(), pts, &active, N, opts);
}

SeqField apply_expG(const SeqField& v, const IntegratingFactor& f, GaugeSign sign) {
  if (v.nodes() != f.points()) throw ArgumentError("apply_expG: point count mismatch");
  if (v.truncation() > f.truncation()) throw ArgumentError("apply_expG: sequence longer than the factor truncation");
  SeqField out(v.nodes(), v.truncation());
  const int L = v.length();
  const long count = static_cast<long>(v.nodes());
#pragma omp parallel for
  for (long p = 0; p < count; ++p) {
    const cplx* c = sign == GaugeSign::minus ? f.alpha(p) : f.beta(p);
    const cplx* in = v.row(p);
    cplx* o = out.row(p);
    for (int k = 0; k < L; ++k) {
      cplx s{};
      for (int m = 0; k + m < L; ++m) s += c[m] * in[k + m];
      o[k] = s;
    }
  }
  return out;
}

}  // namespace amrt
