#include "amrt/aanalytic.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>

#include "amrt/errors.hpp"
#include "amrt/fft.hpp"

namespace amrt {

namespace {

constexpr cplx kI{0.0, 1.0};

// One-dimensional derivative along a lattice line at (i, j) in direction (di, dj).
cplx axis_derivative(const ComplexGrid& f, const DomainGrid& g, int i, int j, int di, int dj) {
  const double h = g.spacing();
  auto in = [&](int s) { return g.inside(i + s * di, j + s * dj); };
  auto at = [&](int s) { return f[g.index(i + s * di, j + s * dj)]; };
  if (in(1) && in(-1)) return (at(1) - at(-1)) / (2.0 * h);
  if (in(1) && in(2)) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  if (in(-1) && in(-2)) return (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * h);
  if (in(1)) return (at(1) - at(0)) / h;
  if (in(-1)) return (at(0) - at(-1)) / h;
  return {};
}

// Boundary sequences and geometry refined by trigonometric interpolation in theta.
struct BoundaryLevel {
  int nodes = 0;
  double dtheta = 0.0;
  double max_step = 0.0;  // largest |gamma'| dtheta
  std::vector<cplx> zeta, dzeta;
  SeqField data;
};

BoundaryLevel make_level(const SeqField& boundary, const Domain& domain, int factor) {
  const int nb = static_cast<int>(boundary.nodes());
  const int L = boundary.length();
  BoundaryLevel lv;
  lv.nodes = nb * factor;
  lv.dtheta = kTwoPi / lv.nodes;
  lv.zeta.resize(lv.nodes);
  lv.dzeta.resize(lv.nodes);
  for (int q = 0; q < lv.nodes; ++q) {
    const double t = q * lv.dtheta;
    lv.zeta[q] = domain.boundary_point(t).as_complex();
    lv.dzeta[q] = domain.boundary_tangent(t).as_complex();
    lv.max_step = std::max(lv.max_step, std::abs(lv.dzeta[q]) * lv.dtheta);
  }
  if (factor == 1) {
    lv.data = boundary;
    return lv;
  }
  // Entry-major spectra, zero padded to the refined length.
  std::vector<cplx> coarse(static_cast<std::size_t>(L) * nb);
  for (int q = 0; q < nb; ++q)
    for (int n = 0; n < L; ++n) coarse[static_cast<std::size_t>(n) * nb + q] = boundary.at(q, n);
  fft::dft(coarse.data(), nb, L, fft::Direction::forward);
  const int M = lv.nodes;
  std::vector<cplx> fine(static_cast<std::size_t>(L) * M, cplx{});
  for (int n = 0; n < L; ++n) {
    const cplx* src = coarse.data() + static_cast<std::size_t>(n) * nb;
    cplx* dst = fine.data() + static_cast<std::size_t>(n) * M;
    const int half = nb / 2;
    for (int k = 0; k < half; ++k) dst[k] = src[k];
    for (int k = 1; k < half; ++k) dst[M - k] = src[nb - k];
    if (nb % 2 == 0) {
      dst[half] = 0.5 * src[half];
      dst[M - half] = 0.5 * src[half];
    } else {
      dst[half] = src[half];
      dst[M - half] = src[nb - half];
    }
  }
  fft::dft(fine.data(), M, L, fft::Direction::backward);
  lv.data = SeqField(M, L - 1);
  for (int q = 0; q < M; ++q)
    for (int n = 0; n < L; ++n) lv.data.at(q, n) = fine[static_cast<std::size_t>(n) * M + q] / static_cast<double>(nb);
  return lv;
}

struct CauchyEvaluator {
  const Domain& domain;
  std::vector<BoundaryLevel> levels;  // factors 1, 2, 4, ...

  CauchyEvaluator(const SeqField& boundary, const Domain& dom, int max_upsample) : domain(dom) {
    if (boundary.nodes() < 4) throw ArgumentError("bukhgeim_cauchy needs at least 4 boundary nodes");
    for (int f = 1; f <= std::max(1, max_upsample); f *= 2) levels.push_back(make_level(boundary, dom, f));
  }

  const BoundaryLevel& level_for(double dist) const {
    // trapezoid error for the Cauchy kernel decays like exp(-2 pi dist / step)
    for (const auto& lv : levels)
      if (lv.max_step <= 0.227 * dist) return lv;
    return levels.back();
  }

  void eval(Vec2 x, cplx* out) const {
    const double dist = domain.nearest_boundary(x).distance;
    if (!(dist > 0.0)) throw DomainError("bukhgeim_cauchy: target not interior");
    const BoundaryLevel& lv = level_for(dist);
    const int L = lv.data.length();
    const cplx z = x.as_complex();
    std::fill(out, out + L, cplx{});
    std::vector<cplx> S(L + 2, cplx{});
    for (int q = 0; q < lv.nodes; ++q) {
      const cplx d = lv.zeta[q] - z;
      const cplx kq = lv.dzeta[q] / d;
      const cplx c1 = kq * lv.dtheta / (2.0 * kPi * kI);
      const double c2 = kq.imag() * lv.dtheta / kPi;
      const cplx r = std::conj(d) / d;
      const cplx* w = lv.data.row(q);
      S[L] = S[L + 1] = cplx{};
      for (int k = L - 1; k >= 0; --k) {
        S[k] = (k + 2 < L) ? r * (w[k + 2] + S[k + 2]) : cplx{};
        out[k] += c1 * w[k] + c2 * S[k];
      }
    }
  }
};

}  // namespace

CRDerivatives cr_derivatives(const ComplexGrid& f, const DomainGrid& grid) {
  if (f.size() != grid.size()) throw ArgumentError("cr_derivatives: size mismatch");
  CRDerivatives out{ComplexGrid(f.size()), ComplexGrid(f.size())};
  const int n = grid.nodes_per_axis();
#pragma omp parallel for
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const std::size_t idx = grid.index(i, j);
      if (!grid.inside(idx)) continue;
      const cplx dx = axis_derivative(f, grid, i, j, 1, 0);
      const cplx dy = axis_derivative(f, grid, i, j, 0, 1);
      out.dbar[idx] = 0.5 * (dx + kI * dy);
      out.d[idx] = 0.5 * (dx - kI * dy);
    }
  return out;
}

SeqField bukhgeim_cauchy(const SeqField& boundary, const Domain& domain, const std::vector<Vec2>& targets,
                         int max_upsample) {
  const CauchyEvaluator ev(boundary, domain, max_upsample);
  SeqField out(targets.size(), boundary.truncation());
  const long count = static_cast<long>(targets.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long t = 0; t < count; ++t) ev.eval(targets[t], out.row(t));
  return out;
}

SeqField bukhgeim_cauchy(const SeqField& boundary, const DomainGrid& grid, const CauchyOptions& opts) {
  const Domain& domain = grid.domain();
  const double near = opts.near_dist > 0.0 ? opts.near_dist : 2.0 * grid.spacing();
  const CauchyEvaluator ev(boundary, domain, opts.max_upsample);
  const int L = boundary.length();
  SeqField out(grid.size(), boundary.truncation());
  const auto& nodes = grid.inside_nodes();
  const long count = static_cast<long>(nodes.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long t = 0; t < count; ++t) {
    const std::size_t idx = nodes[t];
    const Vec2 x = grid.node(idx);
    const NearestBoundary nb = domain.nearest_boundary(x);
    if (nb.distance >= near) {
      ev.eval(x, out.row(idx));
      continue;
    }
    // quadratic extrapolation in the distance variable from three interior points
    const Vec2 foot = domain.boundary_point(nb.theta);
    const Vec2 inward = -domain.outward_normal(nb.theta);
    std::vector<cplx> vals(3 * static_cast<std::size_t>(L));
    const double t1 = near, t2 = 2.0 * near, t3 = 3.0 * near;
    for (int m = 0; m < 3; ++m) ev.eval(foot + inward * (near * (m + 1)), vals.data() + m * L);
    const double s = nb.distance;
    const double l1 = (s - t2) * (s - t3) / ((t1 - t2) * (t1 - t3));
    const double l2 = (s - t1) * (s - t3) / ((t2 - t1) * (t2 - t3));
    const double l3 = (s - t1) * (s - t2) / ((t3 - t1) * (t3 - t2));
    cplx* o = out.row(idx);
    for (int k = 0; k < L; ++k) o[k] = l1 * vals[k] + l2 * vals[L + k] + l3 * vals[2 * L + k];
  }
  return out;
}

namespace {

// conj(d)^j / d^(j+1) for j = 0..J-1
void pompeiu_kernels(cplx d, int J, cplx* out) {
  const cplx r = std::conj(d) / d;
  cplx v = 1.0 / d;
  for (int j = 0; j < J; ++j) {
    out[j] = v;
    v *= r;
  }
}

// Length of the ray z + r(cos t, sin t), r >= 0, inside [x0,x1]x[y0,y1] and, when given,
// the domain.
double ray_length(const Domain* dom, Vec2 z, double t, double x0, double x1, double y0, double y1) {
  const double ux = std::cos(t), uy = std::sin(t);
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  auto slab = [&](double p, double u, double a, double b) {
    if (std::abs(u) < 1e-300) {
      if (p < a || p > b) hi = -1.0;
      return;
    }
    double r0 = (a - p) / u, r1 = (b - p) / u;
    if (r0 > r1) std::swap(r0, r1);
    lo = std::max(lo, r0);
    hi = std::min(hi, r1);
  };
  slab(z.x, ux, x0, x1);
  slab(z.y, uy, y0, y1);
  if (dom != nullptr) {
    const double ia = 1.0 / (dom->semi_a() * dom->semi_a()), ib = 1.0 / (dom->semi_b() * dom->semi_b());
    const double qa = ux * ux * ia + uy * uy * ib;
    const double qb = 2.0 * (z.x * ux * ia + z.y * uy * ib);
    const double qc = z.x * z.x * ia + z.y * z.y * ib - 1.0;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc <= 0.0) return 0.0;
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (qb + std::copysign(sq, qb));
    double r0 = q / qa, r1 = (q != 0.0) ? qc / q : r0;
    if (r0 > r1) std::swap(r0, r1);
    lo = std::max(lo, r0);
    hi = std::min(hi, r1);
  }
  return std::max(hi - lo, 0.0);
}

// acc[j] = integral over the square of side s centred at c (clipped to dom when given) of
// conj(d)^j / d^(j+1), d = zeta - z. In polar coordinates about z this is the angular
// integral of exp(-i(2j+1)t) times the radial chord length, which is smooth between the
// directions of the corners and of the points where Gamma crosses the square's edges.
void square_kernel_integrals(const Domain* dom, Vec2 c, double s, Vec2 z, std::vector<cplx>& acc) {
  const double x0 = c.x - 0.5 * s, x1 = c.x + 0.5 * s, y0 = c.y - 0.5 * s, y1 = c.y + 0.5 * s;
  std::vector<double> angles;
  auto add = [&](Vec2 p) {
    double t = std::atan2(p.y - z.y, p.x - z.x);
    if (t < 0.0) t += kTwoPi;
    angles.push_back(t);
  };
  for (double x : {x0, x1})
    for (double y : {y0, y1}) add({x, y});
  if (dom != nullptr) {
    for (double x : {x0, x1}) {
      const double t = 1.0 - x * x / (dom->semi_a() * dom->semi_a());
      if (t <= 0.0) continue;
      const double yb = dom->semi_b() * std::sqrt(t);
      for (double y : {-yb, yb})
        if (y > y0 && y < y1) add({x, y});
    }
    for (double y : {y0, y1}) {
      const double xb = dom->row_extent(y);
      for (double x : {-xb, xb})
        if (xb > 0.0 && x > x0 && x < x1) add({x, y});
    }
  }
  std::sort(angles.begin(), angles.end());
  angles.push_back(angles.front() + kTwoPi);
  using Rule = boost::math::quadrature::gauss<double, 30>;
  const auto& xs = Rule::abscissa();
  const auto& ws = Rule::weights();
  std::fill(acc.begin(), acc.end(), cplx{});
  const int J = static_cast<int>(acc.size());
  auto eval = [&](double t, double w) {
    const double len = ray_length(dom, z, t, x0, x1, y0, y1);
    if (len <= 0.0) return;
    const cplx step = std::polar(1.0, -2.0 * t);
    cplx e = std::polar(w * len, -t);
    for (int j = 0; j < J; ++j) {
      acc[j] += e;
      e *= step;
    }
  };
  constexpr double kMaxPiece = 0.5;
  for (std::size_t k = 0; k + 1 < angles.size(); ++k) {
    const double a = angles[k], b = angles[k + 1];
    if (b - a <= 0.0) continue;
    const int parts = static_cast<int>(std::ceil((b - a) / kMaxPiece));
    const double len = (b - a) / parts;
    for (int part = 0; part < parts; ++part) {
      const double mid = a + (part + 0.5) * len, half = 0.5 * len;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        eval(mid + half * xs[i], half * ws[i]);
        if (xs[i] != 0.0) eval(mid - half * xs[i], half * ws[i]);
      }
    }
  }
}

// Cut cells within this many lattice steps of a target are integrated exactly.
constexpr int kReach = 3;

// Cell-averaged kernel: exact full-cell averages for offsets within kReach (zero for the
// target's own cell by symmetry), point values beyond.
class CellKernel {
 public:
  CellKernel(double h, int J) : h_(h), J_(J), table_((2 * kReach + 1) * (2 * kReach + 1) * J) {
    std::vector<cplx> acc(J);
    for (int my = -kReach; my <= kReach; ++my)
      for (int mx = -kReach; mx <= kReach; ++mx) {
        if (mx == 0 && my == 0) continue;
        square_kernel_integrals(nullptr, {static_cast<double>(mx), static_cast<double>(my)}, 1.0, {0.0, 0.0}, acc);
        std::copy(acc.begin(), acc.end(), table_.begin() + slot(mx, my));
      }
  }

  // Average over the cell at offset (mx, my) of the kernels j = 0..J-1.
  void operator()(int mx, int my, cplx* out) const {
    if (std::abs(mx) <= kReach && std::abs(my) <= kReach) {
      for (int j = 0; j < J_; ++j) out[j] = table_[slot(mx, my) + j] / h_;
      return;
    }
    pompeiu_kernels(cplx{mx * h_, my * h_}, J_, out);
  }

 private:
  std::size_t slot(int mx, int my) const {
    return static_cast<std::size_t>((my + kReach) * (2 * kReach + 1) + mx + kReach) * J_;
  }
  double h_;
  int J_;
  std::vector<cplx> table_;
};

// Cell integrals are expanded about the node: the area times the cell-averaged kernel, then
// moment families of the cut cells paired with kernel derivatives,
//   1: m d, 2: conj(m) dbar, 3: m2 d^2 / 2, 4: conj(m2) dbar^2 / 2, 5: s d dbar,
// with m, m2, s the first moment, second moment and spread of the inside part.
constexpr int kFamilies = 6;

cplx family_density(const DomainGrid& grid, int f, std::size_t q) {
  if (f == 0) return grid.cell_area(q);
  if (!grid.is_cut(q)) return {};
  switch (f) {
    case 1: return grid.cell_moment(q);
    case 2: return std::conj(grid.cell_moment(q));
    case 3: return grid.cell_moment2(q);
    case 4: return std::conj(grid.cell_moment2(q));
    default: return grid.cell_spread(q);
  }
}

// Kernel of family f >= 1 at d != 0, given K[j] = conj(d)^j / d^(j+1).
cplx family_kernel(int f, cplx d, int j, const cplx* K) {
  const double jj = j;
  switch (f) {
    case 1: return -(jj + 1.0) * K[j] / d;
    case 2: return j >= 1 ? jj * K[j - 1] / d : cplx{};
    case 3: return 0.5 * (jj + 1.0) * (jj + 2.0) * K[j] / (d * d);
    case 4: return j >= 2 ? 0.5 * jj * (jj - 1.0) * K[j - 2] / (d * d) : cplx{};
    default: return j >= 1 ? -jj * (jj + 1.0) * K[j - 1] / (d * d) : cplx{};
  }
}

// Lattice weight of source cell q for offset (mx, my), all families combined.
void lattice_weights(const DomainGrid& grid, const CellKernel& cell, std::size_t q, int mx, int my, int J,
                     cplx* out) {
  if (mx == 0 && my == 0) {
    std::fill(out, out + J, cplx{});
    return;
  }
  cell(mx, my, out);
  const double area = grid.cell_area(q);
  for (int j = 0; j < J; ++j) out[j] *= area;
  if (!grid.is_cut(q)) return;
  const cplx d{mx * grid.spacing(), my * grid.spacing()};
  std::vector<cplx> K(J);
  pompeiu_kernels(d, J, K.data());
  for (int f = 1; f < kFamilies; ++f) {
    const cplx w = family_density(grid, f, q);
    for (int j = 0; j < J; ++j) out[j] += w * family_kernel(f, d, j, K.data());
  }
}

struct CutCorrection {
  std::size_t target;
  std::size_t source;  // donor node of the cut cell
  int j;
  cplx weight;
};

// For each inside target and each cut cell within kReach lattice steps, replace the lattice
// weight by the exact integral over the cell's inside part.
std::vector<CutCorrection> cut_cell_corrections(const DomainGrid& grid, const CellKernel& cell, int J) {
  const double hs = grid.spacing();
  const int n = grid.nodes_per_axis();
  std::vector<CutCorrection> out;
  std::vector<cplx> acc(J), lattice(J);
  for (std::size_t p : grid.inside_nodes()) {
    if (grid.boundary_distance(p) >= (kReach + 2) * hs) continue;
    const int pi = grid.column(p), pj = grid.row(p);
    const Vec2 z = grid.node(p);
    for (int dj = -kReach; dj <= kReach; ++dj)
      for (int di = -kReach; di <= kReach; ++di) {
        const int qi = pi + di, qj = pj + dj;
        if (qi < 0 || qj < 0 || qi >= n || qj >= n) continue;
        const std::size_t q = grid.index(qi, qj);
        if (!grid.is_cut(q) || grid.donor(q) == DomainGrid::kNoDonor) continue;
        square_kernel_integrals(&grid.domain(), grid.node(q), hs, z, acc);
        lattice_weights(grid, cell, q, di, dj, J, lattice.data());
        for (int j = 0; j < J; ++j) out.push_back({p, grid.donor(q), j, acc[j] - lattice[j]});
      }
  }
  return out;
}

void apply_corrections(const std::vector<CutCorrection>& corr, const SeqField& h, SeqField& out) {
  const int L = h.length();
  for (const auto& c : corr)
    for (int k = 0; k + 2 * c.j < L; ++k)
      out.at(c.target, k) += (-1.0 / kPi) * c.weight * h.at(c.source, k + 2 * c.j);
}

}  // namespace

SeqField pompeiu(const SeqField& h, const DomainGrid& grid) {
  if (h.nodes() != grid.size()) throw ArgumentError("pompeiu: size mismatch");
  const int n = grid.nodes_per_axis();
  const int P = fft::smooth_size(2 * n - 1);
  const std::size_t PP = static_cast<std::size_t>(P) * P;
  const int L = h.length();
  const int J = (L - 1) / 2 + 1;
  const double hs = grid.spacing();
  auto pos_of = [&](std::size_t idx) { return static_cast<std::size_t>(grid.row(idx)) * P + grid.column(idx); };

  std::vector<std::size_t> sources = grid.inside_nodes();
  sources.insert(sources.end(), grid.cut_outside_nodes().begin(), grid.cut_outside_nodes().end());

  // Per family: densities w_f(q) h(donor(q)) and correlation kernels Gc(m) = G_f(-m h),
  // accumulated in Fourier space so only one family is held at a time.
  const CellKernel cell(hs, J);
  std::vector<cplx> H(PP * L), K(PP * J), A(PP * L, cplx{});
  for (int f = 0; f < kFamilies; ++f) {
    std::fill(H.begin(), H.end(), cplx{});
    for (std::size_t q : sources) {
      const cplx w = family_density(grid, f, q);
      if (w == cplx{}) continue;
      const std::size_t src = grid.donor(q);
      for (int m = 0; m < L; ++m) H[m * PP + pos_of(q)] = w * h.at(src, m);
    }
    std::fill(K.begin(), K.end(), cplx{});
#pragma omp parallel
    {
      std::vector<cplx> Kd(J);
#pragma omp for
      for (int my = -(n - 1); my <= n - 1; ++my)
        for (int mx = -(n - 1); mx <= n - 1; ++mx) {
          if (mx == 0 && my == 0) continue;
          const std::size_t pos = static_cast<std::size_t>((my + P) % P) * P + (mx + P) % P;
          if (f == 0) {
            cell(-mx, -my, Kd.data());
            for (int j = 0; j < J; ++j) K[j * PP + pos] = Kd[j];
            continue;
          }
          const cplx d{-mx * hs, -my * hs};
          pompeiu_kernels(d, J, Kd.data());
          for (int j = 0; j < J; ++j) K[j * PP + pos] = family_kernel(f, d, j, Kd.data());
        }
    }
#pragma omp parallel for
    for (int m = 0; m < L; ++m) fft::dft2(H.data() + m * PP, P, P, fft::Direction::forward);
#pragma omp parallel for
    for (int j = 0; j < J; ++j) fft::dft2(K.data() + j * PP, P, P, fft::Direction::forward);
#pragma omp parallel for
    for (int k = 0; k < L; ++k) {
      cplx* acc = A.data() + k * PP;
      for (int j = 0; k + 2 * j < L; ++j) {
        const cplx* kj = K.data() + j * PP;
        const cplx* hm = H.data() + (k + 2 * j) * PP;
        for (std::size_t s = 0; s < PP; ++s) acc[s] += kj[s] * hm[s];
      }
    }
  }

  SeqField out(h.nodes(), h.truncation());
  const double scale = -1.0 / (kPi * static_cast<double>(PP));
#pragma omp parallel for
  for (int k = 0; k < L; ++k) {
    cplx* acc = A.data() + k * PP;
    fft::dft2(acc, P, P, fft::Direction::backward);
    for (std::size_t idx : grid.inside_nodes()) out.at(idx, k) = scale * acc[pos_of(idx)];
  }
  apply_corrections(cut_cell_corrections(grid, cell, J), h, out);
  return out;
}

SeqField pompeiu_direct(const SeqField& h, const DomainGrid& grid) {
  if (h.nodes() != grid.size()) throw ArgumentError("pompeiu_direct: size mismatch");
  const int L = h.length();
  const int J = (L - 1) / 2 + 1;
  const CellKernel cell(grid.spacing(), J);
  const auto& nodes = grid.inside_nodes();
  SeqField out(h.nodes(), h.truncation());
  const long count = static_cast<long>(nodes.size());
#pragma omp parallel
  {
    std::vector<cplx> kern(J);
#pragma omp for schedule(dynamic, 8)
    for (long t = 0; t < count; ++t) {
      const std::size_t p = nodes[t];
      const int pi = grid.column(p), pj = grid.row(p);
      cplx* o = out.row(p);
      auto accumulate = [&](std::size_t q) {
        const int mx = grid.column(q) - pi, my = grid.row(q) - pj;
        if (mx == 0 && my == 0) return;
        lattice_weights(grid, cell, q, mx, my, J, kern.data());
        const std::size_t src = grid.donor(q);
        for (int j = 0; j < J; ++j)
          for (int k = 0; k + 2 * j < L; ++k) o[k] += kern[j] * h.at(src, k + 2 * j);
      };
      for (std::size_t q : nodes) accumulate(q);
      for (std::size_t q : grid.cut_outside_nodes()) accumulate(q);
      for (int k = 0; k < L; ++k) o[k] *= -1.0 / kPi;
    }
  }
  apply_corrections(cut_cell_corrections(grid, cell, J), h, out);
  return out;
}

SeqField solve_homogeneous(const SeqField& boundary, const DomainGrid& grid, const CauchyOptions& opts) {
  return bukhgeim_cauchy(boundary, grid, opts);
}

SeqField solve_inhomogeneous(const SeqField& boundary, const SeqField& h, const DomainGrid& grid,
                             const CauchyOptions& opts) {
  return add(bukhgeim_cauchy(boundary, grid, opts), pompeiu(h, grid));
}

CascadeResult cascade(const std::array<SeqField, 3>& g, const DomainGrid& grid, const CauchyOptions& opts) {
  const int N = g[0].truncation();
  if (g[1].truncation() != N || g[2].truncation() != N) throw ArgumentError("cascade: truncation mismatch");
  if (N < 3) throw ArgumentError("cascade needs truncation N >= 3");
  CascadeResult r;
  r.L2w0 = solve_homogeneous(left_shift(g[0], 2), grid, opts);
  r.Lw1 = solve_inhomogeneous(left_shift(g[1], 1), r.L2w0, grid, opts);
  r.w2 = solve_inhomogeneous(g[2], r.Lw1, grid, opts);
  return r;
}

namespace {

ComplexGrid conj_grid(const ComplexGrid& f) {
  ComplexGrid out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::conj(f[i]);
  return out;
}

// dbar conj(f) + d f
ComplexGrid real_pair(const ComplexGrid& f, const DomainGrid& grid) {
  const ComplexGrid a = cr_derivatives(conj_grid(f), grid).dbar;
  const ComplexGrid b = cr_derivatives(f, grid).d;
  ComplexGrid out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

// dbar f + d g
ComplexGrid mixed_pair(const ComplexGrid& f, const ComplexGrid& g, const DomainGrid& grid) {
  const ComplexGrid a = cr_derivatives(f, grid).dbar;
  const ComplexGrid b = cr_derivatives(g, grid).d;
  ComplexGrid out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

void add_scaled(ComplexGrid& out, const RealGrid* a, const ComplexGrid& f) {
  if (!a) return;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += (*a)[i] * f[i];
}

}  // namespace

LowModes recover_low_modes(const SeqField& Lw1, const SeqField& w2, const DomainGrid& grid, const RealGrid* a) {
  if (Lw1.truncation() < 1 || w2.truncation() < 1) throw ArgumentError("recover_low_modes: sequences too short");
  if (a && a->size() != grid.size()) throw ArgumentError("recover_low_modes: attenuation size mismatch");
  LowModes lm;
  lm.v1_0 = real_pair(w2.entry(1), grid);
  add_scaled(lm.v1_0, a, w2.entry(0));
  const ComplexGrid v1_m1 = Lw1.entry(0);
  lm.v0_0 = real_pair(v1_m1, grid);
  add_scaled(lm.v0_0, a, lm.v1_0);
  lm.v0_m1 = mixed_pair(lm.v1_0, Lw1.entry(1), grid);
  add_scaled(lm.v0_m1, a, v1_m1);
  return lm;
}

SeqField prepend(const ComplexGrid& e0, const SeqField& tail) {
  if (e0.size() != tail.nodes()) throw ArgumentError("prepend: size mismatch");
  SeqField out(tail.nodes(), tail.truncation() + 1);
  for (std::size_t i = 0; i < tail.nodes(); ++i) {
    out.at(i, 0) = e0[i];
    std::copy(tail.row(i), tail.row(i) + tail.length(), out.row(i) + 1);
  }
  return out;
}

SeqField prepend(const ComplexGrid& e0, const ComplexGrid& e1, const SeqField& tail) {
  return prepend(e0, prepend(e1, tail));
}

ComplexComponents recover_components(const SeqField& w0, const DomainGrid& grid, const RealGrid* a) {
  if (w0.truncation() < 3) throw ArgumentError("recover_components: entries 0..3 required");
  const ComplexGrid e0 = w0.entry(0), e1 = w0.entry(1), e2 = w0.entry(2), e3 = w0.entry(3);
  const std::size_t n = grid.size();
  ComplexComponents cc{RealGrid(n, 0.0), ComplexGrid(n), ComplexGrid(n)};
  const ComplexGrid d1 = cr_derivatives(e1, grid).d;
  cc.c1 = mixed_pair(e0, e2, grid);
  add_scaled(cc.c1, a, e1);
  cc.c2 = mixed_pair(e1, e3, grid);
  add_scaled(cc.c2, a, e2);
  for (std::size_t i = 0; i < n; ++i) cc.c0[i] = 2.0 * d1[i].real() + (a ? (*a)[i] * e0[i].real() : 0.0);
  return cc;
}

double beltrami_residual(const SeqField& w, const SeqField* rhs, const DomainGrid& grid, double min_dist,
                         const RealGrid* a) {
  const int L = w.length();
  std::vector<CRDerivatives> der;
  der.reserve(L);
  for (int k = 0; k < L; ++k) der.push_back(cr_derivatives(w.entry(k), grid));
  double sum = 0.0;
  for (std::size_t idx : grid.inside_nodes()) {
    if (grid.boundary_distance(idx) < min_dist) continue;
    for (int k = 0; k < L; ++k) {
      cplx r = der[k].dbar[idx];
      if (k + 2 < L) r += der[k + 2].d[idx];
      if (a && k + 1 < L) r += (*a)[idx] * w.at(idx, k + 1);
      if (rhs && k < rhs->length()) r -= rhs->at(idx, k);
      sum += std::norm(r);
    }
  }
  return std::sqrt(sum * grid.spacing() * grid.spacing());
}

}  // namespace amrt
