#include "amrt/geometry.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <limits>

#include "amrt/errors.hpp"

namespace amrt {

Vec2 project(Vec2 x, double phi) {
  const Vec2 u = direction(phi);
  return x - u * x.dot(u);
}

Domain::Domain(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {
  if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("domain semi-axes must be positive");
}

Domain Domain::disk(double radius) { return Domain(Kind::disk, radius, radius); }

Domain Domain::ellipse(double a, double b) { return Domain(Kind::ellipse, a, b); }

double Domain::perimeter() const {
  if (kind_ == Kind::disk) return kTwoPi * a_;
  // Ramanujan's second approximation; only used for node-spacing heuristics.
  const double h = (a_ - b_) * (a_ - b_) / ((a_ + b_) * (a_ + b_));
  return kPi * (a_ + b_) * (1.0 + 3.0 * h / (10.0 + std::sqrt(4.0 - 3.0 * h)));
}

Vec2 Domain::boundary_point(double theta) const { return {a_ * std::cos(theta), b_ * std::sin(theta)}; }

Vec2 Domain::boundary_tangent(double theta) const { return {-a_ * std::sin(theta), b_ * std::cos(theta)}; }

Vec2 Domain::outward_normal(double theta) const {
  const Vec2 n{b_ * std::cos(theta), a_ * std::sin(theta)};
  return n * (1.0 / n.norm());
}

Vec2 Domain::outward_normal_at(Vec2 x) const {
  const Vec2 g{x.x / (a_ * a_), x.y / (b_ * b_)};
  const double len = g.norm();
  if (len == 0.0) return {1.0, 0.0};
  return g * (1.0 / len);
}

double Domain::level(Vec2 x) const { return (x.x * x.x) / (a_ * a_) + (x.y * x.y) / (b_ * b_) - 1.0; }

double Domain::row_extent(double y) const {
  const double t = 1.0 - (y * y) / (b_ * b_);
  return t > 0.0 ? a_ * std::sqrt(t) : 0.0;
}

namespace {

struct CellPiece {
  double area = 0.0;
  cplx moment{};
  cplx moment2{};
  double spread = 0.0;
};

// Exact area, first and second moments of [x0,x1]x[y0,y1] intersected with the domain: the x
// integrals are closed form, the y integrals use tanh-sinh on pieces split where the
// row extent crosses a cell edge.
CellPiece cut_cell(const Domain& dom, Vec2 c, double h) {
  const double x0 = c.x - 0.5 * h, x1 = c.x + 0.5 * h;
  const double y0 = c.y - 0.5 * h, y1 = c.y + 0.5 * h;
  std::vector<double> cuts{y0, y1};
  const double b = dom.semi_b();
  for (double yb : {-b, b})
    if (yb > y0 && yb < y1) cuts.push_back(yb);
  for (double x : {x0, x1}) {
    const double t = 1.0 - (x * x) / (dom.semi_a() * dom.semi_a());
    if (t <= 0.0) continue;
    for (double yb : {-b * std::sqrt(t), b * std::sqrt(t)})
      if (yb > y0 && yb < y1) cuts.push_back(yb);
  }
  std::sort(cuts.begin(), cuts.end());
  auto span = [&](double y) {
    const double X = dom.row_extent(y);
    return std::pair{std::max(x0, -X), std::min(x1, X)};
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  CellPiece out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    if (hi - lo <= 0.0) continue;
    // x-integrals of 1, (x - cx), (x - cx)^2 over the row
    auto row = [&](double y, int power) {
      const auto [xa, xb] = span(y);
      if (xb <= xa) return 0.0;
      const double l = xa - c.x, r = xb - c.x;
      if (power == 0) return r - l;
      if (power == 1) return 0.5 * (r * r - l * l);
      return (r * r * r - l * l * l) / 3.0;
    };
    auto integrate = [&](auto&& f) { return integrator.integrate(f, lo, hi); };
    const double i00 = integrate([&](double y) { return row(y, 0); });
    const double i10 = integrate([&](double y) { return row(y, 1); });
    const double i01 = integrate([&](double y) { return (y - c.y) * row(y, 0); });
    const double i20 = integrate([&](double y) { return row(y, 2); });
    const double i11 = integrate([&](double y) { return (y - c.y) * row(y, 1); });
    const double i02 = integrate([&](double y) { return (y - c.y) * (y - c.y) * row(y, 0); });
    out.area += i00;
    out.moment += cplx{i10, i01};
    out.moment2 += cplx{i20 - i02, 2.0 * i11};
    out.spread += i20 + i02;
  }
  return out;
}

}  // namespace

Chord Domain::chord_times(Vec2 x, double phi) const {
  const double c = level(x);
  if (c > 1e-10) throw DomainError("chord_times: point outside the domain");
  const Vec2 u = direction(phi);
  const double qa = u.x * u.x / (a_ * a_) + u.y * u.y / (b_ * b_);
  const double qb = 2.0 * (x.x * u.x / (a_ * a_) + x.y * u.y / (b_ * b_));
  const double qc = std::min(c, 0.0);
  const double disc = std::sqrt(std::max(qb * qb - 4.0 * qa * qc, 0.0));
  // Numerically stable pair of roots t1 <= 0 <= t2.
  double t_plus;
  double t_minus;
  if (qb >= 0.0) {
    const double q = -0.5 * (qb + disc);
    t_minus = q / qa;
    t_plus = (q != 0.0) ? qc / q : 0.0;
  } else {
    const double q = -0.5 * (qb - disc);
    t_plus = q / qa;
    t_minus = (q != 0.0) ? qc / q : 0.0;
  }
  return {std::max(-t_minus, 0.0), std::max(t_plus, 0.0)};
}

BoundaryClass Domain::classify_boundary(Vec2 x, double phi, double tol) const {
  const double s = direction(phi).dot(outward_normal_at(x));
  if (s > tol) return BoundaryClass::outgoing;
  if (s < -tol) return BoundaryClass::incoming;
  return BoundaryClass::tangent;
}

NearestBoundary Domain::nearest_boundary(Vec2 x) const {
  if (kind_ == Kind::disk) {
    const double r = x.norm();
    return {r > 0.0 ? std::atan2(x.y, x.x) : 0.0, a_ - r};
  }
  // Coarse scan followed by Newton on d/dtheta |gamma(theta) - x|^2 = 0.
  double best = 0.0;
  double best_d2 = std::numeric_limits<double>::max();
  constexpr int kScan = 64;
  for (int k = 0; k < kScan; ++k) {
    const double t = kTwoPi * k / kScan;
    const Vec2 d = boundary_point(t) - x;
    const double d2 = d.dot(d);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = t;
    }
  }
  double t = best;
  for (int it = 0; it < 30; ++it) {
    const Vec2 g = boundary_point(t);
    const Vec2 g1 = boundary_tangent(t);
    const Vec2 g2 = -g;  // gamma''
    const Vec2 d = g - x;
    const double f1 = d.dot(g1);
    const double f2 = g1.dot(g1) + d.dot(g2);
    if (f2 <= 0.0) break;
    const double step = f1 / f2;
    t -= step;
    if (std::abs(step) < 1e-15) break;
  }
  const double dist = (boundary_point(t) - x).norm();
  double wrapped = std::fmod(t, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  return {wrapped, level(x) <= 0.0 ? dist : -dist};
}

DomainGrid::DomainGrid(const Domain& domain, int resolution) : domain_(domain), resolution_(resolution) {
  if (resolution < 4) throw ConfigError("grid resolution must be at least 4");
  h_ = 2.0 * domain_.half_width() / resolution_;
  const std::size_t n = size();
  inside_.assign(n, 0);
  near_.assign(n, 0);
  distance_.assign(n, 0.0);
  weight_.assign(n, 0.0);
  cell_area_.assign(n, 0.0);
  donor_.assign(n, kNoDonor);

  cell_moment_.assign(n, cplx{});
  cell_moment2_.assign(n, cplx{});
  cell_spread_.assign(n, 0.0);
  std::vector<double> fraction(n, 0.0);
  const double half_diag = h_ * std::sqrt(0.5);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const Vec2 p = node(idx);
    const bool in = domain_.level(p) < 0.0;
    const double d = domain_.nearest_boundary(p).distance;
    inside_[idx] = in ? 1 : 0;
    distance_[idx] = d;
    near_[idx] = (in && d < h_) ? 1 : 0;
    if (d > half_diag) {
      fraction[idx] = 1.0;
    } else if (d >= -half_diag) {
      const CellPiece piece = cut_cell(domain_, p, h_);
      fraction[idx] = std::clamp(piece.area / (h_ * h_), 0.0, 1.0);
      cell_moment_[idx] = piece.moment;
      cell_moment2_[idx] = piece.moment2;
      cell_spread_[idx] = piece.spread;
    }
  }
  const double cell = h_ * h_;
  for (std::size_t idx = 0; idx < n; ++idx) {
    cell_area_[idx] = fraction[idx] * cell;
    if (inside_[idx]) {
      weight_[idx] += fraction[idx] * cell;
      donor_[idx] = idx;
      inside_list_.push_back(idx);
      continue;
    }
    if (fraction[idx] == 0.0) continue;
    const int i = column(idx);
    const int j = row(idx);
    double best = std::numeric_limits<double>::max();
    std::size_t target = idx;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        if (!inside(i + di, j + dj)) continue;
        const double dd = di * di + dj * dj;
        if (dd < best) {
          best = dd;
          target = index(i + di, j + dj);
        }
      }
    if (target != idx) {
      weight_[target] += fraction[idx] * cell;
      donor_[idx] = target;
      cut_outside_.push_back(idx);
    } else {
      cell_area_[idx] = 0.0;
      cell_moment_[idx] = {};
      cell_moment2_[idx] = {};
      cell_spread_[idx] = 0.0;
    }
  }
}

double bilinear(const DomainGrid& grid, const RealGrid& values, Vec2 x) {
  const double h = grid.spacing();
  const double fx = (x.x - grid.origin()) / h;
  const double fy = (x.y - grid.origin()) / h;
  const int last = grid.nodes_per_axis() - 1;
  if (fx < 0.0 || fy < 0.0 || fx > last || fy > last) return 0.0;
  int i = std::min(static_cast<int>(fx), last - 1);
  int j = std::min(static_cast<int>(fy), last - 1);
  const double tx = fx - i;
  const double ty = fy - j;
  const double v00 = values[grid.index(i, j)];
  const double v10 = values[grid.index(i + 1, j)];
  const double v01 = values[grid.index(i, j + 1)];
  const double v11 = values[grid.index(i + 1, j + 1)];
  return (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11);
}

}  // namespace amrt
