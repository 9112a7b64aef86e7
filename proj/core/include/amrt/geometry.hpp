#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace amrt {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  cplx as_complex() const { return {x, y}; }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

/// u_phi = (cos phi, sin phi)
inline Vec2 direction(double phi) { return {std::cos(phi), std::sin(phi)}; }
/// u_phi^perp = (-sin phi, cos phi)
inline Vec2 perpendicular(double phi) { return {-std::sin(phi), std::cos(phi)}; }

/// Foot point of the line through x along u_phi: x - (x.u)u.
Vec2 project(Vec2 x, double phi);

/// A line through `base` along u_phi.
struct Ray {
  Vec2 base;
  double phi = 0.0;

  Vec2 dir() const { return direction(phi); }
  Vec2 foot() const { return project(base, phi); }
  /// Coordinate of the base point along the line, measured from the foot point.
  double offset() const { return base.dot(dir()); }
};

/// Distances from an interior point to the two boundary crossings of its line.
struct Chord {
  double tau_minus = 0.0;  // along -u_phi
  double tau_plus = 0.0;   // along +u_phi
  double length() const { return tau_minus + tau_plus; }
};

enum class BoundaryClass { incoming, outgoing, tangent };

inline constexpr double kTangentTol = 1e-9;

struct NearestBoundary {
  double theta = 0.0;
  double distance = 0.0;  // >= 0 inside, < 0 outside
};

/// Strictly convex domain with closed-form chords: a disk or an axis-aligned ellipse,
/// parametrised by gamma(theta) = (a cos theta, b sin theta).
class Domain {
 public:
  enum class Kind { disk, ellipse };

  static Domain disk(double radius = 1.0);
  static Domain ellipse(double a, double b);

  Kind kind() const { return kind_; }
  double semi_a() const { return a_; }
  double semi_b() const { return b_; }
  double half_width() const { return std::max(a_, b_); }
  double diameter() const { return 2.0 * std::max(a_, b_); }
  double perimeter() const;

  Vec2 boundary_point(double theta) const;
  /// gamma'(theta)
  Vec2 boundary_tangent(double theta) const;
  Vec2 outward_normal(double theta) const;
  /// Unit outward normal at (or near) the boundary point x.
  Vec2 outward_normal_at(Vec2 x) const;

  /// (x/a)^2 + (y/b)^2 - 1; negative inside.
  double level(Vec2 x) const;
  /// Half-width X(y) of the horizontal chord {|x| < X(y)} at height y; 0 when |y| >= b.
  double row_extent(double y) const;
  bool contains(Vec2 x, double tol = 1e-12) const { return level(x) <= tol; }

  Chord chord_times(Vec2 x, double phi) const;
  BoundaryClass classify_boundary(Vec2 x, double phi, double tol = kTangentTol) const;
  NearestBoundary nearest_boundary(Vec2 x) const;

 private:
  Domain(Kind kind, double a, double b);
  Kind kind_;
  double a_;
  double b_;
};

/// Cartesian lattice covering the bounding square of a domain, with inside mask,
/// boundary distances and area quadrature weights.
class DomainGrid {
 public:
  DomainGrid(const Domain& domain, int resolution);

  const Domain& domain() const { return domain_; }
  int resolution() const { return resolution_; }
  int nodes_per_axis() const { return resolution_ + 1; }
  std::size_t size() const { return static_cast<std::size_t>(nodes_per_axis()) * nodes_per_axis(); }
  double spacing() const { return h_; }
  double origin() const { return -domain_.half_width(); }

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nodes_per_axis() + i; }
  int column(std::size_t idx) const { return static_cast<int>(idx % nodes_per_axis()); }
  int row(std::size_t idx) const { return static_cast<int>(idx / nodes_per_axis()); }
  Vec2 node(int i, int j) const { return {origin() + i * h_, origin() + j * h_}; }
  Vec2 node(std::size_t idx) const { return node(column(idx), row(idx)); }

  bool inside(std::size_t idx) const { return inside_[idx] != 0; }
  bool inside(int i, int j) const {
    return i >= 0 && j >= 0 && i < nodes_per_axis() && j < nodes_per_axis() && inside_[index(i, j)] != 0;
  }
  /// Within one grid spacing of the boundary.
  bool near_boundary(std::size_t idx) const { return near_[idx] != 0; }
  double boundary_distance(std::size_t idx) const { return distance_[idx]; }
  /// Area quadrature weight: cut-cell area, with cell pieces of outside nodes moved to
  /// the nearest inside node.
  double area_weight(std::size_t idx) const { return weight_[idx]; }
  const std::vector<std::size_t>& inside_nodes() const { return inside_list_; }

  static constexpr std::size_t kNoDonor = static_cast<std::size_t>(-1);
  /// Area of the node's cell lying inside the domain (outside nodes included).
  double cell_area(std::size_t idx) const { return cell_area_[idx]; }
  /// First moment of that area about the node: integral of (zeta - node) dA.
  cplx cell_moment(std::size_t idx) const { return cell_moment_[idx]; }
  /// Second moments of that area: integrals of (zeta - node)^2 and |zeta - node|^2.
  cplx cell_moment2(std::size_t idx) const { return cell_moment2_[idx]; }
  double cell_spread(std::size_t idx) const { return cell_spread_[idx]; }
  /// Cell meets both the domain and its complement.
  bool is_cut(std::size_t idx) const { return cell_area_[idx] > 0.0 && cell_area_[idx] < h_ * h_; }
  /// Inside node supplying values for this node's cell: itself when inside, the nearest
  /// inside neighbour for outside nodes whose cell meets the domain, kNoDonor otherwise.
  std::size_t donor(std::size_t idx) const { return donor_[idx]; }
  /// Outside nodes whose cells meet the domain.
  const std::vector<std::size_t>& cut_outside_nodes() const { return cut_outside_; }

 private:
  Domain domain_;
  int resolution_;
  double h_;
  std::vector<std::uint8_t> inside_;
  std::vector<std::uint8_t> near_;
  std::vector<double> distance_;
  std::vector<double> weight_;
  std::vector<double> cell_area_;
  std::vector<cplx> cell_moment_;
  std::vector<cplx> cell_moment2_;
  std::vector<double> cell_spread_;
  std::vector<std::size_t> donor_;
  std::vector<std::size_t> inside_list_;
  std::vector<std::size_t> cut_outside_;
};

using RealGrid = std::vector<double>;
using ComplexGrid = std::vector<cplx>;

/// Bilinear interpolation of a lattice array; zero outside the lattice.
double bilinear(const DomainGrid& grid, const RealGrid& values, Vec2 x);

}  // namespace amrt
