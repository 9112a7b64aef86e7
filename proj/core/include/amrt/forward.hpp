#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "amrt/fields.hpp"
#include "amrt/geometry.hpp"

namespace amrt {

/// Non-negative attenuation coefficient, extended by zero outside the domain.
class Attenuation {
 public:
  Attenuation() = default;

  static Attenuation none() { return {}; }
  /// Analytic bump attenuation; amplitudes must be non-negative.
  static Attenuation from_spec(const ScalarSpec& spec, const Domain& domain);
  /// Bilinear interpolation of lattice samples (copied).
  static Attenuation from_grid(const DomainGrid& grid, RealGrid values);

  bool is_zero() const { return !sampler_; }
  double operator()(Vec2 x) const;
  /// Lattice samples (zero outside the domain).
  RealGrid sample(const DomainGrid& grid) const;

 private:
  std::shared_ptr<const Domain> domain_;
  ScalarSampler sampler_;
};

/// Boundary nodes theta_i = 2 pi i / n_boundary and directions phi_j = 2 pi j / n_angles.
struct SinogramLayout {
  Domain domain = Domain::disk();
  int n_boundary = 256;
  int n_angles = 256;

  double theta(int i) const { return kTwoPi * i / n_boundary; }
  double phi(int j) const { return kTwoPi * j / n_angles; }
  Vec2 point(int i) const { return domain.boundary_point(theta(i)); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_angles + j; }
  std::size_t size() const { return static_cast<std::size_t>(n_boundary) * n_angles; }
  /// 1 where (point(i), phi(j)) is outgoing, 0 for incoming or tangent pairs.
  std::vector<std::uint8_t> outgoing_mask() const;
};

/// M^(k), k = 0,1,2, at outgoing (boundary node, direction) pairs; zero elsewhere.
struct MomentSinogram {
  SinogramLayout layout;
  std::array<RealGrid, 3> layers;  // layers[k][layout.index(i,j)]; empty when absent
  std::vector<std::uint8_t> outgoing;
  double h_ray = 0.0;

  static MomentSinogram zeros(const SinogramLayout& layout);
  bool complete() const;
};

struct ForwardOptions {
  int n_boundary = 256;
  int n_angles = 256;
  double h_ray = 1.0 / 128.0;
};

/// int_s^inf a(foot + t u) dt, truncated at the chord exit.
double attenuation_tail(const Attenuation& att, const Domain& domain, const Ray& ray, double s, double h_ray);

/// The three moments int s^k F(foot + s u) exp(-int_s^inf a) ds along the line through
/// ray.base (inside or on the boundary), s measured from the foot point.
std::array<double, 3> ray_moments(const TensorSampler& field, const Attenuation& att, const Domain& domain,
                                  const Ray& ray, double h_ray);

MomentSinogram forward_all(const TensorSampler& field, const Attenuation& att, const Domain& domain,
                           const ForwardOptions& opts);
/// Uses bilinear interpolation of the lattice fields and h_ray = h_grid / 2.
MomentSinogram forward_all(const FieldPair& fp, const DomainGrid& grid, const Attenuation& att, int n_boundary,
                           int n_angles);

/// Single layer k of forward_all.
RealGrid moment_transform(const TensorSampler& field, const Attenuation& att, const Domain& domain,
                          const ForwardOptions& opts, int k);

/// Adds Gaussian noise with standard deviation level * rms(layer) to each outgoing entry.
void add_noise(MomentSinogram& ms, double level, std::uint64_t seed);

}  // namespace amrt
