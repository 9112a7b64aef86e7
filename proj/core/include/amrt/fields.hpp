#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "amrt/geometry.hpp"

namespace amrt {

/// Vector field f = (f1, f2) and symmetric 2-tensor F = [[F11, F12], [F12, F22]]
/// sampled on a DomainGrid lattice.
struct FieldPair {
  RealGrid f1, f2, F11, F12, F22;
  double support_radius = 0.0;

  static FieldPair zeros(std::size_t n, double support_radius = 0.0);
  std::size_t size() const { return f1.size(); }
  std::array<RealGrid*, 5> arrays() { return {&f1, &f2, &F11, &F12, &F22}; }
  std::array<const RealGrid*, 5> arrays() const { return {&f1, &f2, &F11, &F12, &F22}; }
};

/// a*x + b*y, support radius taken from x.
FieldPair combine(double a, const FieldPair& x, double b, const FieldPair& y);

/// (F0 real, F1, F2 complex): F0 = (F11+F22)/2, F1 = (f1 + i f2)/2, F2 = (F11-F22)/4 + i F12/2.
struct ComplexComponents {
  RealGrid c0;
  ComplexGrid c1, c2;
};

ComplexComponents components_from_fields(const FieldPair& fp);
FieldPair fields_from_components(const ComplexComponents& cc, double support_radius = 0.0);

/// Point values of the five real components.
struct TensorSample {
  double f1 = 0.0, f2 = 0.0, F11 = 0.0, F12 = 0.0, F22 = 0.0;
};

/// f.u + <F, u (x) u>
inline double pairing(const TensorSample& s, Vec2 u) {
  return s.f1 * u.x + s.f2 * u.y + u.x * u.x * s.F11 + 2.0 * u.x * u.y * s.F12 + u.y * u.y * s.F22;
}

/// Same pairing written through the complex components:
/// F0 + 2 Re(conj(F2) e^{2i phi}) + 2 Re(conj(F1) e^{i phi}).
double pairing_from_components(double c0, cplx c1, cplx c2, double phi);

RealGrid direction_pairing(const FieldPair& fp, double phi);

using TensorSampler = std::function<TensorSample(Vec2)>;
using ScalarSampler = std::function<double(Vec2)>;

/// Bilinear sampler over the lattice arrays of a FieldPair.
TensorSampler grid_sampler(const DomainGrid& grid, const FieldPair& fp);

enum class Component : int { f1 = 0, f2, F11, F12, F22 };

const char* component_name(Component c);

struct GaussianBump {
  double amplitude = 1.0;
  Vec2 center;
  double width = 0.2;
};

/// Smooth radial cutoff: 1 at the origin, vanishing with all derivatives at `radius`.
double smooth_cutoff(double r, double radius);
double smooth_cutoff_derivative(double r, double radius);

/// Sum of Gaussian bumps times smooth_cutoff(|x|, support_radius).
struct ScalarSpec {
  double support_radius = 0.75;
  std::vector<GaussianBump> bumps;
};

class ScalarPhantom {
 public:
  explicit ScalarPhantom(ScalarSpec spec);
  double value(Vec2 x) const;
  Vec2 gradient(Vec2 x) const;
  const ScalarSpec& spec() const { return spec_; }
  RealGrid sample(const DomainGrid& grid) const;

 private:
  ScalarSpec spec_;
};

struct PhantomSpec {
  double support_radius = 0.75;
  std::array<std::vector<GaussianBump>, 5> bumps;  // indexed by Component
};

/// Analytic tensor phantom.
class Phantom {
 public:
  explicit Phantom(PhantomSpec spec);
  TensorSample operator()(Vec2 x) const;
  const PhantomSpec& spec() const { return spec_; }

 private:
  PhantomSpec spec_;
};

struct RandomPhantomOptions {
  double support_radius = 0.75;
  int bumps_per_component = 2;
  double center_radius = 0.3;
  double min_width = 0.16;
  double max_width = 0.24;
  double max_amplitude = 1.0;
};

PhantomSpec random_phantom_spec(std::uint64_t seed, const RandomPhantomOptions& opts = {});
ScalarSpec random_scalar_spec(std::uint64_t seed, const RandomPhantomOptions& opts = {});

/// Throws ConfigError for bumps centred outside the support disk or support reaching Gamma.
void validate(const PhantomSpec& spec, const Domain& domain);
void validate(const ScalarSpec& spec, const Domain& domain);

FieldPair make_phantom(const PhantomSpec& spec, const DomainGrid& grid);

/// Gradient field f = grad psi by central differences of psi on the lattice, F = 0.
FieldPair make_gradient_field(const ScalarSpec& psi, const DomainGrid& grid);

/// Exact gradient of psi as a tensor sampler (F = 0).
TensorSampler gradient_sampler(const ScalarSpec& psi);

/// Lattice samples of a tensor sampler.
FieldPair sample_fields(const TensorSampler& field, const DomainGrid& grid, double support_radius);

}  // namespace amrt
