#pragma once

#include <vector>

#include "amrt/forward.hpp"
#include "amrt/sequence.hpp"

namespace amrt {

struct IntegratingFactorOptions {
  int n_angles = 256;          // angular samples of H(z, .)
  double window_factor = 4.0;  // Hilbert window length in domain diameters
  int hilbert_samples = 4096;
  int pad_factor = 2;
  double h_ray = 1.0 / 64.0;   // step of the line integrals
  double spec_tol = 1e-3;
};

/// Ra(s, phi_j) = int a(s u_perp + t u) dt on the uniform s-grid of the Hilbert window.
struct RadonTable {
  double s0 = 0.0;
  double ds = 0.0;
  int samples = 0;
  int n_angles = 0;
  std::vector<double> values;  // values[j * samples + m]
  double phi(int j) const { return kTwoPi * j / n_angles; }
  double s(int m) const { return s0 + m * ds; }
};

RadonTable radon_of_a(const Attenuation& att, const Domain& domain, const IntegratingFactorOptions& opts = {});

/// (1/pi) p.v. int f(t)/(s-t) dt of uniformly sampled f, via the multiplier -i sign(xi)
/// on a zero-padded periodic extension. The leading periodisation error (moments of f
/// against the Taylor terms of the periodic cotangent kernel) is subtracted.
std::vector<double> hilbert_transform(const std::vector<double>& f, double ds, int pad_factor = 2);

/// Non-negative angular Fourier coefficients of exp(-H) (alpha) and exp(H) (beta) per point.
class IntegratingFactor {
 public:
  IntegratingFactor() = default;
  IntegratingFactor(std::size_t points, int N);

  static IntegratingFactor identity(std::size_t points, int N);

  std::size_t points() const { return points_; }
  int truncation() const { return N_; }
  cplx* alpha(std::size_t p) { return alpha_.data() + p * (N_ + 1); }
  const cplx* alpha(std::size_t p) const { return alpha_.data() + p * (N_ + 1); }
  cplx* beta(std::size_t p) { return beta_.data() + p * (N_ + 1); }
  const cplx* beta(std::size_t p) const { return beta_.data() + p * (N_ + 1); }

  /// Largest |negative-index coefficient| of exp(-H) or exp(H), relative to the zeroth.
  double negative_defect = 0.0;
  /// Largest |(alpha * beta)_n - delta_n|, n <= N.
  double convolution_defect = 0.0;
  /// Largest |exp(-H) exp(H) - 1| over the angular samples.
  double product_defect = 0.0;
  bool spectrum_ok(double spec_tol) const { return negative_defect <= spec_tol; }

 private:
  std::size_t points_ = 0;
  int N_ = 0;
  std::vector<cplx> alpha_, beta_;
};

/// H(z, u) = int_0^inf a(z + t u) dt - (1/2) Ra(z.u_perp, u) + (i/2) (Hilbert Ra)(z.u_perp, u).
std::vector<cplx> integrating_factor_samples(const Attenuation& att, const Domain& domain, Vec2 z,
                                             const RadonTable& ra, const RadonTable& hra, double h_ray);

IntegratingFactor integrating_factor(const Attenuation& att, const Domain& domain, const std::vector<Vec2>& points,
                                     int N, const IntegratingFactorOptions& opts = {});
/// Lattice version; outside nodes get the identity coefficients.
IntegratingFactor integrating_factor(const Attenuation& att, const DomainGrid& grid, int N,
                                     const IntegratingFactorOptions& opts = {});

/// Hilbert transform of every angle row of a Radon table.
RadonTable hilbert_rows(const RadonTable& ra, int pad_factor);

enum class GaugeSign { minus, plus };

/// (e^{-G} v)_{-k} = sum_m alpha_m v_{-k-m}, (e^{G} v)_{-k} = sum_m beta_m v_{-k-m}.
SeqField apply_expG(const SeqField& v, const IntegratingFactor& f, GaugeSign sign);

}  // namespace amrt
