#pragma once

#include <array>
#include <complex>
#include <functional>

#include "amrt/fields.hpp"
#include "amrt/geometry.hpp"
#include "amrt/sequence.hpp"

namespace amrt::oracle {

using cplx = std::complex<double>;

struct OracleConfig {
  /// Refinement relative to the main pipeline; sets the adaptive subdivision depth.
  int refinement = 8;
  /// Half-width of the band around the singular point of 1-D p.v. integrals where the
  /// subtracted integrand is replaced by its limit.
  double pv_exclusion = 1e-7;
  double rel_tol = 1e-11;

  void validate() const;
};

/// Tensor phantom and attenuation evaluated from their specs with independent formulas.
std::array<double, 5> phantom_value(const PhantomSpec& spec, double x, double y);
double scalar_value(const ScalarSpec& spec, double x, double y);

/// Attenuated moment of order k of the line {foot + s u}, u = (cos phi, sin phi), through
/// (x, y): int s^k <F, u> exp(-int_s^inf a) ds with s measured from the foot point.
/// `att` may be null for a = 0.
double oracle_moment(const PhantomSpec& spec, const ScalarSpec* att, int k, const Domain& domain, double x, double y,
                     double phi, const OracleConfig& cfg = {});

/// int_Omega h(zeta) (1/(zeta-z)) (conj(zeta-z)/(zeta-z))^j dA in polar coordinates about z.
cplx oracle_area_integral(const std::function<cplx(double, double)>& h, int j, const Domain& domain, cplx z,
                          const OracleConfig& cfg = {});

/// (1/pi) p.v. int_a^b f(t) / (s - t) dt.
double oracle_hilbert(const std::function<double(double)>& f, double a, double b, double s,
                      const OracleConfig& cfg = {});

/// RMS residuals of the transport system on lattice nodes at least `margin` from Gamma:
/// level k checks dbar v^k_{-m} + d v^k_{-m-2} + a v^k_{-m-1} = rhs_{-m-1} for m >= 0 and the
/// real mode-0 equation 2 Re d v^k_{-1} + a v^k_0 = rhs_0, with rhs = F for k = 0 and v^{k-1}
/// otherwise. `a` may be null.
std::array<double, 3> transport_residual(const std::array<const SeqField*, 3>& v, const ComplexComponents& F,
                                         const RealGrid* a, const DomainGrid& grid, double margin);

}  // namespace amrt::oracle
