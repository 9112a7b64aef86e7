#pragma once

#include <array>
#include <vector>

#include "amrt/fields.hpp"
#include "amrt/geometry.hpp"
#include "amrt/sequence.hpp"

namespace amrt {

/// dbar = (d/dx + i d/dy)/2 and d = (d/dx - i d/dy)/2 on inside nodes.
struct CRDerivatives {
  ComplexGrid dbar;
  ComplexGrid d;
};

/// Second-order central differences, second-order one-sided where a neighbour is outside
/// (first-order if only one inside neighbour exists). Zero at outside nodes.
CRDerivatives cr_derivatives(const ComplexGrid& f, const DomainGrid& grid);

struct CauchyOptions {
  /// Grid targets closer than this to Gamma are filled by quadratic extrapolation along
  /// the inward normal; <= 0 selects 2 h_grid.
  double near_dist = 0.0;
  /// Largest boundary refinement factor (power of two) used for targets close to Gamma.
  int max_upsample = 16;
};

/// Bukhgeim-Cauchy operator applied to boundary sequences on the uniform theta-grid,
/// evaluated at arbitrary interior points.
SeqField bukhgeim_cauchy(const SeqField& boundary, const Domain& domain, const std::vector<Vec2>& targets,
                         int max_upsample = 16);
/// Same, evaluated on the inside lattice nodes (zero outside).
SeqField bukhgeim_cauchy(const SeqField& boundary, const DomainGrid& grid, const CauchyOptions& opts = {});

/// Pompeiu-like operator by FFT convolution of the area-weighted densities with the
/// translation-invariant kernels (1/d)(conj(d)/d)^j.
SeqField pompeiu(const SeqField& h, const DomainGrid& grid);
/// The same discrete sum evaluated by a direct double loop.
SeqField pompeiu_direct(const SeqField& h, const DomainGrid& grid);

SeqField solve_homogeneous(const SeqField& boundary, const DomainGrid& grid, const CauchyOptions& opts = {});
/// B[boundary] + T h, padded to the longer truncation.
SeqField solve_inhomogeneous(const SeqField& boundary, const SeqField& h, const DomainGrid& grid,
                             const CauchyOptions& opts = {});

struct CascadeResult {
  SeqField L2w0;  // (w0_-2, w0_-3, ...)
  SeqField Lw1;   // (w1_-1, w1_-2, ...)
  SeqField w2;    // (w2_0, w2_-1, ...)
};

/// Three staged boundary value problems from boundary coefficient sequences g^0, g^1, g^2.
CascadeResult cascade(const std::array<SeqField, 3>& g, const DomainGrid& grid, const CauchyOptions& opts = {});

struct LowModes {
  ComplexGrid v1_0;   // level-1 mode 0
  ComplexGrid v0_0;   // level-0 mode 0
  ComplexGrid v0_m1;  // level-0 mode -1
};

/// Low modes from the stage outputs. With `a` (lattice samples of the attenuation) the
/// attenuated relations are used; a null pointer means a = 0.
LowModes recover_low_modes(const SeqField& Lw1, const SeqField& w2, const DomainGrid& grid,
                           const RealGrid* a = nullptr);

/// Prepends two entries to a sequence field: (e0, e1, tail_0, tail_1, ...).
SeqField prepend(const ComplexGrid& e0, const ComplexGrid& e1, const SeqField& tail);
SeqField prepend(const ComplexGrid& e0, const SeqField& tail);

/// Components from a complete level-0 sequence (entries 0..3 required).
ComplexComponents recover_components(const SeqField& w0, const DomainGrid& grid, const RealGrid* a = nullptr);

/// Root-mean-square over lattice nodes at distance >= min_dist from Gamma of
/// dbar w + L^2 d w + a L w - rhs, entry by entry up to the truncation of w.
double beltrami_residual(const SeqField& w, const SeqField* rhs, const DomainGrid& grid, double min_dist,
                         const RealGrid* a = nullptr);

}  // namespace amrt
