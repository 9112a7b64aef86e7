#pragma once

#include <string>
#include <utility>
#include <vector>

#include "amrt/aanalytic.hpp"
#include "amrt/attenuation.hpp"
#include "amrt/fields.hpp"
#include "amrt/forward.hpp"
#include "amrt/trace.hpp"

namespace amrt {

struct ReconstructionOptions {
  int N = 32;
  CauchyOptions cauchy;
  IntegratingFactorOptions factor;
  double tail_tol = 1e-6;
  /// Nodes closer than this to Gamma are excluded from residual diagnostics.
  double residual_margin = 0.1;
};

struct ReconstructionReport {
  std::string mode;
  double rel_l2_f = 0.0;
  double rel_l2_F = 0.0;
  double stability_lhs = 0.0;
  double stability_rhs = 0.0;
  double ratio = 0.0;
  std::vector<std::pair<std::string, double>> diagnostics;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, double>> stage_seconds;

  void set(const std::string& key, double value);
  double get(const std::string& key) const;  // NaN when absent
};

struct Reconstruction {
  FieldPair fields;
  ComplexComponents components;
  SeqField v0, v1, v2;  // complete level sequences in the attenuated (physical) gauge
  ReconstructionReport report;
};

Reconstruction reconstruct_nonattenuated(const MomentSinogram& ms, const DomainGrid& grid,
                                         const ReconstructionOptions& opts = {});
Reconstruction reconstruct_attenuated(const MomentSinogram& ms, const Attenuation& att, const DomainGrid& grid,
                                      const ReconstructionOptions& opts = {});

/// Relative L2 errors over the support disk: {f, F}. A zero true part is normalised by
/// the combined (f, F) norm of the truth.
std::pair<double, double> relative_errors(const FieldPair& recon, const FieldPair& truth, const DomainGrid& grid,
                                          double radius);

/// L2 norms of f and F (tensor norm includes 2 F12^2) with the lattice area weights.
std::pair<double, double> field_norms(const FieldPair& fp, const DomainGrid& grid);

/// sum_k (1+k)^{2p} ||v_{-k}||^2_{H^q} on Gamma (periodic differences in arclength), square-rooted.
double weighted_seq_norm(const SeqField& boundary_coeffs, const Domain& domain, double p, int q);
/// Lattice version with finite-difference partial derivatives up to order q.
double weighted_seq_norm(const SeqField& coeffs, const DomainGrid& grid, double p, int q);

struct StabilityRatio {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// (||f|| + ||F||) / sum_k ||M^(k)||_{7/2,k}; 0 for a zero field, +inf for zero data.
StabilityRatio stability_ratio(const FieldPair& fp, const MomentSinogram& ms, const DomainGrid& grid, int N);

/// Level residuals of the reconstructed transport system (RMS-area norms).
std::array<double, 3> level_residuals(const Reconstruction& r, const DomainGrid& grid, double margin,
                                      const RealGrid* a);

}  // namespace amrt
