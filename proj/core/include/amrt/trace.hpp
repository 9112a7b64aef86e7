#pragma once

#include <array>

#include "amrt/forward.hpp"
#include "amrt/sequence.hpp"

namespace amrt {

/// Boundary traces g^k of the transport solutions on Gamma x S^1; zero on Gamma_-.
struct BoundaryTrace {
  SinogramLayout layout;
  std::array<RealGrid, 3> g;
  std::vector<std::uint8_t> outgoing;
};

/// g0 = M0, g1 = p g0 - M1, g2 = p g1 - p^2/2 g0 + M2/2 with p = x.u on Gamma_+.
BoundaryTrace traces_from_moments(const MomentSinogram& ms);
MomentSinogram moments_from_traces(const BoundaryTrace& bt);

/// g_{-n}(theta_i) = (1/2pi) int g(theta_i, phi) e^{i n phi} dphi, 0 <= n <= N, per boundary node.
SeqField angular_coeffs(const RealGrid& values, const SinogramLayout& layout, int N);
std::array<SeqField, 3> angular_coeffs(const BoundaryTrace& bt, int N);

/// g(phi_j) = g_0 + 2 Re sum_{n>=1} g_{-n} e^{-i n phi_j}: inverse of angular_coeffs for real data.
RealGrid synthesize(const SeqField& coeffs, const SinogramLayout& layout);

}  // namespace amrt
