#include "amrt/trace.hpp"

#include "amrt/errors.hpp"
#include "amrt/fft.hpp"

namespace amrt {

BoundaryTrace traces_from_moments(const MomentSinogram& ms) {
  if (!ms.complete()) throw ArgumentError("sinogram is missing a moment layer");
  const SinogramLayout& L = ms.layout;
  BoundaryTrace bt{L, {RealGrid(L.size(), 0.0), RealGrid(L.size(), 0.0), RealGrid(L.size(), 0.0)}, ms.outgoing};
  for (int i = 0; i < L.n_boundary; ++i) {
    const Vec2 x = L.point(i);
    for (int j = 0; j < L.n_angles; ++j) {
      const std::size_t idx = L.index(i, j);
      if (!ms.outgoing[idx]) continue;
      const double p = x.dot(direction(L.phi(j)));
      const double g0 = ms.layers[0][idx];
      const double g1 = p * g0 - ms.layers[1][idx];
      bt.g[0][idx] = g0;
      bt.g[1][idx] = g1;
      bt.g[2][idx] = p * g1 - 0.5 * p * p * g0 + 0.5 * ms.layers[2][idx];
    }
  }
  return bt;
}

MomentSinogram moments_from_traces(const BoundaryTrace& bt) {
  const SinogramLayout& L = bt.layout;
  for (const auto& g : bt.g)
    if (g.size() != L.size()) throw ArgumentError("trace layer size mismatch");
  MomentSinogram ms = MomentSinogram::zeros(L);
  ms.outgoing = bt.outgoing;
  for (int i = 0; i < L.n_boundary; ++i) {
    const Vec2 x = L.point(i);
    for (int j = 0; j < L.n_angles; ++j) {
      const std::size_t idx = L.index(i, j);
      if (!bt.outgoing[idx]) continue;
      const double p = x.dot(direction(L.phi(j)));
      const double g0 = bt.g[0][idx], g1 = bt.g[1][idx], g2 = bt.g[2][idx];
      ms.layers[0][idx] = g0;
      ms.layers[1][idx] = p * g0 - g1;
      ms.layers[2][idx] = 2.0 * (g2 - p * g1 + 0.5 * p * p * g0);
    }
  }
  return ms;
}

SeqField angular_coeffs(const RealGrid& values, const SinogramLayout& layout, int N) {
  const int M = layout.n_angles;
  if (M < 2 * N + 2) throw ArgumentError("n_angles must be at least 2N+2 to avoid aliasing");
  if (values.size() != layout.size()) throw ArgumentError("angular_coeffs: size mismatch");
  std::vector<cplx> buf(values.begin(), values.end());
  fft::dft(buf.data(), M, layout.n_boundary, fft::Direction::backward);
  SeqField out(layout.n_boundary, N);
  for (int i = 0; i < layout.n_boundary; ++i)
    for (int n = 0; n <= N; ++n) out.at(i, n) = buf[layout.index(i, n)] / static_cast<double>(M);
  return out;
}

std::array<SeqField, 3> angular_coeffs(const BoundaryTrace& bt, int N) {
  return {angular_coeffs(bt.g[0], bt.layout, N), angular_coeffs(bt.g[1], bt.layout, N),
          angular_coeffs(bt.g[2], bt.layout, N)};
}

RealGrid synthesize(const SeqField& coeffs, const SinogramLayout& layout) {
  const int M = layout.n_angles;
  if (2 * coeffs.truncation() + 1 > M) throw ArgumentError("synthesize: too few angles");
  std::vector<cplx> buf(layout.size(), cplx{});
  for (int i = 0; i < layout.n_boundary; ++i) {
    buf[layout.index(i, 0)] = coeffs.at(i, 0);
    for (int n = 1; n <= coeffs.truncation(); ++n) {
      buf[layout.index(i, n)] = coeffs.at(i, n);
      buf[layout.index(i, M - n)] = std::conj(coeffs.at(i, n));
    }
  }
  fft::dft(buf.data(), M, layout.n_boundary, fft::Direction::forward);
  RealGrid out(layout.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = buf[k].real();
  return out;
}

}  // namespace amrt
