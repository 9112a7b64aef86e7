#pragma once

#include <complex>
#include <vector>

namespace amrt::fft {

using cplx = std::complex<double>;

/// Sign of the exponent: forward = e^{-2 pi i jk/n}, backward = e^{+2 pi i jk/n}.
enum class Direction { forward, backward };

/// In-place unnormalised DFT of `howmany` contiguous length-n blocks.
void dft(cplx* data, int n, int howmany, Direction dir);
inline void dft(std::vector<cplx>& data, Direction dir) { dft(data.data(), static_cast<int>(data.size()), 1, dir); }

/// In-place unnormalised 2-D DFT of an ny-by-nx row-major array.
void dft2(cplx* data, int nx, int ny, Direction dir);

/// Smallest integer >= n whose prime factors are all in {2,3,5,7}.
int smooth_size(int n);

}  // namespace amrt::fft
