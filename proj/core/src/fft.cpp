#include "amrt/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "amrt/errors.hpp"

namespace amrt::fft {

namespace {

// FFTW planning is not thread safe; execution of an existing plan on new arrays is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int rank, int n0, int n1, int howmany, Direction dir) {
    const Key key{rank, n0, n1, howmany, dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD};
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const std::size_t total = static_cast<std::size_t>(n0) * (rank == 2 ? n1 : 1) * howmany;
    fftw_complex* scratch = fftw_alloc_complex(total);
    fftw_plan plan = nullptr;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (rank == 1) {
      plan = fftw_plan_many_dft(1, &n0, howmany, scratch, nullptr, 1, n0, scratch, nullptr, 1, n0, std::get<4>(key),
                                flags);
    } else {
      plan = fftw_plan_dft_2d(n0, n1, scratch, scratch, std::get<4>(key), flags);
    }
    fftw_free(scratch);
    if (plan == nullptr) throw StageError("fft", "plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  using Key = std::tuple<int, int, int, int, int>;
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void dft(cplx* data, int n, int howmany, Direction dir) {
  if (n <= 0 || howmany <= 0) return;
  fftw_plan plan = cache().get(1, n, 0, howmany, dir);
  fftw_execute_dft(plan, as_fftw(data), as_fftw(data));
}

void dft2(cplx* data, int nx, int ny, Direction dir) {
  if (nx <= 0 || ny <= 0) return;
  fftw_plan plan = cache().get(2, ny, nx, 1, dir);
  fftw_execute_dft(plan, as_fftw(data), as_fftw(data));
}

int smooth_size(int n) {
  if (n <= 1) return 1;
  for (int m = n;; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

}  // namespace amrt::fft
