#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace fracnls::detail {
namespace {

// FFTW planning is not thread-safe; execution through the new-array interface
// is. Plans use FFTW_ESTIMATE so the chosen algorithm, and hence the rounding,
// is identical from run to run.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const Grid& grid, int sign, bool in_place) {
    const auto key = std::make_tuple(grid.dim(), grid.points(), sign, in_place);
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const int n = static_cast<int>(grid.size());
    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = in_place ? a : fftw_alloc_complex(n);
    int dims[3] = {grid.points(), grid.points(), grid.points()};
    fftw_plan plan = fftw_plan_dft(grid.dim(), dims, a, b, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!in_place) fftw_free(b);
    fftw_free(a);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int, bool>, fftw_plan> plans_;
};

void execute(const Grid& grid, const Complex* in, Complex* out, int sign) {
  const bool in_place = (in == out);
  fftw_plan plan = PlanCache::instance().get(grid, sign, in_place);
  // std::complex<double> is layout-compatible with fftw_complex.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in));
  auto* dst = reinterpret_cast<fftw_complex*>(out);
  fftw_execute_dft(plan, src, dst);
}

}  // namespace

void dft_forward(const Grid& grid, const Complex* in, Complex* out) {
  execute(grid, in, out, FFTW_FORWARD);
}

void dft_backward(const Grid& grid, const Complex* in, Complex* out) {
  execute(grid, in, out, FFTW_BACKWARD);
}

}  // namespace fracnls::detail
