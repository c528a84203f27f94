#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace ringing::detail {

namespace {

// Plans are cached per (size, direction). FFTW planning is not thread-safe,
// execution through fftw_execute_dft on aligned buffers is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    // FFTW_ESTIMATE keeps plan choice (and therefore rounding) reproducible.
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : ptr(fftw_alloc_complex(n)) {}
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* ptr;
};

void execute(std::vector<std::complex<double>>& data, int sign) {
  const std::size_t n = data.size();
  if (n == 0) return;
  fftw_plan plan = PlanCache::instance().get(n, sign);
  FftwBuffer in(n);
  FftwBuffer out(n);
  std::memcpy(in.ptr, data.data(), n * sizeof(fftw_complex));
  fftw_execute_dft(plan, in.ptr, out.ptr);
  std::copy_n(reinterpret_cast<const std::complex<double>*>(out.ptr), n, data.begin());
}

}  // namespace

void fft_forward(std::vector<std::complex<double>>& data) { execute(data, FFTW_FORWARD); }

void fft_backward(std::vector<std::complex<double>>& data) { execute(data, FFTW_BACKWARD); }

}  // namespace ringing::detail
