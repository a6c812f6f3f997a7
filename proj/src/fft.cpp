#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace wgnls::fft {
namespace {

struct PlanPair {
  fftw_plan aligned = nullptr;
  fftw_plan unaligned = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plans] : plans_) {
      fftw_destroy_plan(plans.aligned);
      fftw_destroy_plan(plans.unaligned);
    }
  }

  // Returns a plan compatible with the alignment of `data`.
  fftw_plan get(const std::vector<int>& extents, int sign, fftw_complex* data) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(extents, sign);
    auto it = plans_.find(key);
    if (it == plans_.end()) it = plans_.emplace(key, make(extents, sign)).first;
    return fftw_alignment_of(reinterpret_cast<double*>(data)) == 0 ? it->second.aligned
                                                                  : it->second.unaligned;
  }

 private:
  static PlanPair make(const std::vector<int>& extents, int sign) {
    std::size_t total = 1;
    for (int e : extents) total *= static_cast<std::size_t>(e);
    fftw_complex* buf = fftw_alloc_complex(total);
    const int rank = static_cast<int>(extents.size());
    PlanPair p;
    p.aligned = fftw_plan_dft(rank, extents.data(), buf, buf, sign, FFTW_ESTIMATE);
    p.unaligned =
        fftw_plan_dft(rank, extents.data(), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    return p;
  }

  std::mutex mutex_;
  std::map<std::pair<std::vector<int>, int>, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(Eigen::ArrayXcd& data, std::span<const int> extents, int sign) {
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = cache().get(std::vector<int>(extents.begin(), extents.end()), sign, ptr);
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

void forward(Eigen::ArrayXcd& data, std::span<const int> extents) {
  run(data, extents, FFTW_FORWARD);
}

void backward(Eigen::ArrayXcd& data, std::span<const int> extents) {
  run(data, extents, FFTW_BACKWARD);
}

}  // namespace wgnls::fft
