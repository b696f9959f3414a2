#include "temsig/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "temsig/errors.hpp"

namespace temsig::fft {

namespace {

// FFTW plan creation is not thread-safe; execution via fftw_execute_dft on
// caller-owned arrays is. Plans are cached per (rows, cols, sign).
class PlanCache {
 public:
  fftw_plan get(int rows, int cols, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    const Key key{rows, cols, sign};
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    fftw_complex* buf = fftw_alloc_complex(n);
    if (!buf) fail(Errc::io_failure, "fftw_alloc_complex failed");
    fftw_plan plan = fftw_plan_dft_2d(rows, cols, buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!plan) fail(Errc::io_failure, "fftw_plan_dft_2d failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  struct Key {
    int rows, cols, sign;
    bool operator<(const Key& o) const {
      return std::tie(rows, cols, sign) < std::tie(o.rows, o.cols, o.sign);
    }
  };
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

cvec execute(const cvec& in, int rows, int cols, int sign) {
  if (in.size() != static_cast<std::size_t>(rows) * cols)
    fail(Errc::dimension_mismatch, "fft input size does not match rows*cols");
  const fftw_plan plan = cache().get(rows, cols, sign);
  cvec out(in);
  auto* ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, ptr, ptr);
  return out;
}

}  // namespace

cvec forward2d(const cvec& in, int rows, int cols) {
  return execute(in, rows, cols, FFTW_FORWARD);
}

cvec inverse2d(const cvec& in, int rows, int cols) {
  cvec out = execute(in, rows, cols, FFTW_BACKWARD);
  const double scale = 1.0 / (static_cast<double>(rows) * cols);
  for (auto& v : out) v *= scale;
  return out;
}

cvec forward2d(const Image& in) {
  cvec buf(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) buf[i] = in.data()[i];
  return forward2d(buf, in.rows(), in.cols());
}

}  // namespace temsig::fft
