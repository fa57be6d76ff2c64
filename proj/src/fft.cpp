#include "udw/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace udw {
namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex planner_mutex;

void run(std::vector<std::complex<double>>& data, int sign) {
  if (data.empty()) throw std::invalid_argument("fft: empty input");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = nullptr;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    // FFTW_ESTIMATE plans deterministically and leaves the buffer untouched.
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign,
                            FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("fft: planner failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
}

}  // namespace

void fft_forward(std::vector<std::complex<double>>& data) {
  run(data, FFTW_FORWARD);
}

void fft_inverse(std::vector<std::complex<double>>& data) {
  run(data, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
}

}  // namespace udw
