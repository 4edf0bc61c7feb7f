#include "fft_convolver.hpp"

#include <algorithm>
#include <mutex>

namespace wetting::detail {

namespace {
// FFTW's planner is not re-entrant.
std::mutex planner_mutex;
}  // namespace

FftConvolver::~FftConvolver() {
  std::lock_guard lock(planner_mutex);
  for (auto& [size, plan] : plans_) {
    fftw_destroy_plan(plan.forward);
    fftw_destroy_plan(plan.inverse);
    fftw_free(plan.real);
    fftw_free(plan.spec_x);
    fftw_free(plan.spec_y);
  }
}

FftConvolver::Plan& FftConvolver::plan_for(std::size_t size) {
  auto it = plans_.find(size);
  if (it != plans_.end()) return it->second;
  std::lock_guard lock(planner_mutex);
  Plan plan;
  plan.size = size;
  const std::size_t bins = size / 2 + 1;
  plan.real = fftw_alloc_real(size);
  plan.spec_x = fftw_alloc_complex(bins);
  plan.spec_y = fftw_alloc_complex(bins);
  const int n = static_cast<int>(size);
  plan.forward = fftw_plan_dft_r2c_1d(n, plan.real, plan.spec_x, FFTW_ESTIMATE);
  plan.inverse = fftw_plan_dft_c2r_1d(n, plan.spec_x, plan.real, FFTW_ESTIMATE);
  return plans_.emplace(size, plan).first->second;
}

void FftConvolver::convolve_add(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  if (x.empty() || y.empty() || out.empty()) return;
  const std::size_t full = std::min(out.size(), x.size() + y.size() - 1);
  x = x.first(std::min(x.size(), full));
  y = y.first(std::min(y.size(), full));
  std::size_t size = 1;
  while (size < x.size() + y.size() - 1) size <<= 1;
  Plan& p = plan_for(size);
  const std::size_t bins = size / 2 + 1;

  std::fill(p.real, p.real + size, 0.0);
  std::copy(x.begin(), x.end(), p.real);
  fftw_execute_dft_r2c(p.forward, p.real, p.spec_x);
  std::fill(p.real, p.real + size, 0.0);
  std::copy(y.begin(), y.end(), p.real);
  fftw_execute_dft_r2c(p.forward, p.real, p.spec_y);

  for (std::size_t k = 0; k < bins; ++k) {
    const double re = p.spec_x[k][0] * p.spec_y[k][0] - p.spec_x[k][1] * p.spec_y[k][1];
    const double im = p.spec_x[k][0] * p.spec_y[k][1] + p.spec_x[k][1] * p.spec_y[k][0];
    p.spec_x[k][0] = re;
    p.spec_x[k][1] = im;
  }
  fftw_execute_dft_c2r(p.inverse, p.spec_x, p.real);
  const double scale = 1.0 / static_cast<double>(size);
  for (std::size_t i = 0; i < full; ++i) out[i] += p.real[i] * scale;
}

void direct_convolve_add(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  for (std::size_t i = 0; i < x.size() && i < out.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const std::size_t jmax = std::min(y.size(), out.size() - i);
    for (std::size_t j = 0; j < jmax; ++j) out[i + j] += xi * y[j];
  }
}

}  // namespace wetting::detail
