#ifndef WETTING_SRC_FFT_CONVOLVER_HPP
#define WETTING_SRC_FFT_CONVOLVER_HPP

#include <cstddef>
#include <map>
#include <span>

#include <fftw3.h>

namespace wetting::detail {

// Real linear convolution through FFTW r2c/c2r transforms. Plans are cached per
// transform size for the lifetime of the object; an instance is not thread-safe,
// but separate instances may be used concurrently.
class FftConvolver {
 public:
  FftConvolver() = default;
  FftConvolver(const FftConvolver&) = delete;
  FftConvolver& operator=(const FftConvolver&) = delete;
  ~FftConvolver();

  // out[i] += sum_j x[j] y[i - j] for 0 <= i < out.size()
  void convolve_add(std::span<const double> x, std::span<const double> y, std::span<double> out);

 private:
  struct Plan {
    std::size_t size = 0;
    double* real = nullptr;
    fftw_complex* spec_x = nullptr;
    fftw_complex* spec_y = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
  };
  Plan& plan_for(std::size_t size);

  std::map<std::size_t, Plan> plans_;
};

// Direct O(|x||y|) version with the same contract.
void direct_convolve_add(std::span<const double> x, std::span<const double> y, std::span<double> out);

}  // namespace wetting::detail

#endif
