#ifndef WETTING_REGIMES_HPP
#define WETTING_REGIMES_HPP

#include <optional>
#include <span>
#include <vector>

#include "wetting/renewal.hpp"

namespace wetting {

enum class Regime { StrictlyDelocalized, Critical, Localized };

const char* regime_name(Regime regime) noexcept;

// delta < 1, == 1, > 1. Exact comparison: delta is user input.
Regime classify(double delta);

struct FreeEnergy {
  double f_delta = 0.0;
  bool localized = false;         // false: delta <= 1 and f_delta = 0
  double residual = 0.0;          // |delta (table sum + fitted tail) - 1|
  double truncated_residual = 0.0;  // |delta * table sum - 1|
  double truncation_bias = 0.0;   // delta * fitted tail sum at f_delta
};

// Solves delta * sum_t q(t) e^{-F t} = 1 by bisection on [0, ln delta]. The sum runs
// over the kernel table plus its fitted n^{-3/2} tail.
FreeEnergy free_energy(const ContactKernel& kernel, double delta);

struct TiltedKernel {
  double f_delta = 0.0;
  std::vector<double> q;    // q_delta(t) = delta q(t) e^{-F t}, t = 0..n_max (q[0] = 0)
  double tail_mass = 0.0;   // q_delta-mass beyond the table
  double mu_delta = 0.0;    // mean, including the tail
};

TiltedKernel tilted_kernel(const ContactKernel& kernel, double delta);

struct RegimeParams {
  double delta = 0.0;
  Regime regime = Regime::StrictlyDelocalized;
  double f_delta = 0.0;
  std::optional<std::vector<double>> q_tilted;
  std::optional<double> mu_delta;
  double tilted_tail_mass = 0.0;
};

RegimeParams regime_params(const ContactKernel& kernel, double delta);

// Sharp asymptotics of Z~^c and Z~^f at size N. The predicted values are
// zc * e^{log_scale}, zf * e^{log_scale} (log_scale = N F_delta when localized).
struct PartitionPrediction {
  Regime regime = Regime::StrictlyDelocalized;
  double zc = 0.0;
  double zf = 0.0;
  double log_scale = 0.0;
};

// `survival` must reach N; in the localized case the prefactor sum uses all of it.
PartitionPrediction predict_partition(const ContactKernel& kernel, std::span<const double> survival, double delta,
                                      std::size_t n);
PartitionPrediction predict_partition(const ContactKernel& kernel, const WalkLaw& walk, double delta, std::size_t n);

}  // namespace wetting

#endif
