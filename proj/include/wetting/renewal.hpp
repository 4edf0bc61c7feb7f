#ifndef WETTING_RENEWAL_HPP
#define WETTING_RENEWAL_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "wetting/model.hpp"

namespace wetting {

// Contact kernel q(n) = u(n) / gamma, where u(n) is the weight of a positive
// excursion of length n and gamma = sum_n u(n). The table stops at n_max; the
// remaining mass is modelled by the fitted tail q(n) ~ tail_coeff * n^{-3/2}.
struct ContactKernel {
  std::vector<double> q;  // q[0] = 0, q[1..n_max]
  double gamma = 0.0;
  double cq_estimate = 0.0;  // c_q, with q(n) ~ c_q L / n^{3/2}
  double l_const = 0.0;
  double tail_coeff = 0.0;  // fitted asymptote of q(n) n^{3/2}
  double tail_u = 0.0;      // fitted sum_{n > n_max} u(n)
  std::size_t period = 1;   // gcd of the lengths with q(n) > 0

  std::size_t n_max() const { return q.size() - 1; }
  double table_mass() const;
  // q-mass beyond the table, 1 - table_mass() up to rounding
  double tail_mass() const { return tail_u / gamma; }
  // sum_{n > n_max} q(n) e^{-f n} under the fitted n^{-3/2} tail
  double tail_laplace(double f) const;
  // sum_{n > n_max} n q(n) e^{-f n} under the fitted tail (infinite at f = 0)
  double tail_first_moment(double f) const;
};

ContactKernel contact_kernel(const WalkLaw& walk, std::size_t n_max);
// Same construction from precomputed excursion weights u[0..n_max] (u[0] ignored).
ContactKernel contact_kernel_from_weights(std::vector<double> u, double l_const);

enum class SolverStrategy { Auto, Direct, Fast };

struct SolverOptions {
  SolverStrategy strategy = SolverStrategy::Auto;
  std::size_t fast_threshold = 4096;  // Auto switches to Fast at N >= this
};

// Green function of Z(n) = sum_{t=1}^{n} drive(t) Z(n - t), Z(0) = 1; drive[0] is ignored.
template <class S>
std::vector<S> renewal_green_direct(std::span<const S> drive, std::size_t n) {
  std::vector<S> z(n + 1, S(0));
  z[0] = S(1);
  const std::size_t len = drive.size();
  for (std::size_t m = 1; m <= n; ++m) {
    const std::size_t tmax = std::min(m, len == 0 ? 0 : len - 1);
    if constexpr (std::is_same_v<S, double>) {
      CompensatedSum acc;
      for (std::size_t t = 1; t <= tmax; ++t) acc.add(drive[t] * z[m - t]);
      z[m] = acc.value();
    } else {
      S acc(0);
      for (std::size_t t = 1; t <= tmax; ++t) acc += drive[t] * z[m - t];
      z[m] = acc;
    }
  }
  return z;
}

// Same recursion solved online: the known drive is cut into dyadic blocks and each
// block product is done by FFT, so every transform only mixes values of comparable
// magnitude. O(n log^2 n).
std::vector<double> renewal_green_fast(std::span<const double> drive, std::size_t n);

// First n_out coefficients of the full convolution a * b.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b, std::size_t n_out,
                             SolverStrategy strategy = SolverStrategy::Auto);

// Modified constrained partition functions Z~^c_{delta,0..N} (linear scale).
std::vector<double> solve_constrained(const ContactKernel& kernel, double delta, std::size_t n,
                                      SolverOptions options = {});

// Z~^f_{delta,n} = sum_t Z~^c_{delta,t} P(n - t), n = 0..N.
std::vector<double> solve_free(const ContactKernel& kernel, std::span<const double> survival, double delta,
                               std::size_t n, SolverOptions options = {});
std::vector<double> solve_free(const ContactKernel& kernel, const WalkLaw& walk, double delta, std::size_t n,
                               SolverOptions options = {});

// sum_{k=0}^{k_max} delta^k q^{k*}(n) for n = 0..N, by repeated convolution.
std::vector<double> neumann_series(const ContactKernel& kernel, double delta, std::size_t n, std::size_t k_max);

// Both partition tables, stored as Z~(n) e^{-log_scale * n}. log_scale is zero
// unless delta > 1 and the table would leave the double range, in which case it
// is a rough free-energy estimate.
struct PartitionTable {
  double delta = 0.0;
  double log_scale = 0.0;
  std::vector<double> zc_scaled;
  std::vector<double> zf_scaled;

  std::size_t size() const { return zc_scaled.size() - 1; }
  double log_zc(std::size_t n) const { return std::log(zc_scaled[n]) + log_scale * static_cast<double>(n); }
  double log_zf(std::size_t n) const { return std::log(zf_scaled[n]) + log_scale * static_cast<double>(n); }
  double zc(std::size_t n) const { return zc_scaled[n] * std::exp(log_scale * static_cast<double>(n)); }
  double zf(std::size_t n) const { return zf_scaled[n] * std::exp(log_scale * static_cast<double>(n)); }
};

PartitionTable partition_table(const ContactKernel& kernel, std::span<const double> survival, double delta,
                               std::size_t n, SolverOptions options = {});

// Root of delta * sum_{t <= n_max} q(t) e^{-f t} = 1 to ~1e-9, or 0 if the truncated sum stays below 1.
double rough_growth_rate(const ContactKernel& kernel, double delta);

// Unnormalized partition functions Z^c_{eps,n}, Z^f_{eps,n} (n = 0..N) obtained from the
// renewal recursion driven by eps * u(t). Exact when S is Rational.
template <class S>
struct PartitionFunctions {
  std::vector<S> constrained;
  std::vector<S> free;
};

template <class S>
PartitionFunctions<S> partition_functions_via_renewal(const WalkLawT<S>& walk, const S& epsilon, std::size_t n) {
  const std::vector<S> u = excursion_weights(walk, n + 1);
  std::vector<S> drive(u.size(), S(0));
  for (std::size_t t = 1; t < u.size(); ++t) drive[t] = epsilon * u[t];
  const std::vector<S> zt = renewal_green_direct<S>(drive, n + 1);
  const std::vector<S> surv = survival_probabilities(walk, n);

  PartitionFunctions<S> out;
  out.constrained.resize(n + 1);
  out.free.resize(n + 1);
  S kappa_pow(1);  // kappa^m
  for (std::size_t m = 0; m <= n; ++m) {
    S zf(0);
    for (std::size_t t = 0; t <= m; ++t) zf += zt[t] * surv[m - t];
    out.free[m] = kappa_pow * zf;
    kappa_pow *= walk.kappa;
    S zc(0);
    for (std::size_t t = 1; t <= m + 1; ++t) zc += u[t] * zt[m + 1 - t];
    out.constrained[m] = kappa_pow * zc;
  }
  return out;
}

}  // namespace wetting

#endif
