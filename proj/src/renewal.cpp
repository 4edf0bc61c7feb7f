#include "wetting/renewal.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "fft_convolver.hpp"

namespace wetting {

namespace {

constexpr std::size_t kDirectLeaf = 48;

std::size_t support_period(std::span<const double> a) {
  std::size_t g = 0;
  for (std::size_t t = 1; t < a.size(); ++t)
    if (a[t] != 0.0) g = std::gcd(g, t);
  return g == 0 ? 1 : g;
}

void check_delta(double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw Error(Errc::NegativeDelta, "delta must be finite and >= 0, got " + std::to_string(delta));
}

void check_length(const ContactKernel& kernel, std::size_t n) {
  if (n > kernel.n_max())
    throw Error(Errc::KernelTooShort, "N = " + std::to_string(n) + " exceeds kernel n_max = " +
                                          std::to_string(kernel.n_max()));
}

bool use_fast(SolverOptions options, std::size_t n) {
  switch (options.strategy) {
    case SolverStrategy::Direct: return false;
    case SolverStrategy::Fast: return true;
    case SolverStrategy::Auto: return n >= options.fast_threshold;
  }
  return false;
}

}  // namespace

double ContactKernel::table_mass() const { return compensated_sum(q); }

double ContactKernel::tail_laplace(double f) const {
  const double a = static_cast<double>(n_max()) + 0.5;
  if (f <= 0.0) return tail_coeff * 2.0 / std::sqrt(a);
  const double v = 2.0 * std::exp(-f * a) / std::sqrt(a) - 2.0 * std::sqrt(M_PI * f) * std::erfc(std::sqrt(f * a));
  return tail_coeff * std::max(v, 0.0);
}

double ContactKernel::tail_first_moment(double f) const {
  if (f <= 0.0) return tail_coeff > 0.0 ? INFINITY : 0.0;
  const double a = static_cast<double>(n_max()) + 0.5;
  return tail_coeff * std::sqrt(M_PI / f) * std::erfc(std::sqrt(f * a));
}

ContactKernel contact_kernel_from_weights(std::vector<double> u, double l_const) {
  if (u.size() < 17) throw Error(Errc::InvalidArgument, "contact kernel needs n_max >= 16");
  const std::size_t n_max = u.size() - 1;
  u[0] = 0.0;

  // tail fit: u(n) n^{3/2} averaged over the last decade, sum_{k>n} k^{-3/2} ~ 2/sqrt(n + 1/2)
  CompensatedSum fit;
  std::size_t count = 0;
  for (std::size_t n = n_max / 10 + 1; n <= n_max; ++n, ++count) {
    const double nn = static_cast<double>(n);
    fit.add(u[n] * nn * std::sqrt(nn));
  }
  const double c_u = fit.value() / static_cast<double>(count);
  const double tail_u = 2.0 * c_u / std::sqrt(static_cast<double>(n_max) + 0.5);
  const double head = compensated_sum(u);
  const double gamma = head + tail_u;
  if (!(gamma > 0.0)) throw Error(Errc::ZeroMass, "walk has no positive excursions");
  if (tail_u > 0.1 * gamma)
    throw Error(Errc::KernelTooShort, "fitted tail carries " + std::to_string(100.0 * tail_u / gamma) +
                                          "% of gamma; increase n_max (currently " + std::to_string(n_max) + ")");

  ContactKernel kernel;
  kernel.gamma = gamma;
  kernel.tail_u = tail_u;
  kernel.tail_coeff = c_u / gamma;
  kernel.l_const = l_const;
  kernel.cq_estimate = kernel.tail_coeff / l_const;
  kernel.q = std::move(u);
  for (double& v : kernel.q) v /= gamma;
  kernel.period = support_period(kernel.q);
  return kernel;
}

ContactKernel contact_kernel(const WalkLaw& walk, std::size_t n_max) {
  if (n_max < 16) throw Error(Errc::InvalidArgument, "contact kernel needs n_max >= 16");
  return contact_kernel_from_weights(excursion_weights(walk, n_max), walk.l_const);
}

std::vector<double> renewal_green_fast(std::span<const double> drive_in, std::size_t n) {
  std::vector<double> drive(n + 1, 0.0);
  for (std::size_t t = 1; t <= n && t < drive_in.size(); ++t) drive[t] = drive_in[t];

  // a lattice drive only reaches multiples of its period; solve on the sublattice
  const std::size_t d = support_period(drive);
  if (d > 1) {
    std::vector<double> sub(n / d + 1, 0.0);
    for (std::size_t t = 1; t < sub.size(); ++t) sub[t] = drive[t * d];
    const std::vector<double> zs = renewal_green_fast(sub, n / d);
    std::vector<double> z(n + 1, 0.0);
    for (std::size_t k = 0; k < zs.size(); ++k) z[k * d] = zs[k];
    return z;
  }

  std::vector<double> z(n + 1, 0.0), acc(n + 1, 0.0);
  z[0] = 1.0;
  for (std::size_t t = 1; t <= n; ++t) acc[t] = drive[t];

  detail::FftConvolver fft;
  // adds z[jlo, jhi) * drive[tlo, thi) into acc
  auto fire = [&](std::size_t jlo, std::size_t jhi, std::size_t tlo, std::size_t thi) {
    if (jlo + tlo > n) return;
    thi = std::min(thi, n - jlo + 1);
    const std::size_t base = jlo + tlo;
    std::span<const double> x(z.data() + jlo, jhi - jlo);
    std::span<const double> y(drive.data() + tlo, thi - tlo);
    std::span<double> out(acc.data() + base, std::min(n + 1 - base, x.size() + y.size() - 1));
    if (std::min(x.size(), y.size()) <= kDirectLeaf)
      detail::direct_convolve_add(x, y, out);
    else
      fft.convolve_add(x, y, out);
  };

  for (std::size_t m = 1; m <= n; ++m) {
    z[m] = acc[m];
    const std::size_t m1 = m + 1;
    // blocks z[i s, (i+1) s) x drive[s, 2s) with i >= 1
    for (std::size_t s = 1; 2 * s <= m1 && m1 % s == 0; s <<= 1) fire(m1 - s, m1, s, 2 * s);
    // the first block z[1, s) is split dyadically: z[m1/2, m1) x drive[s, 2s) for s >= m1
    if ((m1 & (m1 - 1)) == 0)
      for (std::size_t s = m1; s <= n; s <<= 1) fire(m1 / 2, m1, s, 2 * s);
  }
  return z;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b, std::size_t n_out,
                             SolverStrategy strategy) {
  std::vector<double> out(n_out, 0.0);
  a = a.first(std::min(a.size(), n_out));
  b = b.first(std::min(b.size(), n_out));
  const bool fast = strategy == SolverStrategy::Fast ||
                    (strategy == SolverStrategy::Auto && std::min(a.size(), b.size()) > 256);
  if (!fast) {
    for (std::size_t i = 0; i < n_out; ++i) {
      CompensatedSum acc;
      const std::size_t jlo = i + 1 > b.size() ? i + 1 - b.size() : 0;
      for (std::size_t j = jlo; j <= i && j < a.size(); ++j) acc.add(a[j] * b[i - j]);
      out[i] = acc.value();
    }
    return out;
  }
  detail::FftConvolver fft;
  fft.convolve_add(a, b, out);
  return out;
}

std::vector<double> solve_constrained(const ContactKernel& kernel, double delta, std::size_t n,
                                      SolverOptions options) {
  check_delta(delta);
  check_length(kernel, n);
  std::vector<double> drive(n + 1, 0.0);
  for (std::size_t t = 1; t <= n; ++t) drive[t] = delta * kernel.q[t];
  return use_fast(options, n) ? renewal_green_fast(drive, n) : renewal_green_direct<double>(drive, n);
}

std::vector<double> solve_free(const ContactKernel& kernel, std::span<const double> survival, double delta,
                               std::size_t n, SolverOptions options) {
  if (survival.size() < n + 1)
    throw Error(Errc::InconsistentTables, "survival probabilities needed up to " + std::to_string(n));
  const std::vector<double> zc = solve_constrained(kernel, delta, n, options);
  return convolve(zc, survival.first(n + 1), n + 1,
                  use_fast(options, n) ? SolverStrategy::Fast : SolverStrategy::Direct);
}

std::vector<double> solve_free(const ContactKernel& kernel, const WalkLaw& walk, double delta, std::size_t n,
                               SolverOptions options) {
  const std::vector<double> surv = survival_probabilities(walk, n);
  return solve_free(kernel, surv, delta, n, options);
}

std::vector<double> neumann_series(const ContactKernel& kernel, double delta, std::size_t n, std::size_t k_max) {
  check_delta(delta);
  check_length(kernel, n);
  std::vector<double> power(n + 1, 0.0);  // q^{k*}
  power[0] = 1.0;
  std::vector<CompensatedSum> total(n + 1);
  total[0].add(1.0);
  double dk = 1.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    std::vector<double> next(n + 1, 0.0);
    for (std::size_t m = k; m <= n; ++m) {
      CompensatedSum acc;
      for (std::size_t t = 1; t <= m; ++t) acc.add(kernel.q[t] * power[m - t]);
      next[m] = acc.value();
    }
    power.swap(next);
    dk *= delta;
    for (std::size_t m = 0; m <= n; ++m) total[m].add(dk * power[m]);
  }
  std::vector<double> out(n + 1);
  for (std::size_t m = 0; m <= n; ++m) out[m] = total[m].value();
  return out;
}

double rough_growth_rate(const ContactKernel& kernel, double delta) {
  if (delta <= 1.0) return 0.0;
  auto excess = [&](double f) {
    CompensatedSum s;
    for (std::size_t t = 1; t <= kernel.n_max(); ++t)
      if (kernel.q[t] != 0.0) s.add(kernel.q[t] * std::exp(-f * static_cast<double>(t)));
    return delta * s.value() - 1.0;
  };
  if (excess(0.0) <= 0.0) return 0.0;
  double lo = 0.0, hi = std::log(delta);
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

PartitionTable partition_table(const ContactKernel& kernel, std::span<const double> survival, double delta,
                               std::size_t n, SolverOptions options) {
  check_delta(delta);
  check_length(kernel, n);
  if (survival.size() < n + 1)
    throw Error(Errc::InconsistentTables, "survival probabilities needed up to " + std::to_string(n));

  PartitionTable table;
  table.delta = delta;
  // Z~^c_n <= delta^n, so scaling is only needed past ~1e280
  if (delta > 1.0 && static_cast<double>(n) * std::log(delta) > std::log(1e280))
    table.log_scale = rough_growth_rate(kernel, delta);

  const double f = table.log_scale;
  std::vector<double> drive(n + 1, 0.0), surv(n + 1, 0.0);
  for (std::size_t t = 0; t <= n; ++t) {
    const double damp = std::exp(-f * static_cast<double>(t));
    if (t > 0) drive[t] = delta * kernel.q[t] * damp;
    surv[t] = survival[t] * damp;
  }
  const bool fast = use_fast(options, n);
  table.zc_scaled = fast ? renewal_green_fast(drive, n) : renewal_green_direct<double>(drive, n);
  table.zf_scaled = convolve(table.zc_scaled, surv, n + 1, fast ? SolverStrategy::Fast : SolverStrategy::Direct);
  return table;
}

}  // namespace wetting
