// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Every tolerance, seed and sample size is pinned here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "wetting/oracle.hpp"
#include "wetting/regimes.hpp"
#include "wetting/sampler.hpp"
#include "wetting/scaling.hpp"

using namespace wetting;

namespace {

constexpr std::size_t kKernelSize = 1 << 16;

struct Result {
  bool pass = false;
  std::string detail;
};

const DiscretePotential& lazy_potential() {
  static const DiscretePotential p = DiscretePotential::parse("-1 1/4\n0 1/2\n1 1/4\n");
  return p;
}
const DiscretePotential& pm1_potential() {
  static const DiscretePotential p = DiscretePotential::parse("-1 1/2\n1 1/2\n");
  return p;
}
const WalkLaw& lazy_walk() {
  static const WalkLaw w = build_walk(lazy_potential());
  return w;
}
const ContactKernel& lazy_kernel() {
  static const ContactKernel k = contact_kernel(lazy_walk(), kKernelSize);
  return k;
}
const ContactKernel& pm1_kernel() {
  static const ContactKernel k = contact_kernel(build_walk(pm1_potential()), 1 << 12);
  return k;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

bool rows_pass(const std::vector<OracleRow>& rows, std::size_t& count) {
  count += rows.size();
  for (const auto& r : rows)
    if (!r.pass) {
      std::printf("    failing row: %s: %s | %s\n", r.label.c_str(), r.lhs.c_str(), r.rhs.c_str());
      return false;
    }
  return !rows.empty();
}

Result c1_oracle() {
  std::size_t rows = 0;
  bool ok = rows_pass(check_partition(lazy_potential(), 10), rows);
  ok = rows_pass(check_partition(pm1_potential(), 10), rows) && ok;
  return {ok, std::to_string(rows) + " exact rational identities, N <= 10"};
}

Result c2_ladder() {
  std::size_t rows = 0;
  bool ok = rows_pass(check_ladder(lazy_potential(), 12), rows);
  ok = rows_pass(check_ladder(pm1_potential(), 12), rows) && ok;
  return {ok, std::to_string(rows) + " exact identities, n <= 12"};
}

Result c3_neumann() {
  constexpr double tol = 1e-10;
  double worst = 0.0;
  for (const ContactKernel* k : {&lazy_kernel(), &pm1_kernel()})
    for (double delta : {0.3, 1.0, 2.5}) {
      const auto a = solve_constrained(*k, delta, 64);
      const auto b = neumann_series(*k, delta, 64, 64);
      for (std::size_t n = 0; n <= 64; ++n) {
        if (b[n] == 0.0) {
          if (a[n] != 0.0) worst = INFINITY;
          continue;
        }
        worst = std::max(worst, std::abs(a[n] / b[n] - 1.0));
      }
    }
  return {worst < tol, fmt("max relative difference %.2e (limit 1e-10)", worst)};
}

// delocalized and critical: ratios table / prediction over N = 2^9..2^13
Result sharp_ratios(double delta, bool require_decrease) {
  constexpr double tol = 0.05;
  constexpr std::size_t n_top = 1 << 13;
  const auto surv = survival_probabilities(lazy_walk(), n_top);
  const auto t = partition_table(lazy_kernel(), surv, delta, n_top);
  double prev_c = INFINITY, prev_f = INFINITY;
  bool decreasing = true;
  std::string trail;
  for (std::size_t n = 1 << 9; n <= n_top; n *= 2) {
    const auto p = predict_partition(lazy_kernel(), surv, delta, n);
    const double ec = std::abs(t.zc(n) / p.zc - 1.0), ef = std::abs(t.zf(n) / p.zf - 1.0);
    decreasing = decreasing && ec < prev_c && ef < prev_f;
    prev_c = ec;
    prev_f = ef;
    trail += fmt(" %.1e/%.1e", ec, ef);
  }
  const bool ok = prev_c < tol && prev_f < tol && (decreasing || !require_decrease);
  return {ok, fmt("|ratio - 1| at 2^13: constrained %.2e, free %.2e;", prev_c, prev_f) + " over 2^9..2^13:" + trail +
                  (decreasing ? " (decreasing)" : " (not monotone)")};
}

Result c6_localized() {
  constexpr std::size_t n = 512;
  constexpr double tol = 0.01, res_tol = 1e-10;
  const auto surv = survival_probabilities(lazy_walk(), n);
  const auto t = partition_table(lazy_kernel(), surv, 2.0, n);
  const auto p = predict_partition(lazy_kernel(), surv, 2.0, n);
  const double ec = std::abs(std::exp(t.log_zc(n) - p.log_scale) / p.zc - 1.0);
  const double ef = std::abs(std::exp(t.log_zf(n) - p.log_scale) / p.zf - 1.0);
  const FreeEnergy fe = free_energy(lazy_kernel(), 2.0);
  return {ec < tol && ef < tol && fe.residual < res_tol,
          fmt("N = 512: constrained %.2e, free %.2e", ec, ef) + fmt(", F = %.12f, residual %.1e", fe.f_delta, fe.residual)};
}

Result c7_deloc_laws() {
  constexpr double delta = 0.5, p_min = 1e-3, sigmas = 4.0;
  constexpr std::size_t m = 1000000, k_returns = 12, k_last = 20, horizon = 1024;
  const InfiniteVolumeSampler s(lazy_kernel(), regime_params(lazy_kernel(), delta), horizon);
  std::vector<double> returns(k_returns + 2, 0.0), last(k_last + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    CounterRng rng(70, i);
    const ContactSet c = s.sample(rng);
    ++returns[std::min(c.returns, k_returns + 1)];
    if (!c.beyond_horizon && static_cast<std::size_t>(c.taus.back()) <= k_last)
      ++last[static_cast<std::size_t>(c.taus.back())];
  }
  const DelocLaw rl = deloc_return_law(delta, k_returns);
  double chi2 = 0.0, rest = 1.0;
  for (std::size_t k = 0; k <= k_returns; ++k) {
    const double e = static_cast<double>(m) * rl.law[k];
    chi2 += (returns[k] - e) * (returns[k] - e) / e;
    rest -= rl.law[k];
  }
  const double e_rest = static_cast<double>(m) * rest;
  chi2 += (returns[k_returns + 1] - e_rest) * (returns[k_returns + 1] - e_rest) / e_rest;
  const boost::math::chi_squared_distribution<double> dist(static_cast<double>(k_returns + 1));
  const double p_value = boost::math::cdf(boost::math::complement(dist, chi2));

  const DelocLaw ll = deloc_last_zero_law(lazy_kernel(), delta, k_last);
  double worst = 0.0;
  for (std::size_t k = 0; k <= k_last; ++k) {
    const double p = ll.law[k];
    worst = std::max(worst, std::abs(last[k] - m * p) / std::sqrt(m * p * (1 - p)));
  }
  return {p_value > p_min && worst <= sigmas,
          fmt("returns: chi2 = %.2f, p = %.3f;", chi2, p_value) + fmt(" last zero: worst bin %.2f sigma (limit 4)", worst)};
}

Result c8_finite_exact() {
  constexpr std::size_t n = 8, m = 1000000;
  constexpr double sigmas = 4.0, p_floor = 1e-4;
  const auto surv = survival_probabilities(lazy_walk(), n + 1);
  double worst = 0.0, chi2 = 0.0;  // chi2 is context only; the criterion is the per-pattern band
  std::size_t checked = 0;
  std::uint64_t seed = 80;
  for (double delta : {0.5, 1.0, 2.0})
    for (Boundary b : {Boundary::Free, Boundary::Constrained}) {
      const FiniteVolumeSampler s(lazy_kernel(), surv, delta, n, b);
      std::vector<double> counts(std::size_t{1} << n, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        CounterRng rng(seed, i);
        ++counts[s.sample(rng).pattern()];
      }
      ++seed;
      const auto law = enumerate_contact_law<double>(lazy_potential(), delta / lazy_kernel().gamma, n, b);
      std::vector<double> exact(counts.size(), 0.0);
      for (const auto& [mask, p] : law) exact[mask] = p;
      for (std::size_t mask = 0; mask < counts.size(); ++mask) {
        const double p = exact[mask];
        if (p == 0.0 && counts[mask] > 0) worst = INFINITY;
        if (p <= p_floor) continue;
        ++checked;
        const double z = (counts[mask] - m * p) / std::sqrt(m * p * (1 - p));
        worst = std::max(worst, std::abs(z));
        chi2 += z * z;
      }
    }
  return {worst <= sigmas, std::to_string(checked) + fmt(" patterns, worst %.3f sigma (limit 4), sum of z^2 = %.1f", worst, chi2)};
}

Result c9_zero_set() {
  constexpr std::size_t n = 4096, m = 100000;
  const double limit = 0.015 + 1.0 / std::sqrt(static_cast<double>(n));
  const RegimeParams params = regime_params(lazy_kernel(), 1.0);
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 90;
  for (double t : {0.1, 0.3}) {
    const InfiniteVolumeSampler s(lazy_kernel(), params, static_cast<std::size_t>(std::ceil(5 * t * n)) + 1);
    std::vector<ContactSet> samples;
    samples.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      CounterRng rng(seed, i);
      samples.push_back(s.sample(rng));
    }
    ++seed;
    const ZeroSetReport r = zero_set_test(samples, n, t, zero_set_grid(t));
    ok = ok && r.sup_deviation < limit;
    detail += fmt("t = %.1f: sup %.4f; ", t, r.sup_deviation);
  }
  return {ok, detail + fmt("limit %.4f", limit)};
}

Result c10_marginal() {
  constexpr std::size_t n = 4096, m = 100000;
  constexpr double ks_critical = 0.02, ks_localized = 0.3;
  const auto surv = survival_probabilities(lazy_walk(), n + 1);
  const PathSampler paths(lazy_walk(), n + 1);
  auto ks_at = [&](double delta, std::uint64_t seed) {
    const FiniteVolumeSampler s(lazy_kernel(), surv, delta, n, Boundary::Free);
    std::vector<double> values(m);
    for (std::size_t i = 0; i < m; ++i) {
      CounterRng rng(seed, i);
      const ContactSet c = s.sample(rng);
      values[i] = rescale(assemble_path(c, paths, Boundary::Free, rng), lazy_walk()).at(1.0);
    }
    return marginal_test(values, Boundary::Free, 1.0).ks;
  };
  const double crit = ks_at(1.0, 100), loc = ks_at(2.0, 101);
  return {crit < ks_critical && loc > ks_localized,
          fmt("KS critical %.4f (limit 0.02), localized %.4f (must exceed 0.3)", crit, loc)};
}

Result c11_llt() {
  const LltCheck c = llt_check(lazy_walk(), 4096);
  return {c.ratio >= 0.99 && c.ratio <= 1.01, fmt("f_4096(0) sqrt(2 pi n)/L = %.6f", c.ratio)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // wall-clock limit, 0 = none stated
  std::function<Result()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence (rational)", 60, c1_oracle},
      {2, "ladder identity", 60, c2_ladder},
      {3, "Neumann series cross-check", 0, c3_neumann},
      {4, "strictly delocalized asymptotics", 60, [] { return sharp_ratios(0.5, true); }},
      {5, "critical asymptotics", 60, [] { return sharp_ratios(1.0, true); }},
      {6, "localized asymptotics and free energy", 0, c6_localized},
      {7, "delocalized infinite-volume laws", 120, c7_deloc_laws},
      {8, "finite-volume sampler exactness", 0, c8_finite_exact},
      {9, "critical zero set", 300, c9_zero_set},
      {10, "critical free marginal and localized contrast", 0, c10_marginal},
      {11, "local limit theorem", 0, c11_llt},
  };
  // the shared kernel is set-up cost, not part of any criterion's runtime
  const auto k0 = std::chrono::steady_clock::now();
  (void)lazy_kernel();
  std::printf("kernel n_max = %zu built in %.1f s\n",
              kKernelSize, std::chrono::duration<double>(std::chrono::steady_clock::now() - k0).count());

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_s == 0 || secs < c.budget_s;
    const bool pass = r.pass && in_time;
    failures += !pass;
    std::printf("%s  criterion %2d  %s: %s [%.1f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, r.detail.c_str(),
                secs, in_time ? "" : ", over time budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
