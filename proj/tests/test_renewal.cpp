#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "wetting/oracle.hpp"
#include "wetting/regimes.hpp"

using namespace wetting;
using testing::lazy_kernel;
using testing::pm1_kernel;
using testing::rel_err;

TEST_SUITE("renewal") {
  TEST_CASE("lazy kernel values and gamma") {
    const ContactKernel& k = lazy_kernel();
    CHECK(k.gamma == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(1.0 / k.gamma == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
    CHECK(rel_err(k.q[1], 2.0 / 3) < 1e-6);
    CHECK(rel_err(k.q[2], 1.0 / 12) < 1e-6);
    CHECK(rel_err(k.q[3], 1.0 / 24) < 1e-6);
    CHECK(rel_err(k.q[4], 5.0 / 192) < 1e-6);
    CHECK(k.tail_mass() < 0.005);
    CHECK(std::abs(k.table_mass() + k.tail_mass() - 1.0) < 1e-12);
    CHECK(k.period == 1);
  }

  TEST_CASE("fitted gamma against the exact value") {
    CHECK(rel_err(lazy_kernel().gamma, skip_free_gamma(testing::lazy_potential())->get_d()) < 1e-6);
    CHECK(rel_err(pm1_kernel().gamma, skip_free_gamma(testing::pm1_potential())->get_d()) < 1e-5);
  }

  TEST_CASE("symmetric walk: excursions have even length") {
    const ContactKernel& k = pm1_kernel();
    for (std::size_t n = 1; n <= 200; ++n) {
      if (n % 2 == 1)
        CHECK(k.q[n] == 0.0);
      else
        CHECK(k.q[n] > 0.0);
    }
    CHECK(k.period == 2);
  }

  TEST_CASE("tail decay: q(n) n^{3/2} / L flattens") {
    const ContactKernel& k = lazy_kernel();
    auto c = [&](std::size_t n) { return k.q[n] * std::pow(static_cast<double>(n), 1.5) / k.l_const; };
    CHECK(rel_err(c(1 << 15), k.cq_estimate) < 1e-3);
    CHECK(rel_err(c(1 << 16), k.cq_estimate) < 1e-3);
  }

  TEST_CASE("KernelTooShort when the fitted tail dominates gamma") {
    std::vector<double> u(33, 0.0);
    for (std::size_t n = 1; n <= 32; ++n) u[n] = 0.01 * std::pow(static_cast<double>(n), -1.5);
    try {
      contact_kernel_from_weights(u, 1.0);
      FAIL("expected KernelTooShort");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::KernelTooShort);
    }
  }

  TEST_CASE("solve_constrained examples") {
    const ContactKernel& k = lazy_kernel();
    const auto z = solve_constrained(k, 1.0, 2);
    CHECK(z[0] == 1.0);
    CHECK(rel_err(z[1], k.q[1]) < 1e-15);
    CHECK(rel_err(z[2], 19.0 / 36) < 1e-6);
    CHECK(rel_err(z[2], k.q[2] + k.q[1] * k.q[1]) < 1e-15);
    const auto z0 = solve_constrained(k, 0.0, 10);
    for (std::size_t n = 1; n <= 10; ++n) CHECK(z0[n] == 0.0);
    const auto z3 = solve_constrained(k, 0.3, 1);
    CHECK(rel_err(z3[1], 0.3 * k.q[1]) < 1e-15);
  }

  TEST_CASE("solve_constrained errors") {
    const ContactKernel& k = lazy_kernel(1024);
    CHECK_THROWS_AS(solve_constrained(k, 1.0, 2048), Error);
    try {
      solve_constrained(k, -0.1, 4);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NegativeDelta);
    }
  }

  TEST_CASE("solve_free examples") {
    const ContactKernel& k = lazy_kernel();
    const WalkLaw& w = testing::lazy_walk();
    const auto surv = survival_probabilities(w, 50);
    const auto f0 = solve_free(k, surv, 0.0, 50);
    for (std::size_t n = 0; n <= 50; ++n) CHECK(rel_err(f0[n], surv[n]) < 1e-15);
    const auto f1 = solve_free(k, w, 1.0, 1);
    CHECK(f1[0] == 1.0);
    CHECK(rel_err(f1[1], 11.0 / 12) < 1e-6);
    CHECK_THROWS_AS(solve_free(k, std::span<const double>(surv).first(10), 1.0, 20), Error);
  }

  TEST_CASE("neumann series examples") {
    const ContactKernel& k = lazy_kernel();
    const auto n0 = neumann_series(k, 1.0, 5, 0);
    CHECK(n0[0] == 1.0);
    for (std::size_t n = 1; n <= 5; ++n) CHECK(n0[n] == 0.0);
    const auto n2 = neumann_series(k, 1.0, 2, 2);
    CHECK(rel_err(n2[2], 19.0 / 36) < 1e-6);
    const auto n1 = neumann_series(k, 1.0, 2, 1);
    CHECK(rel_err(n2[2] - n1[2], 4.0 / 9) < 1e-6);  // q^{2*}(2) = q(1)^2
  }

  TEST_CASE("solve_constrained equals the Neumann series for N <= 64") {
    for (double delta : {0.3, 1.0, 2.5})
      for (const ContactKernel* k : {&lazy_kernel(), &pm1_kernel()}) {
        const auto a = solve_constrained(*k, delta, 64);
        const auto b = neumann_series(*k, delta, 64, 64);
        for (std::size_t n = 0; n <= 64; ++n) {
          if (b[n] == 0.0)
            CHECK(a[n] == 0.0);
          else
            CHECK(rel_err(a[n], b[n]) < 1e-10);
        }
      }
  }

  TEST_CASE("fast and direct solvers agree to 1e-10 at N = 2^14") {
    const std::size_t n = 1 << 14;
    const auto surv = survival_probabilities(testing::lazy_walk(), n);
    for (double delta : {0.5, 1.0, 2.0}) {
      const auto a = partition_table(lazy_kernel(), surv, delta, n, {SolverStrategy::Direct});
      const auto b = partition_table(lazy_kernel(), surv, delta, n, {SolverStrategy::Fast});
      CHECK(a.log_scale == b.log_scale);
      double worst_c = 0.0, worst_f = 0.0;
      for (std::size_t m = 0; m <= n; ++m) {
        worst_c = std::max(worst_c, rel_err(b.zc_scaled[m], a.zc_scaled[m]));
        worst_f = std::max(worst_f, rel_err(b.zf_scaled[m], a.zf_scaled[m]));
      }
      INFO("delta = " << delta);
      CHECK(worst_c < 1e-10);
      CHECK(worst_f < 1e-10);
    }
  }

  TEST_CASE("fast solver on a periodic kernel") {
    const std::size_t n = 1 << 12;
    const auto a = solve_constrained(pm1_kernel(), 1.0, n, {SolverStrategy::Direct});
    const auto b = solve_constrained(pm1_kernel(), 1.0, n, {SolverStrategy::Fast});
    for (std::size_t m = 0; m <= n; ++m) {
      if (m % 2 == 1) {
        CHECK(b[m] == 0.0);
        continue;
      }
      CHECK(rel_err(b[m], a[m]) < 1e-10);
    }
  }

  TEST_CASE("convolve strategies agree") {
    std::vector<double> a(3000), b(2000);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = 1.0 / (1.0 + static_cast<double>(i));
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::exp(-0.001 * static_cast<double>(i));
    const auto d = convolve(a, b, 4000, SolverStrategy::Direct);
    const auto f = convolve(a, b, 4000, SolverStrategy::Fast);
    for (std::size_t i = 0; i < 4000; ++i) CHECK(rel_err(f[i], d[i]) < 1e-12);
  }

  TEST_CASE("change of variables against the exact un-normalized partition functions") {
    // gamma kappa^N Z~^c_{delta,N} / delta = Z^c_{eps,N-1} and kappa^N Z~^f_{delta,N} = Z^f_{eps,N}
    const ContactKernel& k = lazy_kernel();
    const WalkLaw& w = testing::lazy_walk();
    for (double delta : {0.5, 1.0, 2.0}) {
      const double eps = delta / k.gamma;
      const auto exact = partition_functions_via_renewal<double>(w, eps, 12);
      const auto zc = solve_constrained(k, delta, 13);
      const auto zf = solve_free(k, w, delta, 12);
      for (std::size_t n = 1; n <= 12; ++n) {
        CHECK(rel_err(k.gamma * zc[n + 1] / delta, exact.constrained[n]) < 1e-12);
        CHECK(rel_err(zf[n], exact.free[n]) < 1e-12);
      }
    }
  }

  TEST_CASE("monotone in delta") {
    const ContactKernel& k = lazy_kernel();
    std::vector<double> prev(101, 0.0);
    for (double delta : {0.1, 0.5, 0.9, 1.0, 1.5, 3.0}) {
      const auto z = solve_constrained(k, delta, 100);
      for (std::size_t n = 0; n <= 100; ++n) CHECK(z[n] >= prev[n]);
      prev = z;
    }
  }

  TEST_CASE("partition table scales only when needed and the logs agree") {
    const auto surv = survival_probabilities(testing::lazy_walk(), 4096);
    const auto small = partition_table(lazy_kernel(), surv, 2.0, 600);
    CHECK(small.log_scale == 0.0);
    const auto big = partition_table(lazy_kernel(), surv, 2.0, 4096);
    CHECK(big.log_scale > 0.0);
    CHECK(std::abs(big.log_scale - free_energy(lazy_kernel(), 2.0).f_delta) < 1e-8);
    for (std::size_t n : {0, 1, 10, 300, 600}) {
      CHECK(std::abs(big.log_zc(n) - small.log_zc(n)) < 1e-10 * std::max(1.0, std::abs(small.log_zc(n))));
      CHECK(std::abs(big.log_zf(n) - small.log_zf(n)) < 1e-10 * std::max(1.0, std::abs(small.log_zf(n))));
    }
    CHECK(std::isfinite(big.log_zc(4096)));
    for (std::size_t n = 0; n <= 4096; ++n) CHECK(big.zf_scaled[n] >= big.zc_scaled[n]);
  }

  TEST_CASE("table invariants") {
    const auto surv = survival_probabilities(testing::lazy_walk(), 500);
    const auto t = partition_table(lazy_kernel(), surv, 0.7, 500);
    CHECK(t.zc_scaled[0] == 1.0);
    for (std::size_t n = 0; n <= 500; ++n) {
      CHECK(t.zc_scaled[n] >= 0.0);
      CHECK(t.zf_scaled[n] >= t.zc_scaled[n] * surv[0]);
    }
  }
}
