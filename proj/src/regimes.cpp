#include "wetting/regimes.hpp"

#include <cmath>
#include <string>

namespace wetting {

const char* regime_name(Regime regime) noexcept {
  switch (regime) {
    case Regime::StrictlyDelocalized: return "strictly-delocalized";
    case Regime::Critical: return "critical";
    case Regime::Localized: return "localized";
  }
  return "unknown";
}

Regime classify(double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw Error(Errc::NegativeDelta, "delta must be finite and >= 0, got " + std::to_string(delta));
  if (delta < 1.0) return Regime::StrictlyDelocalized;
  if (delta == 1.0) return Regime::Critical;
  return Regime::Localized;
}

namespace {

double table_laplace(const ContactKernel& kernel, double f) {
  CompensatedSum s;
  for (std::size_t t = 1; t <= kernel.n_max(); ++t)
    if (kernel.q[t] != 0.0) s.add(kernel.q[t] * std::exp(-f * static_cast<double>(t)));
  return s.value();
}

}  // namespace

FreeEnergy free_energy(const ContactKernel& kernel, double delta) {
  FreeEnergy out;
  if (classify(delta) != Regime::Localized) return out;

  const double completed = kernel.table_mass() + kernel.tail_mass();
  if (std::abs(completed - 1.0) > 1e-6)
    throw Error(Errc::KernelMassDeficit,
                "kernel mass (table + tail) is " + std::to_string(completed) + ", expected 1 within 1e-6");

  auto excess = [&](double f) { return delta * (table_laplace(kernel, f) + kernel.tail_laplace(f)) - 1.0; };

  double lo = 0.0, hi = std::log(delta);
  double g_lo = excess(lo), g_hi = excess(hi);
  // absolute tolerance 1e-13 first; keep halving while the residual is still large
  while (hi - lo > 1e-13 || std::min(std::abs(g_lo), std::abs(g_hi)) > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g = excess(mid);
    if (g > 0.0) {
      lo = mid;
      g_lo = g;
    } else {
      hi = mid;
      g_hi = g;
    }
  }
  const double f = std::abs(g_lo) <= std::abs(g_hi) ? lo : hi;
  out.localized = true;
  // a positive root always exists for delta > 1; never report the bracket end 0
  out.f_delta = f > 0.0 ? f : hi;
  out.residual = std::abs(excess(out.f_delta));
  out.truncated_residual = std::abs(delta * table_laplace(kernel, out.f_delta) - 1.0);
  out.truncation_bias = delta * kernel.tail_laplace(out.f_delta);
  if (out.truncation_bias > 0.1)
    throw Error(Errc::KernelMassDeficit, "fitted tail carries more than 10% of the tilt sum; increase n_max");
  return out;
}

TiltedKernel tilted_kernel(const ContactKernel& kernel, double delta) {
  const FreeEnergy fe = free_energy(kernel, delta);
  if (!fe.localized) throw Error(Errc::NotLocalized, "tilted kernel needs delta > 1");
  TiltedKernel out;
  out.f_delta = fe.f_delta;
  out.q.assign(kernel.q.size(), 0.0);
  CompensatedSum mean;
  for (std::size_t t = 1; t <= kernel.n_max(); ++t) {
    out.q[t] = delta * kernel.q[t] * std::exp(-fe.f_delta * static_cast<double>(t));
    mean.add(static_cast<double>(t) * out.q[t]);
  }
  out.tail_mass = fe.truncation_bias;
  mean.add(delta * kernel.tail_first_moment(fe.f_delta));
  out.mu_delta = mean.value();
  return out;
}

RegimeParams regime_params(const ContactKernel& kernel, double delta) {
  RegimeParams p;
  p.delta = delta;
  p.regime = classify(delta);
  if (p.regime == Regime::Localized) {
    TiltedKernel tk = tilted_kernel(kernel, delta);
    p.f_delta = tk.f_delta;
    p.mu_delta = tk.mu_delta;
    p.tilted_tail_mass = tk.tail_mass;
    p.q_tilted = std::move(tk.q);
  }
  return p;
}

PartitionPrediction predict_partition(const ContactKernel& kernel, std::span<const double> survival, double delta,
                                      std::size_t n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "predictions need N >= 1");
  if (survival.size() < n + 1)
    throw Error(Errc::InconsistentTables, "survival probabilities needed up to " + std::to_string(n));
  PartitionPrediction out;
  out.regime = classify(delta);
  const double nn = static_cast<double>(n);
  const double l = kernel.l_const;
  const double cq = kernel.cq_estimate;
  const double l_prime = std::sqrt(nn) * survival[n];
  switch (out.regime) {
    case Regime::StrictlyDelocalized:
      out.zc = delta * cq / ((1.0 - delta) * (1.0 - delta)) * l / (nn * std::sqrt(nn));
      out.zf = l_prime / ((1.0 - delta) * std::sqrt(nn));
      break;
    case Regime::Critical:
      out.zc = 1.0 / (2.0 * M_PI * cq * l * std::sqrt(nn));
      out.zf = l_prime / (2.0 * cq * l);
      break;
    case Regime::Localized: {
      const TiltedKernel tk = tilted_kernel(kernel, delta);
      CompensatedSum pref;
      for (std::size_t t = 0; t < survival.size(); ++t)
        pref.add(std::exp(-tk.f_delta * static_cast<double>(t)) * survival[t]);
      out.zc = 1.0 / tk.mu_delta;
      out.zf = pref.value() / tk.mu_delta;
      out.log_scale = nn * tk.f_delta;
      break;
    }
  }
  return out;
}

PartitionPrediction predict_partition(const ContactKernel& kernel, const WalkLaw& walk, double delta,
                                      std::size_t n) {
  std::size_t reach = n;
  if (classify(delta) == Regime::Localized) {
    // enough terms for e^{-F t} P(t) to drop below 1e-17
    const double f = free_energy(kernel, delta).f_delta;
    reach = std::max(reach, static_cast<std::size_t>(std::min(40.0 / f, 1e6)));
  }
  const std::vector<double> surv = survival_probabilities(walk, reach);
  return predict_partition(kernel, surv, delta, n);
}

}  // namespace wetting
