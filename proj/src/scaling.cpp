#include "wetting/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wetting {

double RescaledPath::at(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(Errc::DomainError, "rescaled paths live on [0, 1]");
  if (n == 0) return values.empty() ? 0.0 : values[0];
  const double pos = t * static_cast<double>(n);
  const auto i = std::min(static_cast<std::size_t>(pos), n - 1);
  const double frac = pos - static_cast<double>(i);
  return values[i] + frac * (values[i + 1] - values[i]);
}

RescaledPath rescale(const InterfacePath& path, const WalkLaw& walk) {
  if (path.heights.empty()) throw Error(Errc::InvalidArgument, "empty path");
  RescaledPath out;
  out.n = path.heights.size() - 1;
  const double scale = out.n == 0 ? 0.0 : walk.l_const / std::sqrt(static_cast<double>(out.n));
  out.values.reserve(path.heights.size());
  for (std::int64_t x : path.heights) out.values.push_back(static_cast<double>(x) * scale);
  return out;
}

double bm_zero_tail(double t, double x) {
  if (!(t > 0.0)) throw Error(Errc::DomainError, "bm_zero_tail needs t > 0");
  if (!(x >= t)) throw Error(Errc::DomainError, "bm_zero_tail needs x >= t");
  if (std::isinf(x)) return 0.0;
  return 2.0 / M_PI * std::asin(std::sqrt(t / x));
}

double sample_bm_zero_after(double t, CounterRng& rng) {
  if (!(t > 0.0)) throw Error(Errc::DomainError, "t must be > 0");
  // P(d >= x) = U  <=>  x = t / sin^2(pi U / 2); 1 - uniform() lies in (0, 1]
  const double s = std::sin(M_PI_2 * (1.0 - rng.uniform()));
  return t / (s * s);
}

double first_zero_after(const ContactSet& contacts, std::size_t n, double t) {
  const double nn = static_cast<double>(n);
  for (std::int64_t tau : contacts.taus)
    if (static_cast<double>(tau) / nn > t) return static_cast<double>(tau) / nn;
  return std::numeric_limits<double>::infinity();
}

std::vector<double> zero_set_grid(double t) {
  std::vector<double> g;
  for (int j = 1; j <= 40; ++j) g.push_back(t * (1.0 + j / 10.0));
  return g;
}

ZeroSetReport zero_set_test(std::span<const double> d_values, double t, std::span<const double> x_grid,
                            double x_known) {
  if (!(t > 0.0 && t < 1.0)) throw Error(Errc::DomainError, "zero-set test needs 0 < t < 1");
  if (d_values.empty()) throw Error(Errc::InvalidArgument, "no samples");
  std::vector<double> sorted(d_values.begin(), d_values.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());

  ZeroSetReport rep;
  rep.t = t;
  rep.samples = sorted.size();
  for (double x : x_grid) {
    if (!(x > t)) throw Error(Errc::DomainError, "grid points must exceed t");
    if (x > x_known)
      throw Error(Errc::DomainError, "grid point " + std::to_string(x) + " lies past the sampled horizon");
    ZeroSetRow row;
    row.x = x;
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    row.empirical = 1.0 - static_cast<double>(below) / m;
    row.reference = bm_zero_tail(t, x);
    row.deviation = std::abs(row.empirical - row.reference);
    row.half_width = 3.0 * std::sqrt(row.reference * (1.0 - row.reference) / m);
    rep.sup_deviation = std::max(rep.sup_deviation, row.deviation);
    rep.rows.push_back(row);
  }
  return rep;
}

ZeroSetReport zero_set_test(std::span<const ContactSet> samples, std::size_t n, double t,
                            std::span<const double> x_grid) {
  if (n == 0) throw Error(Errc::InvalidArgument, "N must be >= 1");
  std::vector<double> d;
  d.reserve(samples.size());
  double known = std::numeric_limits<double>::infinity();
  for (const auto& c : samples) {
    d.push_back(first_zero_after(c, n, t));
    // a renewal that died inside the window has no zeros anywhere later
    const bool settled = c.terminated && !c.beyond_horizon;
    if (!settled) known = std::min(known, static_cast<double>(c.horizon) / static_cast<double>(n));
  }
  return zero_set_test(d, t, x_grid, known);
}

// The complementary error function from the C library is accurate to a few ulps,
// well inside the 1e-7 budget for the reference CDF.
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double half_normal_cdf(double x, double variance) {
  if (x <= 0.0) return 0.0;
  if (variance <= 0.0) return 1.0;
  return std::erf(x / std::sqrt(2.0 * variance));
}

MarginalReport marginal_test(std::span<const double> values, Boundary boundary, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw Error(Errc::DomainError, "marginal test needs 0 < t <= 1");
  if (values.empty()) throw Error(Errc::InvalidArgument, "no samples");
  const double variance = boundary == Boundary::Free ? t : t * (1.0 - t);
  if (variance <= 0.0) throw Error(Errc::DomainError, "reference variance vanishes at t = 1 for the bridge");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());

  MarginalReport rep;
  rep.t = t;
  rep.scale = std::sqrt(variance);
  rep.samples = sorted.size();
  rep.degenerate = sorted.back() == 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = half_normal_cdf(sorted[i], variance);
    rep.ks = std::max({rep.ks, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
  }
  for (int j = 0; j <= 40; ++j) {
    MarginalRow row;
    row.x = rep.scale * j / 10.0;
    const auto upto = std::upper_bound(sorted.begin(), sorted.end(), row.x) - sorted.begin();
    row.empirical = static_cast<double>(upto) / m;
    row.reference = half_normal_cdf(row.x, variance);
    rep.rows.push_back(row);
  }
  return rep;
}

MarginalReport marginal_test(std::span<const RescaledPath> paths, Boundary boundary, double t) {
  std::vector<double> v;
  v.reserve(paths.size());
  for (const auto& p : paths) v.push_back(p.at(t));
  return marginal_test(v, boundary, t);
}

}  // namespace wetting
