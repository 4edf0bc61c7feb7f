#ifndef WETTING_SCALING_HPP
#define WETTING_SCALING_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "wetting/model.hpp"
#include "wetting/rng.hpp"
#include "wetting/sampler.hpp"

namespace wetting {

// X^N_{i/N} = x_i L / sqrt(N), linearly interpolated in between.
struct RescaledPath {
  std::size_t n = 0;
  std::vector<double> values;  // i = 0..n

  double at(double t) const;
};

RescaledPath rescale(const InterfacePath& path, const WalkLaw& walk);

// P(d_t >= x) for the zero set of Brownian motion: (2/pi) arcsin(sqrt(t/x)).
double bm_zero_tail(double t, double x);

// d_t drawn from its Brownian limit law (inverse of bm_zero_tail).
double sample_bm_zero_after(double t, CounterRng& rng);

// First contact strictly after t, divided by n. +inf when there is none up to the
// horizon (the caller then only knows d_t > horizon / n).
double first_zero_after(const ContactSet& contacts, std::size_t n, double t);

// x = t (1 + j/10), j = 1..40
std::vector<double> zero_set_grid(double t);

struct ZeroSetRow {
  double x = 0.0;
  double empirical = 0.0;
  double reference = 0.0;
  double deviation = 0.0;   // |empirical - reference|
  double half_width = 0.0;  // 3 binomial sigmas at the reference value
};

struct ZeroSetReport {
  double t = 0.0;
  std::size_t samples = 0;
  std::vector<ZeroSetRow> rows;
  double sup_deviation = 0.0;
};

// `d_values` may contain +inf; every grid point must lie in (t, x_known] where
// x_known is the largest x for which "d >= x" is decided, passed by the caller.
ZeroSetReport zero_set_test(std::span<const double> d_values, double t, std::span<const double> x_grid,
                            double x_known);
ZeroSetReport zero_set_test(std::span<const ContactSet> samples, std::size_t n, double t,
                            std::span<const double> x_grid);

double normal_cdf(double x);
// CDF of |Normal(0, variance)|
double half_normal_cdf(double x, double variance);

struct MarginalRow {
  double x = 0.0;
  double empirical = 0.0;
  double reference = 0.0;
};

struct MarginalReport {
  double t = 0.0;
  double scale = 0.0;  // standard deviation of the reference normal
  std::size_t samples = 0;
  double ks = 0.0;
  bool degenerate = false;  // all values are 0
  std::vector<MarginalRow> rows;
};

// Kolmogorov-Smirnov distance of the values against |N(0, t)| (free) or
// |N(0, t(1-t))| (constrained).
MarginalReport marginal_test(std::span<const double> values, Boundary boundary, double t);
MarginalReport marginal_test(std::span<const RescaledPath> paths, Boundary boundary, double t);

}  // namespace wetting

#endif
