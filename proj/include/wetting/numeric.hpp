#ifndef WETTING_NUMERIC_HPP
#define WETTING_NUMERIC_HPP

#include <cmath>
#include <span>
#include <string>

#include <gmpxx.h>

namespace wetting {

using Rational = mpq_class;

// Parses "3", "-2", "0.25", "1e-3", "1/4" or "2.5e-1" into an exact rational.
Rational parse_rational(const std::string& text);

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

}  // namespace wetting

#endif
