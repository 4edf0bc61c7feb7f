#ifndef WETTING_MODEL_HPP
#define WETTING_MODEL_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wetting/error.hpp"
#include "wetting/numeric.hpp"

namespace wetting {

// Boltzmann weights w(x) = exp(-V(x)) of an integer-supported potential.
// Steps with w(x) = 0 (V = +inf) are simply absent.
class DiscretePotential {
 public:
  struct Point {
    int step;
    Rational weight;
  };

  DiscretePotential() = default;

  // `exact` records whether the weights are meant literally (parsed decimals or
  // fractions) or are binary approximations of something else.
  static DiscretePotential from_rationals(std::vector<std::pair<int, Rational>> weights);
  static DiscretePotential from_doubles(const std::vector<std::pair<int, double>>& weights);

  // Text format: one "step weight" pair per line, '#' starts a comment.
  static DiscretePotential parse(std::string_view text);
  static DiscretePotential load(const std::string& path);

  const std::vector<Point>& points() const { return points_; }
  bool exact() const { return exact_; }
  bool empty() const { return points_.empty(); }
  int min_step() const { return points_.front().step; }
  int max_step() const { return points_.back().step; }

  Rational weight_exact(int step) const;
  double weight(int step) const { return weight_exact(step).get_d(); }
  Rational kappa_exact() const;
  double kappa() const { return kappa_exact().get_d(); }

  // Stable 64-bit fingerprint of the normalized weight list.
  std::uint64_t fingerprint() const;
  std::string canonical_text() const;

 private:
  std::vector<Point> points_;  // sorted by step, strictly positive weights
  bool exact_ = true;
};

// Increment law P(Y = x) = w(x)/kappa of the underlying random walk.
template <class S>
struct WalkLawT {
  int min_step = 0;
  int max_step = 0;
  std::vector<S> p;  // p[x - min_step]
  S kappa{};
  S mean{};
  S sigma2{};
  double l_const = 0.0;  // L = 1/sigma

  S prob(int x) const { return (x < min_step || x > max_step) ? S(0) : p[x - min_step]; }
  int down_reach() const { return -min_step; }
};

using WalkLaw = WalkLawT<double>;
using ExactWalkLaw = WalkLawT<Rational>;

WalkLaw build_walk(const DiscretePotential& potential);
ExactWalkLaw build_exact_walk(const DiscretePotential& potential);

double truncated_variance(const WalkLaw& walk, double t);

namespace detail {

template <class S>
bool is_zero(const S& x) {
  return x == S(0);
}

// One step of the walk killed on leaving (0, inf): next[y] = sum_s cur[y-s] p(s), y >= 1.
// `cur` and `next` are indexed by height (index 0 unused). Trailing exact zeros of
// `next` are trimmed, and heights above `cap` are dropped.
template <class S>
void killed_step(const WalkLawT<S>& walk, const std::vector<S>& cur, std::vector<S>& next, std::size_t cap) {
  const long top = static_cast<long>(cur.size()) - 1 + walk.max_step;
  const long hi = std::min<long>(top, static_cast<long>(cap));
  next.assign(static_cast<std::size_t>(std::max<long>(hi, 0)) + 1, S(0));
  for (long y = 1; y <= hi; ++y) {
    S acc(0);
    for (int s = walk.min_step; s <= walk.max_step; ++s) {
      const long x = y - s;
      if (x < 1 || x >= static_cast<long>(cur.size())) continue;
      const S& px = walk.p[s - walk.min_step];
      if (is_zero(px)) continue;
      acc += cur[static_cast<std::size_t>(x)] * px;
    }
    next[static_cast<std::size_t>(y)] = acc;
  }
  while (next.size() > 1 && is_zero(next.back())) next.pop_back();
}

}  // namespace detail

// P(n) = P(S_1 > 0, ..., S_n > 0) for n = 0..n_max, with P(0) = 1.
template <class S>
std::vector<S> survival_probabilities(const WalkLawT<S>& walk, std::size_t n_max) {
  std::vector<S> out(n_max + 1, S(0));
  out[0] = S(1);
  if (n_max == 0) return out;
  std::vector<S> cur(static_cast<std::size_t>(std::max(walk.max_step, 0)) + 1, S(0));
  for (int s = 1; s <= walk.max_step; ++s) cur[static_cast<std::size_t>(s)] = walk.prob(s);
  const std::size_t unbounded = static_cast<std::size_t>(-1) / 2;
  for (std::size_t n = 1;; ++n) {
    if constexpr (std::is_same_v<S, double>) {
      CompensatedSum total;
      for (double v : cur) total.add(v);
      out[n] = total.value();
    } else {
      S total(0);
      for (const S& v : cur) total += v;
      out[n] = total;
    }
    if (n == n_max) break;
    std::vector<S> next;
    detail::killed_step(walk, cur, next, unbounded);
    cur.swap(next);
  }
  return out;
}

// Unnormalized contact masses u(n) = P(positive excursion of length n returning to 0),
// n = 1..n_max (index 0 is unused and zero). u(n) = bridge_weight(n - 1).
template <class S>
std::vector<S> excursion_weights(const WalkLawT<S>& walk, std::size_t n_max) {
  std::vector<S> u(n_max + 1, S(0));
  if (n_max == 0) return u;
  u[1] = walk.prob(0);
  if (n_max == 1) return u;
  const std::size_t down = static_cast<std::size_t>(walk.down_reach());
  // cur holds the killed walk at time m = n - 1 >= 1
  std::vector<S> cur(static_cast<std::size_t>(std::max(walk.max_step, 0)) + 1, S(0));
  for (int s = 1; s <= walk.max_step; ++s) cur[static_cast<std::size_t>(s)] = walk.prob(s);
  for (std::size_t n = 2; n <= n_max; ++n) {
    S acc(0);
    const std::size_t reach = std::min(cur.size() - 1, down);
    for (std::size_t x = 1; x <= reach; ++x) acc += cur[x] * walk.prob(-static_cast<int>(x));
    u[n] = acc;
    if (n == n_max) break;
    // heights above (n_max - n) * down can no longer return in time
    std::vector<S> next;
    detail::killed_step(walk, cur, next, (n_max - n) * down);
    cur.swap(next);
  }
  return u;
}

// Z^c_{0,n} / kappa^{n+1}: weight of a strictly positive excursion of length n + 1.
template <class S>
S bridge_weight(const WalkLawT<S>& walk, std::size_t n) {
  return excursion_weights(walk, n + 1)[n + 1];
}

}  // namespace wetting

#endif
