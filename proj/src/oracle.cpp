#include "wetting/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "wetting/renewal.hpp"

namespace wetting {

namespace {

constexpr double kEnumerationLimit = 1e8;

void check_size(std::size_t support, std::size_t steps) {
  if (std::pow(static_cast<double>(support), static_cast<double>(steps)) > kEnumerationLimit)
    throw Error(Errc::TooLarge, std::to_string(support) + "^" + std::to_string(steps) +
                                    " paths exceed the enumeration limit of 1e8");
}

template <class S>
S weight_as(const DiscretePotential::Point& p) {
  if constexpr (std::is_same_v<S, Rational>)
    return p.weight;
  else
    return p.weight.get_d();
}

template <class S>
struct Steps {
  std::vector<int> step;
  std::vector<S> weight;

  explicit Steps(const DiscretePotential& potential) {
    for (const auto& p : potential.points()) {
      step.push_back(p.step);
      weight.push_back(weight_as<S>(p));
    }
  }

  S weight_of(long s) const {
    for (std::size_t i = 0; i < step.size(); ++i)
      if (step[i] == s) return weight[i];
    return S(0);
  }
};

// Depth-first walk over x_1..x_N >= 0; `visit(mask, weight)` is called once per
// complete path with its zero pattern and full weight.
template <class S, class Visit>
void for_each_path(const DiscretePotential& potential, const S& epsilon, std::size_t n, Boundary boundary,
                   Visit&& visit) {
  if (potential.empty()) throw Error(Errc::ZeroMass, "empty potential");
  if (n > 63) throw Error(Errc::TooLarge, "contact patterns are limited to N <= 63");
  check_size(potential.points().size(), n);
  const Steps<S> steps(potential);
  const long down = std::max(0, -potential.min_step());
  const bool pinned = boundary == Boundary::Constrained;

  auto rec = [&](auto&& self, std::size_t i, long x, std::uint64_t mask, const S& w) -> void {
    if (i == n) {
      if (!pinned) {
        visit(mask, w);
        return;
      }
      const S last = steps.weight_of(-x);
      if (last != S(0)) visit(mask, S(w * last));
      return;
    }
    for (std::size_t k = 0; k < steps.step.size(); ++k) {
      const long y = x + steps.step[k];
      if (y < 0) continue;
      // the pinned endpoint must stay reachable in the remaining n - i steps
      if (pinned && y > static_cast<long>(n - i) * down) continue;
      if (y == 0) {
        if (epsilon == S(0)) continue;
        self(self, i + 1, y, mask | (std::uint64_t{1} << i), S(w * steps.weight[k] * epsilon));
      } else {
        self(self, i + 1, y, mask, S(w * steps.weight[k]));
      }
    }
  };
  rec(rec, 0, 0, 0, S(1));
}

template <class S>
std::string show(const S& v) {
  std::ostringstream os;
  if constexpr (std::is_same_v<S, Rational>)
    os << v.get_str();
  else {
    os.precision(17);
    os << v;
  }
  return os.str();
}

template <class S>
bool same(const S& a, const S& b) {
  if constexpr (std::is_same_v<S, Rational>)
    return a == b;
  else
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

template <class S>
S enumerate_partition(const DiscretePotential& potential, const S& epsilon, std::size_t n, Boundary boundary) {
  if (epsilon < S(0)) throw Error(Errc::InvalidArgument, "epsilon must be >= 0");
  S total(0);
  for_each_path<S>(potential, epsilon, n, boundary, [&](std::uint64_t, const S& w) { total += w; });
  return total;
}

template <class S>
S enumerate_ladder(const WalkLawT<S>& walk, std::size_t n) {
  const std::size_t support = static_cast<std::size_t>(walk.max_step - walk.min_step + 1);
  check_size(support, n + 1);
  S total(0);
  // stop a branch as soon as the first weak descent S_k <= 0 has happened
  auto rec = [&](auto&& self, std::size_t k, long height, const S& w) -> void {
    for (int s = walk.min_step; s <= walk.max_step; ++s) {
      const S& ps = walk.p[s - walk.min_step];
      if (ps == S(0)) continue;
      const long next = height + s;
      if (next <= 0) {
        if (k + 1 == n + 1 && next == 0) total += w * ps;
        continue;
      }
      if (k + 1 < n + 1) self(self, k + 1, next, S(w * ps));
    }
  };
  rec(rec, 0, 0, S(1));
  return total;
}

template <class S>
S return_probability(const WalkLawT<S>& walk, std::size_t n) {
  // dist[j] = P(S_k = j + k * min_step)
  std::vector<S> dist{S(1)};
  const std::size_t width = walk.p.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<S> next(dist.size() + width - 1, S(0));
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (dist[i] == S(0)) continue;
      for (std::size_t j = 0; j < width; ++j) next[i + j] += dist[i] * walk.p[j];
    }
    dist.swap(next);
  }
  const long offset = -static_cast<long>(n) * walk.min_step;
  if (offset < 0 || offset >= static_cast<long>(dist.size())) return S(0);
  return dist[static_cast<std::size_t>(offset)];
}

LltCheck llt_check(const WalkLaw& walk, std::size_t n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "llt_check needs n >= 1");
  // lattice span d: S_n lives on n * min_step + d Z, so the Gaussian mass of a
  // lattice point is d times the density, and zero off the sublattice
  long d = 0;
  for (int s = walk.min_step; s <= walk.max_step; ++s)
    if (walk.prob(s) != 0.0) d = std::gcd(d, static_cast<long>(s - walk.min_step));
  d = std::max(d, 1L);
  const long shift = -static_cast<long>(n) * walk.min_step;
  LltCheck out;
  out.span = static_cast<std::size_t>(d);
  out.f0 = return_probability(walk, n);
  out.prediction =
      shift % d == 0 ? static_cast<double>(d) * walk.l_const / std::sqrt(2.0 * M_PI * static_cast<double>(n)) : 0.0;
  out.ratio = out.prediction > 0.0 ? out.f0 / out.prediction : (out.f0 == 0.0 ? 1.0 : INFINITY);
  return out;
}

template <class S>
std::vector<std::pair<std::uint64_t, S>> enumerate_contact_law(const DiscretePotential& potential,
                                                               const S& epsilon, std::size_t n, Boundary boundary) {
  if (epsilon < S(0)) throw Error(Errc::InvalidArgument, "epsilon must be >= 0");
  std::map<std::uint64_t, S> mass;
  S total(0);
  for_each_path<S>(potential, epsilon, n, boundary, [&](std::uint64_t mask, const S& w) {
    mass[mask] += w;
    total += w;
  });
  if (total == S(0)) throw Error(Errc::ZeroMass, "no admissible path");
  std::vector<std::pair<std::uint64_t, S>> out;
  for (auto& [mask, w] : mass)
    if (w != S(0)) out.emplace_back(mask, S(w / total));
  return out;
}

std::optional<Rational> skip_free_gamma(const DiscretePotential& potential) {
  if (potential.empty() || potential.min_step() != -1) return std::nullopt;
  return Rational(1) - potential.weight_exact(-1) / potential.kappa_exact();
}

namespace {

template <class S>
void partition_rows(const DiscretePotential& potential, const WalkLawT<S>& walk, const std::vector<S>& eps_values,
                    const std::vector<std::string>& eps_labels, std::size_t n, std::vector<OracleRow>& rows) {
  for (std::size_t e = 0; e < eps_values.size(); ++e) {
    const auto renewal = partition_functions_via_renewal<S>(walk, eps_values[e], n);
    for (std::size_t m = 1; m <= n; ++m) {
      for (Boundary b : {Boundary::Constrained, Boundary::Free}) {
        const S lhs = enumerate_partition<S>(potential, eps_values[e], m, b);
        const S& rhs = b == Boundary::Constrained ? renewal.constrained[m] : renewal.free[m];
        rows.push_back({std::string("Z^") + (b == Boundary::Constrained ? "c" : "f") + " eps=" + eps_labels[e] +
                            " N=" + std::to_string(m),
                        show(lhs), show(rhs), same(lhs, rhs)});
      }
    }
  }
}

double fitted_gamma(const DiscretePotential& potential) {
  return contact_kernel(build_walk(potential), 1 << 14).gamma;
}

}  // namespace

std::vector<OracleRow> check_partition(const DiscretePotential& potential, std::size_t n) {
  std::vector<OracleRow> rows;
  const std::optional<Rational> exact_gamma = skip_free_gamma(potential);
  const Rational eps_c = exact_gamma ? Rational(1 / *exact_gamma) : Rational(1.0 / fitted_gamma(potential));
  const std::vector<std::string> labels{"0", "1/2", "eps_c", "2eps_c"};
  if (potential.exact()) {
    const std::vector<Rational> eps{Rational(0), Rational(1, 2), eps_c, Rational(2 * eps_c)};
    partition_rows<Rational>(potential, build_exact_walk(potential), eps, labels, n, rows);
  } else {
    const double ec = eps_c.get_d();
    partition_rows<double>(potential, build_walk(potential), {0.0, 0.5, ec, 2 * ec}, labels, n, rows);
  }
  return rows;
}

std::vector<OracleRow> check_ladder(const DiscretePotential& potential, std::size_t n) {
  std::vector<OracleRow> rows;
  auto run = [&](const auto& walk) {
    using S = std::decay_t<decltype(walk.kappa)>;
    const std::vector<S> u = excursion_weights(walk, n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      const S lhs = u[k + 1];
      const S rhs = enumerate_ladder(walk, k);
      rows.push_back({"bridge_weight(" + std::to_string(k) + ") = P(T=" + std::to_string(k + 1) + ", H=0)",
                      show(lhs), show(rhs), same(lhs, rhs)});
    }
  };
  if (potential.exact())
    run(build_exact_walk(potential));
  else
    run(build_walk(potential));
  return rows;
}

std::vector<OracleRow> check_llt(const DiscretePotential& potential, std::size_t n) {
  const WalkLaw walk = build_walk(potential);
  std::vector<OracleRow> rows;
  std::vector<std::size_t> ns;
  for (std::size_t k = 64; k < n; k *= 2) ns.push_back(k);
  ns.push_back(n);
  for (std::size_t k : ns) {
    const LltCheck c = llt_check(walk, k);
    rows.push_back({"f_" + std::to_string(k) + "(0) vs " + (c.span > 1 ? std::to_string(c.span) + " " : "") +
                        "L/sqrt(2 pi n), ratio " + show(c.ratio), show(c.f0),
                    show(c.prediction), std::abs(c.ratio - 1.0) <= 0.01});
  }
  return rows;
}

std::vector<OracleRow> check_contacts(const DiscretePotential& potential, std::size_t n) {
  const WalkLaw walk = build_walk(potential);
  const ContactKernel kernel = contact_kernel(walk, std::max<std::size_t>(1 << 14, n + 2));
  const std::vector<double> surv = survival_probabilities(walk, n + 1);
  std::vector<OracleRow> rows;
  for (double delta : {0.5, 1.0, 2.0}) {
    for (Boundary b : {Boundary::Free, Boundary::Constrained}) {
      std::optional<FiniteVolumeSampler> sampler;
      std::vector<std::pair<std::uint64_t, double>> law;
      bool renewal_feasible = true, paths_exist = true;
      try {
        sampler.emplace(kernel, surv, delta, n, b);
      } catch (const Error& e) {
        if (e.code() != Errc::Infeasible) throw;
        renewal_feasible = false;
      }
      try {
        law = enumerate_contact_law<double>(potential, delta / kernel.gamma, n, b);
      } catch (const Error& e) {
        if (e.code() != Errc::ZeroMass) throw;
        paths_exist = false;
      }
      if (!renewal_feasible || !paths_exist) {
        rows.push_back({std::string(boundary_name(b)) + " delta=" + show(delta) + " admissible",
                        paths_exist ? "yes" : "no", renewal_feasible ? "yes" : "no",
                        paths_exist == renewal_feasible});
        continue;
      }
      for (const auto& [mask, prob] : law) {
        ContactSet c;
        c.horizon = n;
        for (std::size_t i = 0; i < n; ++i)
          if (mask >> i & 1U) c.taus.push_back(static_cast<std::int64_t>(i + 1));
        if (b == Boundary::Constrained) c.taus.push_back(static_cast<std::int64_t>(n + 1));
        const double formula = sampler->pattern_probability(c);
        std::string bits;
        for (std::size_t i = 0; i < n; ++i) bits += (mask >> i & 1U) ? '1' : '0';
        rows.push_back({std::string(boundary_name(b)) + " delta=" + show(delta) + " zeros=" + bits, show(prob),
                        show(formula), std::abs(prob - formula) <= 1e-10 * std::max(prob, 1e-300) + 1e-15});
      }
    }
  }
  return rows;
}

template double enumerate_partition<double>(const DiscretePotential&, const double&, std::size_t, Boundary);
template Rational enumerate_partition<Rational>(const DiscretePotential&, const Rational&, std::size_t, Boundary);
template double enumerate_ladder<double>(const WalkLaw&, std::size_t);
template Rational enumerate_ladder<Rational>(const ExactWalkLaw&, std::size_t);
template double return_probability<double>(const WalkLaw&, std::size_t);
template Rational return_probability<Rational>(const ExactWalkLaw&, std::size_t);
template std::vector<std::pair<std::uint64_t, double>> enumerate_contact_law<double>(const DiscretePotential&,
                                                                                     const double&, std::size_t,
                                                                                     Boundary);
template std::vector<std::pair<std::uint64_t, Rational>> enumerate_contact_law<Rational>(const DiscretePotential&,
                                                                                         const Rational&, std::size_t,
                                                                                         Boundary);

}  // namespace wetting
