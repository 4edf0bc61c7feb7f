#ifndef WETTING_ORACLE_HPP
#define WETTING_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wetting/model.hpp"
#include "wetting/sampler.hpp"

// Brute-force ground truth. Everything here enumerates paths or convolves the
// step law directly and shares no code with the renewal solver.

namespace wetting {

// Z^a_{eps,N}: sum over x_1..x_N >= 0 of prod w(x_i - x_{i-1}) eps^{#{i <= N: x_i = 0}},
// times w(-x_N) for the constrained boundary (x_{N+1} = 0, not rewarded).
template <class S>
S enumerate_partition(const DiscretePotential& potential, const S& epsilon, std::size_t n, Boundary boundary);

// P(T_1 = n + 1, H_1 = 0) for the first weak descending ladder epoch/height, by
// enumerating increment sequences.
template <class S>
S enumerate_ladder(const WalkLawT<S>& walk, std::size_t n);

// f_n(0) = P(S_n = 0) by n-fold convolution of the step law.
template <class S>
S return_probability(const WalkLawT<S>& walk, std::size_t n);

struct LltCheck {
  std::size_t span = 1;     // lattice span of the step law
  double f0 = 0.0;
  double prediction = 0.0;  // span * L / sqrt(2 pi n) on the walk's sublattice, else 0
  double ratio = 0.0;
};

LltCheck llt_check(const WalkLaw& walk, std::size_t n);

// Exact law of the zero pattern of x_1..x_N (bit i-1 set when x_i = 0), patterns
// with zero weight omitted, sorted by pattern.
template <class S>
std::vector<std::pair<std::uint64_t, S>> enumerate_contact_law(const DiscretePotential& potential,
                                                               const S& epsilon, std::size_t n, Boundary boundary);

// Closed-form gamma = 1 - p(-1) when the smallest step is -1 (downward skip-free
// walks cannot jump over 0, so the first weak descent lands on 0 unless the first
// step is -1).
std::optional<Rational> skip_free_gamma(const DiscretePotential& potential);

// Rows printed by `wetting oracle`: both sides of an identity and the verdict.
struct OracleRow {
  std::string label;
  std::string lhs;
  std::string rhs;
  bool pass = false;
};

// Enumeration vs renewal route for Z^c and Z^f, N = 1..n, eps in {0, 1/2, eps_c, 2 eps_c}.
std::vector<OracleRow> check_partition(const DiscretePotential& potential, std::size_t n);
// bridge_weight(k) vs enumerate_ladder(k), k = 0..n.
std::vector<OracleRow> check_ladder(const DiscretePotential& potential, std::size_t n);
// f_n(0) vs L/sqrt(2 pi n); passes when the ratio is within 1%.
std::vector<OracleRow> check_llt(const DiscretePotential& potential, std::size_t n);
// Enumerated contact law vs the renewal formula used by the sampler, delta in {1/2, 1, 2}.
std::vector<OracleRow> check_contacts(const DiscretePotential& potential, std::size_t n);

extern template double enumerate_partition<double>(const DiscretePotential&, const double&, std::size_t, Boundary);
extern template Rational enumerate_partition<Rational>(const DiscretePotential&, const Rational&, std::size_t,
                                                       Boundary);
extern template double enumerate_ladder<double>(const WalkLaw&, std::size_t);
extern template Rational enumerate_ladder<Rational>(const ExactWalkLaw&, std::size_t);
extern template double return_probability<double>(const WalkLaw&, std::size_t);
extern template Rational return_probability<Rational>(const ExactWalkLaw&, std::size_t);
extern template std::vector<std::pair<std::uint64_t, double>> enumerate_contact_law<double>(
    const DiscretePotential&, const double&, std::size_t, Boundary);
extern template std::vector<std::pair<std::uint64_t, Rational>> enumerate_contact_law<Rational>(
    const DiscretePotential&, const Rational&, std::size_t, Boundary);

}  // namespace wetting

#endif
