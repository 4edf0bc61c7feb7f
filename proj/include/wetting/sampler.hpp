#ifndef WETTING_SAMPLER_HPP
#define WETTING_SAMPLER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "wetting/regimes.hpp"
#include "wetting/renewal.hpp"
#include "wetting/rng.hpp"

namespace wetting {

enum class Boundary { Free, Constrained };

const char* boundary_name(Boundary b) noexcept;

// Contact epochs tau_0 = 0 < tau_1 < ... of one sample.
//
// Finite volume: horizon = N; for the constrained boundary the last entry is the
// pinned endpoint N + 1. Infinite volume: taus lists the contacts <= horizon;
// `beyond_horizon` marks that the renewal has at least one more contact past it.
struct ContactSet {
  std::vector<std::int64_t> taus{0};
  std::size_t horizon = 0;
  bool terminated = false;      // defective renewal died (delocalized infinite volume)
  bool beyond_horizon = false;
  std::size_t returns = 0;      // number of contacts after tau_0, including any past the horizon

  // contacts in [1, horizon] as a bitmask (horizon <= 63)
  std::uint64_t pattern() const;
};

// Heights x_0 = 0, ..., x_horizon.
struct InterfacePath {
  std::vector<std::int64_t> heights;
};

// Exact sampler for the contact set of the finite-volume measure, working on the
// modified partition functions: from a contact with remaining budget R the next
// gap s has weight delta q(s) Z~_{R-s}; for the free boundary "no further
// contact" has weight P(R).
class FiniteVolumeSampler {
 public:
  FiniteVolumeSampler(const ContactKernel& kernel, std::span<const double> survival, double delta, std::size_t n,
                      Boundary boundary, SolverOptions options = {});

  ContactSet sample(CounterRng& rng) const;

  // Probability of the exact contact pattern (taus as produced by sample()).
  double pattern_probability(const ContactSet& contacts) const;

  std::size_t size() const { return n_; }
  Boundary boundary() const { return boundary_; }
  double delta() const { return delta_; }
  const PartitionTable& table() const { return table_; }

 private:
  std::size_t n_;
  std::size_t budget_;
  Boundary boundary_;
  double delta_;
  PartitionTable table_;
  std::vector<double> step_weight_;  // delta q(s) e^{-F s}
  std::vector<double> stop_weight_;  // P(r) e^{-F r}
};

// Infinite-volume contact process: renewal with q_delta (localized), q (critical)
// or the defective law delta q (strictly delocalized), observed up to `horizon`.
class InfiniteVolumeSampler {
 public:
  InfiniteVolumeSampler(const ContactKernel& kernel, const RegimeParams& params, std::size_t horizon);

  ContactSet sample(CounterRng& rng) const;

  std::size_t horizon() const { return horizon_; }
  Regime regime() const { return regime_; }

 private:
  // gap drawn from the interarrival law; 0 means "past the kernel table"
  std::size_t draw_gap(CounterRng& rng) const;

  std::size_t horizon_;
  Regime regime_;
  double delta_;
  std::vector<double> cumulative_;  // cumulative interarrival law over the table, total incl. tail = 1
};

// Tables for exact excursion and meander sampling:
//   g_m(x): weight of paths from x > 0 staying positive and hitting 0 at step m,
//   h_r(x): probability that the walk from x stays positive for r steps.
class PathSampler {
 public:
  PathSampler(const WalkLaw& walk, std::size_t max_length);

  // interior heights of a positive excursion of the given length (length - 1 values)
  std::vector<std::int64_t> excursion(std::size_t length, CounterRng& rng) const;
  // heights x_1..x_length of a positive meander started at 0
  std::vector<std::int64_t> meander(std::size_t length, CounterRng& rng) const;

  double excursion_mass(std::size_t length) const;
  double meander_mass(std::size_t length) const;
  std::size_t max_length() const { return max_length_; }
  const WalkLaw& walk() const { return walk_; }

 private:
  double g(std::size_t m, std::int64_t x) const;
  double h(std::size_t r, std::int64_t x) const;

  WalkLaw walk_;
  std::size_t max_length_;
  std::vector<std::vector<double>> g_;  // g_[m][x - 1], trailing zeros trimmed
  std::vector<std::vector<double>> h_;  // h_[r][x - 1], trailing ones trimmed
};

// Convenience one-shot wrappers.
ContactSet sample_contacts_finite(const ContactKernel& kernel, const WalkLaw& walk, double delta, std::size_t n,
                                  Boundary boundary, CounterRng& rng);
ContactSet sample_contacts_infinite(const RegimeParams& params, const ContactKernel& kernel, std::size_t horizon,
                                    CounterRng& rng);
std::vector<std::int64_t> sample_excursion(const WalkLaw& walk, std::size_t length, CounterRng& rng);

// Pastes excursions over the contact set; each gap k uses rng.substream(k). The
// segment after the last listed contact (free boundary, or infinite volume) is a
// positive meander up to the horizon.
InterfacePath assemble_path(const ContactSet& contacts, const PathSampler& paths, Boundary boundary,
                            const CounterRng& rng);

struct DelocLaw {
  std::vector<double> law;  // k = 0..k_max
  double tail = 0.0;        // 1 - sum(law)
};

// P(last zero = k) = (1 - delta) Z~^c_{delta,k}
DelocLaw deloc_last_zero_law(const ContactKernel& kernel, double delta, std::size_t k_max);
// P(number of returns = k) = (1 - delta) delta^k
DelocLaw deloc_return_law(double delta, std::size_t k_max);

}  // namespace wetting

#endif
