#include "wetting/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wetting {

const char* boundary_name(Boundary b) noexcept { return b == Boundary::Free ? "free" : "constrained"; }

std::uint64_t ContactSet::pattern() const {
  if (horizon > 63) throw Error(Errc::InvalidArgument, "pattern() needs horizon <= 63");
  std::uint64_t mask = 0;
  for (std::int64_t t : taus)
    if (t >= 1 && t <= static_cast<std::int64_t>(horizon)) mask |= std::uint64_t{1} << (t - 1);
  return mask;
}

// ---------------------------------------------------------------------------
// finite volume

FiniteVolumeSampler::FiniteVolumeSampler(const ContactKernel& kernel, std::span<const double> survival,
                                         double delta, std::size_t n, Boundary boundary, SolverOptions options)
    : n_(n), budget_(n + (boundary == Boundary::Constrained ? 1 : 0)), boundary_(boundary), delta_(delta) {
  if (kernel.n_max() < budget_)
    throw Error(Errc::KernelTooShort, "kernel n_max = " + std::to_string(kernel.n_max()) + " < " +
                                          std::to_string(budget_) + " needed by the sampler");
  if (survival.size() < budget_ + 1)
    throw Error(Errc::InconsistentTables, "survival probabilities needed up to " + std::to_string(budget_));
  table_ = partition_table(kernel, survival, delta, budget_, options);
  const double f = table_.log_scale;
  step_weight_.assign(budget_ + 1, 0.0);
  stop_weight_.assign(budget_ + 1, 0.0);
  for (std::size_t s = 0; s <= budget_; ++s) {
    const double damp = std::exp(-f * static_cast<double>(s));
    if (s > 0) step_weight_[s] = delta * kernel.q[s] * damp;
    if (s < survival.size()) stop_weight_[s] = survival[s] * damp;
  }
  if (boundary_ == Boundary::Constrained) {
    const bool feasible = delta == 0.0 ? kernel.q[budget_] > 0.0 : table_.zc_scaled[budget_] > 0.0;
    if (!feasible)
      throw Error(Errc::Infeasible, "no admissible constrained path of length N = " + std::to_string(n_));
  }
}

ContactSet FiniteVolumeSampler::sample(CounterRng& rng) const {
  ContactSet out;
  out.horizon = n_;
  const auto& zc = table_.zc_scaled;
  const auto& zf = table_.zf_scaled;
  std::size_t pos = 0;

  if (boundary_ == Boundary::Constrained) {
    if (delta_ == 0.0) {
      out.taus.push_back(static_cast<std::int64_t>(budget_));
    } else {
      while (pos < budget_) {
        const std::size_t r = budget_ - pos;
        const double target = rng.uniform() * zc[r];
        CompensatedSum acc;
        std::size_t pick = 0;
        for (std::size_t s = 1; s <= r; ++s) {
          const double w = step_weight_[s] * zc[r - s];
          if (w <= 0.0) continue;
          pick = s;
          acc.add(w);
          if (acc.value() > target) break;
        }
        pos += pick;  // pick > 0: zc[r] > 0 by construction along admissible paths
        out.taus.push_back(static_cast<std::int64_t>(pos));
      }
    }
  } else {
    while (true) {
      const std::size_t r = n_ - pos;
      const double target = rng.uniform() * zf[r];
      CompensatedSum acc;
      std::size_t pick = 0;  // 0: no further contact
      bool chosen = false;
      for (std::size_t s = 1; s <= r; ++s) {
        const double w = step_weight_[s] * zf[r - s];
        if (w <= 0.0) continue;
        pick = s;
        acc.add(w);
        if (acc.value() > target) {
          chosen = true;
          break;
        }
      }
      if (!chosen && stop_weight_[r] > 0.0) pick = 0;
      if (pick == 0) break;
      pos += pick;
      out.taus.push_back(static_cast<std::int64_t>(pos));
    }
  }
  out.returns = out.taus.size() - 1;
  return out;
}

double FiniteVolumeSampler::pattern_probability(const ContactSet& contacts) const {
  const auto& t = contacts.taus;
  if (t.empty() || t.front() != 0) return 0.0;
  double weight = 1.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] <= t[i - 1] || t[i] > static_cast<std::int64_t>(budget_)) return 0.0;
    weight *= step_weight_[static_cast<std::size_t>(t[i] - t[i - 1])];
  }
  if (boundary_ == Boundary::Constrained) {
    if (t.back() != static_cast<std::int64_t>(budget_)) return 0.0;
    if (delta_ == 0.0) return t.size() == 2 ? 1.0 : 0.0;
    return weight / table_.zc_scaled[budget_];
  }
  return weight * stop_weight_[n_ - static_cast<std::size_t>(t.back())] / table_.zf_scaled[n_];
}

// ---------------------------------------------------------------------------
// infinite volume

InfiniteVolumeSampler::InfiniteVolumeSampler(const ContactKernel& kernel, const RegimeParams& params,
                                             std::size_t horizon)
    : horizon_(horizon), regime_(params.regime), delta_(params.delta) {
  if (horizon < 1) throw Error(Errc::InvalidArgument, "horizon must be >= 1");
  if (horizon > kernel.n_max())
    throw Error(Errc::KernelTooShort, "horizon " + std::to_string(horizon) + " exceeds kernel n_max " +
                                          std::to_string(kernel.n_max()));
  const std::vector<double>* law = &kernel.q;
  if (regime_ == Regime::Localized) {
    if (!params.q_tilted) throw Error(Errc::InvalidArgument, "localized regime needs the tilted kernel");
    law = &*params.q_tilted;
  }
  cumulative_.assign(law->size(), 0.0);
  CompensatedSum acc;
  for (std::size_t t = 1; t < law->size(); ++t) {
    acc.add((*law)[t]);
    cumulative_[t] = acc.value();
  }
}

std::size_t InfiniteVolumeSampler::draw_gap(CounterRng& rng) const {
  const double u = rng.uniform();
  if (u >= cumulative_.back()) return 0;  // tail mass past the table
  return static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
}

ContactSet InfiniteVolumeSampler::sample(CounterRng& rng) const {
  ContactSet out;
  out.horizon = horizon_;
  std::size_t pos = 0;
  if (regime_ == Regime::StrictlyDelocalized) {
    while (true) {
      if (rng.uniform() >= delta_) {
        out.terminated = true;
        break;
      }
      ++out.returns;
      if (out.beyond_horizon) continue;  // only the count matters from here on
      const std::size_t gap = draw_gap(rng);
      if (gap == 0 || pos + gap > horizon_) {
        out.beyond_horizon = true;
        continue;
      }
      pos += gap;
      out.taus.push_back(static_cast<std::int64_t>(pos));
    }
    return out;
  }
  while (true) {
    const std::size_t gap = draw_gap(rng);
    if (gap == 0 || pos + gap > horizon_) {
      out.beyond_horizon = true;
      break;
    }
    pos += gap;
    out.taus.push_back(static_cast<std::int64_t>(pos));
  }
  out.returns = out.taus.size() - 1;
  return out;
}

// ---------------------------------------------------------------------------
// excursions and meanders

PathSampler::PathSampler(const WalkLaw& walk, std::size_t max_length) : walk_(walk), max_length_(max_length) {
  const std::int64_t down = walk_.down_reach();
  const std::int64_t up = walk_.max_step;

  g_.resize(max_length + 1);
  if (max_length >= 1) {
    auto& row = g_[1];
    for (std::int64_t x = 1; x <= down; ++x) row.push_back(walk_.prob(static_cast<int>(-x)));
    while (!row.empty() && row.back() == 0.0) row.pop_back();
  }
  for (std::size_t m = 2; m <= max_length; ++m) {
    const auto& prev = g_[m - 1];
    const std::int64_t len = std::min<std::int64_t>(static_cast<std::int64_t>(m) * down,
                                                    static_cast<std::int64_t>(prev.size()) + down);
    std::vector<double> row(static_cast<std::size_t>(std::max<std::int64_t>(len, 0)), 0.0);
    for (std::int64_t x = 1; x <= len; ++x) {
      double acc = 0.0;
      for (int s = walk_.min_step; s <= walk_.max_step; ++s) {
        const std::int64_t y = x + s;
        if (y < 1 || y > static_cast<std::int64_t>(prev.size())) continue;
        acc += walk_.prob(s) * prev[static_cast<std::size_t>(y - 1)];
      }
      row[static_cast<std::size_t>(x - 1)] = acc;
    }
    while (!row.empty() && row.back() == 0.0) row.pop_back();
    g_[m] = std::move(row);
  }

  // h_r for r < max_length; a meander of length m started at 0 is at height <= (m - r) * up
  // when r steps remain, so row r needs x <= (max_length - r) * up.
  h_.resize(max_length + 1);
  for (std::size_t r = 1; r <= max_length; ++r) {
    const auto& prev = h_[r - 1];  // beyond prev.size() the value is 1
    const std::int64_t cap = static_cast<std::int64_t>(max_length - r) * up + up;
    const std::int64_t len = std::min<std::int64_t>(cap, static_cast<std::int64_t>(prev.size()) + down);
    std::vector<double> row(static_cast<std::size_t>(std::max<std::int64_t>(len, 0)), 1.0);
    for (std::int64_t x = 1; x <= len; ++x) {
      CompensatedSum acc;
      for (int s = walk_.min_step; s <= walk_.max_step; ++s) {
        const std::int64_t y = x + s;
        if (y < 1) continue;
        const double hv = y > static_cast<std::int64_t>(prev.size()) ? 1.0 : prev[static_cast<std::size_t>(y - 1)];
        acc.add(walk_.prob(s) * hv);
      }
      row[static_cast<std::size_t>(x - 1)] = std::min(acc.value(), 1.0);
    }
    while (!row.empty() && row.back() == 1.0) row.pop_back();
    h_[r] = std::move(row);
  }
}

double PathSampler::g(std::size_t m, std::int64_t x) const {
  if (x < 1) return 0.0;
  const auto& row = g_[m];
  return x > static_cast<std::int64_t>(row.size()) ? 0.0 : row[static_cast<std::size_t>(x - 1)];
}

double PathSampler::h(std::size_t r, std::int64_t x) const {
  if (x < 1) return 0.0;
  const auto& row = h_[r];
  return x > static_cast<std::int64_t>(row.size()) ? 1.0 : row[static_cast<std::size_t>(x - 1)];
}

double PathSampler::excursion_mass(std::size_t length) const {
  if (length < 1 || length > max_length_) throw Error(Errc::InvalidArgument, "excursion length out of range");
  if (length == 1) return walk_.prob(0);
  CompensatedSum acc;
  for (int s = 1; s <= walk_.max_step; ++s) acc.add(walk_.prob(s) * g(length - 1, s));
  return acc.value();
}

double PathSampler::meander_mass(std::size_t length) const {
  if (length > max_length_) throw Error(Errc::InvalidArgument, "meander length out of range");
  if (length == 0) return 1.0;
  CompensatedSum acc;
  for (int s = 1; s <= walk_.max_step; ++s) acc.add(walk_.prob(s) * h(length - 1, s));
  return acc.value();
}

namespace {

// picks a step s in [lo, hi] with probability weight(s) / sum; returns the chosen step
template <class Weight>
int pick_step(int lo, int hi, Weight&& weight, CounterRng& rng) {
  double total = 0.0;
  double w[64];
  const int count = hi - lo + 1;
  for (int i = 0; i < count; ++i) total += (w[i] = weight(lo + i));
  const double target = rng.uniform() * total;
  double acc = 0.0;
  int last = lo - 1;
  for (int i = 0; i < count; ++i) {
    if (w[i] <= 0.0) continue;
    last = lo + i;
    acc += w[i];
    if (acc > target) return last;
  }
  return last;
}

}  // namespace

std::vector<std::int64_t> PathSampler::excursion(std::size_t length, CounterRng& rng) const {
  if (length < 1 || length > max_length_)
    throw Error(Errc::InvalidArgument, "excursion length " + std::to_string(length) + " out of range");
  if (excursion_mass(length) <= 0.0)
    throw Error(Errc::ImpossibleExcursion, "no positive excursion of length " + std::to_string(length));
  std::vector<std::int64_t> out;
  out.reserve(length - 1);
  std::int64_t x = 0;
  for (std::size_t i = 0; i + 1 < length; ++i) {
    const std::size_t remaining = length - i - 1;  // steps left after this one
    const int s = pick_step(
        walk_.min_step, walk_.max_step,
        [&](int step) { return walk_.prob(step) * g(remaining, x + step); }, rng);
    x += s;
    out.push_back(x);
  }
  return out;
}

std::vector<std::int64_t> PathSampler::meander(std::size_t length, CounterRng& rng) const {
  if (length > max_length_)
    throw Error(Errc::InvalidArgument, "meander length " + std::to_string(length) + " out of range");
  std::vector<std::int64_t> out;
  out.reserve(length);
  std::int64_t x = 0;
  for (std::size_t i = 0; i < length; ++i) {
    const std::size_t remaining = length - i - 1;
    const int s = pick_step(
        walk_.min_step, walk_.max_step,
        [&](int step) { return walk_.prob(step) * h(remaining, x + step); }, rng);
    x += s;
    out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------

ContactSet sample_contacts_finite(const ContactKernel& kernel, const WalkLaw& walk, double delta, std::size_t n,
                                  Boundary boundary, CounterRng& rng) {
  const std::vector<double> surv = survival_probabilities(walk, n + 1);
  return FiniteVolumeSampler(kernel, surv, delta, n, boundary).sample(rng);
}

ContactSet sample_contacts_infinite(const RegimeParams& params, const ContactKernel& kernel, std::size_t horizon,
                                    CounterRng& rng) {
  return InfiniteVolumeSampler(kernel, params, horizon).sample(rng);
}

std::vector<std::int64_t> sample_excursion(const WalkLaw& walk, std::size_t length, CounterRng& rng) {
  return PathSampler(walk, length).excursion(length, rng);
}

InterfacePath assemble_path(const ContactSet& contacts, const PathSampler& paths, Boundary boundary,
                            const CounterRng& rng) {
  const std::size_t n = contacts.horizon;
  InterfacePath out;
  out.heights.assign(n + 1, 0);
  const auto& t = contacts.taus;
  std::uint64_t gap_index = 0;
  for (std::size_t i = 1; i < t.size(); ++i, ++gap_index) {
    const auto a = static_cast<std::size_t>(t[i - 1]);
    const auto b = static_cast<std::size_t>(t[i]);
    CounterRng sub = rng.substream(gap_index);
    const auto interior = paths.excursion(b - a, sub);
    for (std::size_t k = 0; k < interior.size() && a + 1 + k <= n; ++k) out.heights[a + 1 + k] = interior[k];
  }
  const auto last = static_cast<std::size_t>(t.back());
  const bool open_end = boundary == Boundary::Free || contacts.beyond_horizon || contacts.terminated;
  if (open_end && last < n) {
    CounterRng sub = rng.substream(gap_index);
    const auto tail = paths.meander(n - last, sub);
    for (std::size_t k = 0; k < tail.size(); ++k) out.heights[last + 1 + k] = tail[k];
  }
  return out;
}

DelocLaw deloc_last_zero_law(const ContactKernel& kernel, double delta, std::size_t k_max) {
  if (classify(delta) != Regime::StrictlyDelocalized)
    throw Error(Errc::NotDelocalized, "last-zero law needs delta < 1");
  const std::size_t n = std::min(k_max, kernel.n_max());
  const std::vector<double> z = solve_constrained(kernel, delta, n);
  DelocLaw out;
  out.law.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out.law[k] = (1.0 - delta) * z[k];
  out.tail = 1.0 - compensated_sum(out.law);
  return out;
}

DelocLaw deloc_return_law(double delta, std::size_t k_max) {
  if (classify(delta) != Regime::StrictlyDelocalized)
    throw Error(Errc::NotDelocalized, "return-count law needs delta < 1");
  DelocLaw out;
  out.law.resize(k_max + 1);
  double dk = 1.0;
  for (std::size_t k = 0; k <= k_max; ++k, dk *= delta) out.law[k] = (1.0 - delta) * dk;
  out.tail = std::pow(delta, static_cast<double>(k_max + 1));
  return out;
}

}  // namespace wetting
