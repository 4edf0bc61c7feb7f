#ifndef WETTING_TESTS_COMMON_HPP
#define WETTING_TESTS_COMMON_HPP

#include <cmath>
#include <map>

#include "wetting/model.hpp"
#include "wetting/renewal.hpp"

namespace testing {

inline wetting::DiscretePotential lazy_potential() {
  return wetting::DiscretePotential::parse("-1 1/4\n0 1/2\n1 1/4\n");
}

inline wetting::DiscretePotential pm1_potential() { return wetting::DiscretePotential::parse("-1 1\n1 1\n"); }

inline const wetting::WalkLaw& lazy_walk() {
  static const wetting::WalkLaw w = wetting::build_walk(lazy_potential());
  return w;
}

inline const wetting::WalkLaw& pm1_walk() {
  static const wetting::WalkLaw w = wetting::build_walk(pm1_potential());
  return w;
}

// Kernels are the expensive fixture; build each size once per process.
inline const wetting::ContactKernel& lazy_kernel(std::size_t n_max = 1 << 16) {
  static std::map<std::size_t, wetting::ContactKernel> cache;
  auto it = cache.find(n_max);
  if (it == cache.end()) it = cache.emplace(n_max, wetting::contact_kernel(lazy_walk(), n_max)).first;
  return it->second;
}

inline const wetting::ContactKernel& pm1_kernel(std::size_t n_max = 1 << 14) {
  static std::map<std::size_t, wetting::ContactKernel> cache;
  auto it = cache.find(n_max);
  if (it == cache.end()) it = cache.emplace(n_max, wetting::contact_kernel(pm1_walk(), n_max)).first;
  return it->second;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing

#endif
