// Channel constructors: binary symmetric and noiseless channels, seeded
// random channels, and a discretization of a continuous channel family with
// a known closed-form information value, used for refinement studies.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "augustin/measures.hpp"

namespace augustin {

// Binary symmetric channel with crossover probability p in [0, 0.5].
inline Channel bsc(double p) {
  detail::require(p >= 0.0 && p <= 0.5,
                  "crossover probability must lie in [0, 0.5]");
  return Channel({Distribution({1.0 - p, p}), Distribution({p, 1.0 - p})});
}

// Noiseless channel: n inputs mapped to n distinct outputs.
inline Channel identity_channel(std::size_t n) {
  detail::require(n > 0, "identity channel needs at least one symbol");
  std::vector<Distribution> rows;
  rows.reserve(n);
  for (std::size_t x = 0; x < n; ++x)
    rows.push_back(Distribution::point_mass(n, x));
  return Channel(std::move(rows));
}

// Random channel with rows drawn independently from the flat simplex
// sampler; fully reproducible from the seed.
inline Channel random_channel(std::size_t nx, std::size_t ny,
                              std::uint64_t seed) {
  detail::require(nx > 0 && ny > 0, "channel dimensions must be positive");
  std::mt19937_64 rng(seed);
  std::vector<Distribution> rows;
  rows.reserve(nx);
  for (std::size_t x = 0; x < nx; ++x)
    rows.push_back(Distribution(detail::sample_simplex(rng, ny)));
  return Channel(std::move(rows));
}

// Random probability vector from the flat simplex sampler.
inline Distribution random_distribution(std::size_t n, std::uint64_t seed) {
  detail::require(n > 0, "distribution needs a non-empty alphabet");
  std::mt19937_64 rng(seed);
  return Distribution(detail::sample_simplex(rng, n));
}

struct Example1Instance {
  Channel W;
  Distribution P;
};

// Discretization of the continuous family
//
//   W(dy|x) = [ (1{y<x} + (y-x)) dy on (0,1)  +  (gamma - 1/2) delta_{x+1} ] / gamma
//
// with x ranging over (0,1). Inputs are the midpoints x_i = (i-1/2)/n with P
// uniform; outputs are m equal bins partitioning (0,1) followed by n atoms,
// atom i belonging to input i. The density is piecewise linear, so each bin
// mass is an exact integral:
//
//   bin (a,b) of row i:  [ |(a,b) n (0,x_i)| + (b^2-a^2)/2 - x_i (b-a) ] / gamma
//
// and every row sums to 1 analytically (the continuous part carries mass
// 1/(2 gamma) independent of x, the atom the remaining (gamma-1/2)/gamma).
inline Example1Instance example1_discretized(double gamma, std::size_t n,
                                             std::size_t m) {
  detail::require(gamma > 0.5, "gamma must exceed 0.5");
  detail::require(n >= 2 && m >= 2, "grid sizes must be at least 2");

  const double atom_mass = (gamma - 0.5) / gamma;
  std::vector<Distribution> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    std::vector<double> row(m + n, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const double a = static_cast<double>(j) / static_cast<double>(m);
      const double b = static_cast<double>(j + 1) / static_cast<double>(m);
      const double below = std::max(0.0, std::min(b, x) - a);
      row[j] = (below + (b * b - a * a) / 2.0 - x * (b - a)) / gamma;
    }
    row[m + i] = atom_mass;
    rows.emplace_back(std::move(row));
  }
  return {Channel(std::move(rows)), Distribution::uniform(n)};
}

// Closed-form information of the continuous family above:
// (alpha ln gamma + ln(1+alpha)) / (1-alpha) for alpha in (0,1), +infinity
// for alpha >= 1.
inline ExtendedReal example1_information(double gamma, const Order& alpha) {
  detail::require(gamma > 0.5, "gamma must exceed 0.5");
  if (alpha.is_one() || alpha.value() >= 1.0) return ExtendedReal::infinity();
  const double a = alpha.value();
  return ExtendedReal((a * std::log(gamma) + std::log1p(a)) / (1.0 - a));
}

}  // namespace augustin
