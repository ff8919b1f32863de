// Foundational types for information measures on finite alphabets:
// extended reals with an explicit +infinity, divergence orders, non-negative
// measures, probability vectors, row-stochastic channels, the total-variation
// metric, and support-based Lebesgue decomposition.
//
// Conventions used throughout the library:
//   - exact zeros are semantically meaningful (they encode support structure
//     and absolute continuity) and are never smoothed away;
//   - +infinity is an explicit ExtendedReal value, never a large float;
//   - probability vectors must sum to 1 within 1e-9 on construction and are
//     rejected otherwise, not silently renormalized.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace augustin {

// Sum tolerance accepted when constructing a Distribution or Channel row.
inline constexpr double normalization_tolerance = 1e-9;

// Orders within this distance of 1 are treated as exactly 1 (KL branch).
inline constexpr double order_one_tolerance = 1e-12;

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

inline void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a) +
                                " vs " + std::to_string(b));
  }
}

}  // namespace detail

// A real number extended with +infinity. Negative infinity and NaN are
// rejected on construction, so arithmetic below never produces NaN. The
// conventions 0 * (+inf) = 0 and (+inf) + x = +inf are built in; subtracting
// +infinity is a domain error.
class ExtendedReal {
 public:
  ExtendedReal() : value_(0.0) {}

  ExtendedReal(double value) : value_(value) {
    if (std::isnan(value) || value == -std::numeric_limits<double>::infinity())
      throw std::invalid_argument("extended real must be finite or +infinity");
  }

  static ExtendedReal infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  bool is_finite() const { return std::isfinite(value_); }

  // The stored value; +infinity is returned as the IEEE infinity.
  double value() const { return value_; }

  ExtendedReal& operator+=(const ExtendedReal& rhs) {
    value_ += rhs.value_;
    return *this;
  }

  friend ExtendedReal operator+(ExtendedReal lhs, const ExtendedReal& rhs) {
    lhs += rhs;
    return lhs;
  }

  // Finite - finite and inf - finite are defined; x - inf is not.
  friend ExtendedReal operator-(const ExtendedReal& lhs,
                                const ExtendedReal& rhs) {
    if (!rhs.is_finite())
      throw std::domain_error("cannot subtract +infinity from an extended real");
    return ExtendedReal(lhs.value_ - rhs.value_);
  }

  // Scaling by a non-negative weight, with the convention 0 * inf = 0.
  friend ExtendedReal operator*(double weight, const ExtendedReal& rhs) {
    if (weight < 0.0 && !rhs.is_finite())
      throw std::domain_error("cannot scale +infinity by a negative weight");
    if (weight == 0.0) return ExtendedReal(0.0);
    return ExtendedReal(weight * rhs.value_);
  }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.value_ == b.value_;
  }
  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) {
    return a.value_ <= b.value_;
  }
  friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) {
    return b < a;
  }
  friend bool operator>=(const ExtendedReal& a, const ExtendedReal& b) {
    return b <= a;
  }

 private:
  double value_;
};

// A divergence order alpha in (0, +inf]. Orders within 1e-12 of 1 report
// is_one() and are evaluated on the KL branch.
class Order {
 public:
  explicit Order(double value) : value_(value) {
    if (!(value > 0.0))
      throw std::invalid_argument("order must be positive");
  }

  static Order one() { return Order(1.0); }
  static Order infinite() {
    return Order(std::numeric_limits<double>::infinity());
  }

  double value() const { return value_; }
  bool is_one() const { return std::fabs(value_ - 1.0) <= order_one_tolerance; }
  bool is_infinite() const { return std::isinf(value_); }

 private:
  double value_;
};

// A non-negative measure on a finite alphabet. Entries must be finite and
// >= 0; the total mass is cached at construction (values are immutable).
class FiniteMeasure {
 public:
  explicit FiniteMeasure(std::vector<double> mass) : mass_(std::move(mass)) {
    double total = 0.0;
    for (std::size_t y = 0; y < mass_.size(); ++y) {
      const double v = mass_[y];
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("measure entry " + std::to_string(y) +
                                    " must be finite and non-negative");
      total += v;
    }
    total_ = total;
  }

  std::size_t size() const { return mass_.size(); }
  double operator[](std::size_t y) const { return mass_[y]; }
  const std::vector<double>& mass() const { return mass_; }
  double total_mass() const { return total_; }

  std::vector<double>::const_iterator begin() const { return mass_.begin(); }
  std::vector<double>::const_iterator end() const { return mass_.end(); }

 private:
  std::vector<double> mass_;
  double total_;
};

// A probability vector: a FiniteMeasure whose entries sum to 1 within the
// normalization tolerance. Out-of-tolerance input is an error.
class Distribution : public FiniteMeasure {
 public:
  explicit Distribution(std::vector<double> mass)
      : FiniteMeasure(std::move(mass)) {
    if (std::fabs(total_mass() - 1.0) > normalization_tolerance)
      throw std::invalid_argument(
          "probability vector must sum to 1 within 1e-9, got sum " +
          std::to_string(total_mass()));
  }

  static Distribution uniform(std::size_t n) {
    detail::require(n > 0, "uniform distribution needs a non-empty alphabet");
    return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  static Distribution point_mass(std::size_t n, std::size_t at) {
    detail::require(at < n, "point mass index out of range");
    std::vector<double> mass(n, 0.0);
    mass[at] = 1.0;
    return Distribution(std::move(mass));
  }
};

// A row-stochastic matrix: one Distribution per input symbol, all on the
// same output alphabet.
class Channel {
 public:
  explicit Channel(std::vector<Distribution> rows) : rows_(std::move(rows)) {
    detail::require(!rows_.empty(), "channel needs at least one row");
    for (const Distribution& row : rows_)
      detail::require_same_size(row.size(), rows_.front().size());
  }

  static Channel from_rows(const std::vector<std::vector<double>>& rows) {
    std::vector<Distribution> built;
    built.reserve(rows.size());
    for (std::size_t x = 0; x < rows.size(); ++x) {
      try {
        built.emplace_back(rows[x]);
      } catch (const std::invalid_argument& err) {
        throw std::invalid_argument("channel row " + std::to_string(x) + ": " +
                                    err.what());
      }
    }
    return Channel(std::move(built));
  }

  std::size_t input_size() const { return rows_.size(); }
  std::size_t output_size() const { return rows_.front().size(); }
  const Distribution& row(std::size_t x) const { return rows_[x]; }

 private:
  std::vector<Distribution> rows_;
};

// Total variation distance sum_y |a(y) - b(y)| between two measures on the
// same alphabet.
inline double tv_distance(const FiniteMeasure& a, const FiniteMeasure& b) {
  detail::require_same_size(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t y = 0; y < a.size(); ++y) sum += std::fabs(a[y] - b[y]);
  return sum;
}

struct LebesgueParts {
  FiniteMeasure absolutely_continuous;
  FiniteMeasure singular;
};

// Splits q into the part carried by supp(ref) and the part living off it.
// The two parts sum exactly to q and have disjoint supports relative to ref.
inline LebesgueParts lebesgue_decompose(const FiniteMeasure& q,
                                        const FiniteMeasure& ref) {
  detail::require_same_size(q.size(), ref.size());
  std::vector<double> ac(q.size(), 0.0);
  std::vector<double> sing(q.size(), 0.0);
  for (std::size_t y = 0; y < q.size(); ++y) {
    if (ref[y] > 0.0)
      ac[y] = q[y];
    else
      sing[y] = q[y];
  }
  return {FiniteMeasure(std::move(ac)), FiniteMeasure(std::move(sing))};
}

struct NormalizeResult {
  Distribution distribution;
  double total_mass;
};

// Scales a non-zero measure to a probability vector and reports the original
// total mass. The zero measure cannot be normalized.
inline NormalizeResult normalize(const FiniteMeasure& q) {
  const double total = q.total_mass();
  if (!(total > 0.0))
    throw std::domain_error("cannot normalize the zero measure");
  std::vector<double> scaled(q.size());
  for (std::size_t y = 0; y < q.size(); ++y) scaled[y] = q[y] / total;
  return {Distribution(std::move(scaled)), total};
}

namespace detail {

// Builds a Distribution from a vector that is already a probability vector
// up to floating-point drift inherited from 1e-9-tolerance inputs. The drift
// is divided out so downstream constructions never trip the tolerance check.
inline Distribution as_distribution(std::vector<double> mass) {
  double total = 0.0;
  for (double v : mass) total += v;
  if (!(std::fabs(total - 1.0) <= 1e-6))
    throw std::logic_error("internal vector is not close to a probability vector");
  for (double& v : mass) v /= total;
  return Distribution(std::move(mass));
}

// Uniform double in [0, 1) from the top 53 bits of the generator output.
// Hand-rolled so results are identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// SplitMix64 finalizer, used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Flat (Dirichlet(1,...,1)) sample on the simplex via normalized
// exponential spacings.
inline std::vector<double> sample_simplex(std::mt19937_64& rng,
                                          std::size_t n) {
  std::vector<double> mass(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mass[i] = -std::log(1.0 - uniform01(rng));
    total += mass[i];
  }
  for (double& v : mass) v /= total;
  return mass;
}

}  // namespace detail

}  // namespace augustin
