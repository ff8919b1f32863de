// Renyi divergence of all orders between a probability vector and a finite
// measure, the conditional version averaged over an input distribution, and
// the Pinsker slack.
//
// Zero conventions (these implement 0*ln 0 = 0 and 0^a = 0 exactly):
//   - terms with w(y) = 0 are skipped for every order;
//   - alpha > 1: any y with w(y) > 0 and q(y) = 0 forces +infinity;
//   - alpha < 1: terms with q(y) = 0 contribute 0; if no term survives the
//     supports are disjoint and the divergence is +infinity.
//
// Evaluation is done in log space with max-shift stabilization so that large
// orders (alpha up to ~1e3) neither overflow nor underflow.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "augustin/measures.hpp"

namespace augustin {

namespace detail {

// log(sum_i exp(t_i)) with max-shift; -infinity for an empty list.
inline double log_sum_exp(const std::vector<double>& t) {
  if (t.empty()) return -std::numeric_limits<double>::infinity();
  const double shift = *std::max_element(t.begin(), t.end());
  if (!std::isfinite(shift)) return shift;
  double sum = 0.0;
  for (double v : t) sum += std::exp(v - shift);
  return shift + std::log(sum);
}

}  // namespace detail

// D_alpha(w || q), Def.-style power mean in log space. Result is >= 0
// whenever q is a probability vector, with equality iff w = q.
inline ExtendedReal renyi_divergence(const Order& alpha, const Distribution& w,
                                     const FiniteMeasure& q) {
  detail::require_same_size(w.size(), q.size());

  if (alpha.is_infinite()) {
    double max_ratio = 0.0;
    for (std::size_t y = 0; y < w.size(); ++y) {
      if (w[y] == 0.0) continue;
      if (q[y] == 0.0) return ExtendedReal::infinity();
      max_ratio = std::max(max_ratio, w[y] / q[y]);
    }
    return ExtendedReal(std::log(max_ratio));
  }

  if (alpha.is_one()) {
    double sum = 0.0;
    for (std::size_t y = 0; y < w.size(); ++y) {
      if (w[y] == 0.0) continue;
      if (q[y] == 0.0) return ExtendedReal::infinity();
      sum += w[y] * (std::log(w[y]) - std::log(q[y]));
    }
    return ExtendedReal(sum);
  }

  const double a = alpha.value();
  std::vector<double> terms;
  terms.reserve(w.size());
  for (std::size_t y = 0; y < w.size(); ++y) {
    if (w[y] == 0.0) continue;
    if (q[y] == 0.0) {
      if (a > 1.0) return ExtendedReal::infinity();
      continue;
    }
    terms.push_back(a * std::log(w[y]) + (1.0 - a) * std::log(q[y]));
  }
  if (terms.empty()) return ExtendedReal::infinity();
  return ExtendedReal(detail::log_sum_exp(terms) / (a - 1.0));
}

// D^c_alpha(W || q | P) = sum_x P(x) D_alpha(W(x) || q), with +infinity
// absorbing over rows of positive input probability. Rows with P(x) = 0 are
// ignored entirely (0 * inf = 0).
inline ExtendedReal conditional_renyi_divergence(const Order& alpha,
                                                 const Channel& W,
                                                 const FiniteMeasure& q,
                                                 const Distribution& P) {
  detail::require_same_size(W.input_size(), P.size());
  detail::require_same_size(W.output_size(), q.size());
  double sum = 0.0;
  for (std::size_t x = 0; x < W.input_size(); ++x) {
    if (P[x] == 0.0) continue;
    const ExtendedReal d = renyi_divergence(alpha, W.row(x), q);
    if (!d.is_finite()) return ExtendedReal::infinity();
    sum += P[x] * d.value();
  }
  return ExtendedReal(sum);
}

// D_alpha(w || q) - (1 ^ alpha)/2 * tv(w, q)^2. Non-negative by Pinsker's
// inequality; +infinity when the divergence is infinite.
inline ExtendedReal pinsker_slack(const Order& alpha, const Distribution& w,
                                  const Distribution& q) {
  const ExtendedReal d = renyi_divergence(alpha, w, q);
  if (!d.is_finite()) return ExtendedReal::infinity();
  const double coeff = std::min(1.0, alpha.value()) / 2.0;
  const double tv = tv_distance(w, q);
  return ExtendedReal(d.value() - coeff * tv * tv);
}

}  // namespace augustin
