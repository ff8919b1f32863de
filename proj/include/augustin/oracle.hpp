// Brute-force and first-order minimizers of q -> D^c_alpha(W||q|P) over the
// probability simplex, used to cross-validate the fixed-point solver. Both
// evaluate the objective through their own code paths, independent of the
// operator implementations.
//
// grid_minimize exhausts the lattice {k/resolution} on the simplex face
// spanned by supp(q_P); descent_minimize runs entropic mirror descent with
// step 1/sqrt(k) (scaled by the current sup-norm of the multiplicative
// gradient, the usual normalization for subgradient schemes) from several
// seeded starts.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "augustin/measures.hpp"

namespace augustin {

struct OracleResult {
  Distribution q_best;
  ExtendedReal value;
};

namespace detail {

// Output alphabet indices carrying q_P mass (q_P computed locally).
inline std::vector<std::size_t> output_support(const Distribution& P,
                                               const Channel& W) {
  std::vector<double> q_p(W.output_size(), 0.0);
  for (std::size_t x = 0; x < W.input_size(); ++x)
    for (std::size_t y = 0; y < W.output_size(); ++y)
      q_p[y] += P[x] * W.row(x)[y];
  std::vector<std::size_t> support;
  for (std::size_t y = 0; y < W.output_size(); ++y)
    if (q_p[y] > 0.0) support.push_back(y);
  return support;
}

// Objective and the simplex "pull" vector m (minus q times the gradient) at
// an interior point of the chosen face, all in log space. Writes m into
// `pull` (same indexing as `columns`) and returns the objective; +infinity
// when the objective is infinite at q (pull is then meaningless).
inline double objective_and_pull(double a, bool is_one,
                                 const Distribution& P, const Channel& W,
                                 const std::vector<std::size_t>& columns,
                                 const std::vector<double>& q,
                                 std::vector<double>& pull) {
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t d = columns.size();
  std::fill(pull.begin(), pull.end(), 0.0);
  std::vector<double> t(d);
  double objective = 0.0;
  for (std::size_t x = 0; x < W.input_size(); ++x) {
    if (P[x] == 0.0) continue;
    if (is_one) {
      double kl = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double w = W.row(x)[columns[j]];
        if (w == 0.0) continue;
        if (q[j] == 0.0) return inf;
        kl += w * (std::log(w) - std::log(q[j]));
        pull[j] += P[x] * w;
      }
      objective += P[x] * kl;
      continue;
    }
    double shift = -inf;
    std::size_t count = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const double w = W.row(x)[columns[j]];
      if (w == 0.0) {
        t[j] = -inf;
        continue;
      }
      if (q[j] == 0.0) {
        if (a > 1.0) return inf;
        t[j] = -inf;
        continue;
      }
      t[j] = a * std::log(w) + (1.0 - a) * std::log(q[j]);
      shift = std::max(shift, t[j]);
      ++count;
    }
    if (count == 0) return inf;
    double sum = 0.0;
    for (std::size_t j = 0; j < d; ++j)
      if (t[j] != -inf) sum += std::exp(t[j] - shift);
    const double lse = shift + std::log(sum);
    objective += P[x] * lse / (a - 1.0);
    for (std::size_t j = 0; j < d; ++j)
      if (t[j] != -inf) pull[j] += P[x] * std::exp(t[j] - lse);
  }
  return objective;
}

// Embeds face coordinates back into the full output alphabet.
inline Distribution embed(const std::vector<std::size_t>& columns,
                          const std::vector<double>& face, std::size_t ny) {
  std::vector<double> full(ny, 0.0);
  for (std::size_t j = 0; j < columns.size(); ++j) full[columns[j]] = face[j];
  return Distribution(std::move(full));
}

}  // namespace detail

// Exhaustive search over the lattice {k/resolution : k integer} on the
// simplex face spanned by supp(q_P). Ties are broken toward the
// lexicographically smallest q. The returned value is a feasible upper bound
// on the information, tight within the lattice mesh.
inline OracleResult grid_minimize(const Order& alpha, const Distribution& P,
                                  const Channel& W, std::size_t resolution) {
  detail::require_same_size(P.size(), W.input_size());
  detail::require(W.output_size() <= 4,
                  "alphabet too large for exhaustive search");
  detail::require(resolution >= 10, "resolution must be at least 10");

  const std::vector<std::size_t> columns = detail::output_support(P, W);
  const std::size_t d = columns.size();
  const double res = static_cast<double>(resolution);
  const bool is_one = alpha.is_one();
  const bool is_inf = alpha.is_infinite();
  const double a = alpha.value();

  std::vector<double> q(d, 0.0);
  std::vector<double> pull(d, 0.0);
  std::vector<double> best_q(d, 0.0);
  double best = std::numeric_limits<double>::infinity();
  bool found = false;

  // P-average of ln max_y w(y)/q(y); +infinity when some needed q(y) is 0.
  const auto max_order_objective = [&](const std::vector<double>& point) {
    double total = 0.0;
    for (std::size_t x = 0; x < W.input_size(); ++x) {
      if (P[x] == 0.0) continue;
      double ratio = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double w = W.row(x)[columns[j]];
        if (w == 0.0) continue;
        if (point[j] == 0.0) return std::numeric_limits<double>::infinity();
        ratio = std::max(ratio, w / point[j]);
      }
      total += P[x] * std::log(ratio);
    }
    return total;
  };

  // Depth-first enumeration of lattice compositions, lexicographic in q.
  std::vector<std::size_t> counts(d, 0);
  std::function<void(std::size_t, std::size_t)> enumerate =
      [&](std::size_t pos, std::size_t remaining) {
        if (pos + 1 == d) {
          counts[pos] = remaining;
          for (std::size_t j = 0; j < d; ++j)
            q[j] = static_cast<double>(counts[j]) / res;
          const double value =
              is_inf ? max_order_objective(q)
                     : detail::objective_and_pull(a, is_one, P, W, columns, q,
                                                  pull);
          if (value < best) {
            best = value;
            best_q = q;
            found = true;
          }
          return;
        }
        for (std::size_t c = 0; c <= remaining; ++c) {
          counts[pos] = c;
          enumerate(pos + 1, remaining - c);
        }
      };
  enumerate(0, resolution);

  if (!found)
    return {detail::embed(columns, std::vector<double>(d, 1.0 / d),
                          W.output_size()),
            ExtendedReal::infinity()};
  return {detail::embed(columns, best_q, W.output_size()), ExtendedReal(best)};
}

// Entropic mirror descent on the simplex face spanned by supp(q_P) (or the
// full simplex when restrict_support is false, for checking that the
// restriction loses nothing). Multi-start; runs are aggregated by value with
// lexicographic tie-breaking, and each run keeps the best iterate it saw.
inline OracleResult descent_minimize(const Order& alpha, const Distribution& P,
                                     const Channel& W, double tol = 1e-9,
                                     std::size_t max_iter = 20000,
                                     std::size_t restarts = 3,
                                     std::uint64_t seed = 1,
                                     bool restrict_support = true) {
  detail::require_same_size(P.size(), W.input_size());
  if (alpha.is_infinite())
    throw std::invalid_argument(
        "descent oracle supports finite orders only");
  detail::require(tol > 0.0, "tolerance must be positive");
  detail::require(max_iter >= 1 && restarts >= 1,
                  "iteration and restart counts must be positive");

  std::vector<std::size_t> columns;
  if (restrict_support) {
    columns = detail::output_support(P, W);
  } else {
    columns.resize(W.output_size());
    for (std::size_t y = 0; y < W.output_size(); ++y) columns[y] = y;
  }
  const std::size_t d = columns.size();
  const bool is_one = alpha.is_one();
  const double a = alpha.value();

  std::vector<double> best_q;
  double best = std::numeric_limits<double>::infinity();

  std::vector<double> pull(d, 0.0);
  std::vector<double> u(d, 0.0);
  for (std::size_t r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(detail::mix_seed(seed, r));
    std::vector<double> q = r == 0 ? std::vector<double>(d, 1.0 / d)
                                   : detail::sample_simplex(rng, d);
    std::vector<double> run_best_q = q;
    double run_best = std::numeric_limits<double>::infinity();

    for (std::size_t k = 1; k <= max_iter; ++k) {
      const double value =
          detail::objective_and_pull(a, is_one, P, W, columns, q, pull);
      if (value < run_best) {
        run_best = value;
        run_best_q = q;
      }
      if (!std::isfinite(value)) break;  // boundary underflow; keep best seen

      double residual = 0.0;
      for (std::size_t j = 0; j < d; ++j)
        residual += std::fabs(pull[j] - q[j]);
      if (residual <= tol) break;

      // Normalized entropic step: q <- softmax(ln q + eta_k r / ||r||_inf)
      // with r_j = pull_j / q_j (so r = -q grad, the multiplicative
      // gradient). ||r||_inf >= 1 on the simplex, so this only damps.
      double scale = 0.0;
      for (std::size_t j = 0; j < d; ++j)
        if (q[j] > 0.0) scale = std::max(scale, pull[j] / q[j]);
      const double eta = 1.0 / std::sqrt(static_cast<double>(k));
      double shift = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < d; ++j) {
        u[j] = q[j] > 0.0
                   ? std::log(q[j]) + eta * (pull[j] / q[j]) / scale
                   : -std::numeric_limits<double>::infinity();
        shift = std::max(shift, u[j]);
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < d; ++j) sum += std::exp(u[j] - shift);
      for (std::size_t j = 0; j < d; ++j)
        q[j] = std::exp(u[j] - shift) / sum;
    }

    if (run_best < best ||
        (run_best == best && run_best_q < best_q)) {
      best = run_best;
      best_q = run_best_q;
    }
  }

  if (!std::isfinite(best))
    return {detail::embed(columns, std::vector<double>(d, 1.0 / d),
                          W.output_size()),
            ExtendedReal::infinity()};
  return {detail::embed(columns, best_q, W.output_size()), ExtendedReal(best)};
}

}  // namespace augustin
