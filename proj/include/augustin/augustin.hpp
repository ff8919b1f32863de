// Output distributions, tilted channels, the fixed-point operator and its
// tilted variant, the solver that produces the order-alpha mean and
// information, and verification helpers for the decrease inequality, the
// divergence sandwich, and the implicit mean identity.
//
// All operator evaluation happens in log space: a tilted row is the softmax
// of  alpha*ln w(y) + (1-alpha)*ln q(y)  over the surviving outputs, which
// makes the normalization identity hold by construction and keeps large
// orders stable.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "augustin/divergence.hpp"
#include "augustin/measures.hpp"

namespace augustin {

// Tilting exponent beta in (0,1] for the tilted operator. The solver and the
// decrease inequality additionally require beta < min(1, 1/(alpha-1)) when
// alpha > 1; that hypothesis is checked where it is needed, not here.
class TiltingOrder {
 public:
  explicit TiltingOrder(double value) : value_(value) {
    if (!(value > 0.0) || value > 1.0)
      throw std::invalid_argument("tilting order must lie in (0, 1]");
  }

  double value() const { return value_; }

 private:
  double value_;
};

// Default tilting used by the solver; satisfies the decrease hypothesis in
// both branches (for alpha > 1, 1/alpha < 1/(alpha-1)).
inline TiltingOrder default_tilting(const Order& alpha) {
  return TiltingOrder(std::min(1.0, 1.0 / alpha.value()));
}

namespace detail {

inline void require_finite_order(const Order& alpha, const char* what) {
  if (alpha.is_infinite())
    throw std::domain_error(std::string(what) +
                            " is undefined at alpha = infinity");
}

inline void require_tilting_hypothesis(const Order& alpha,
                                       const TiltingOrder& beta) {
  if (alpha.value() > 1.0 && !alpha.is_one()) {
    const double bound = std::min(1.0, 1.0 / (alpha.value() - 1.0));
    if (!(beta.value() < bound))
      throw std::invalid_argument(
          "tilting order must be below min(1, 1/(alpha-1)) for alpha > 1");
  }
}

// Log-channel cache: ln W(y|x) packed per row over the row's support.
struct LogChannel {
  std::size_t ny = 0;
  std::vector<std::vector<std::size_t>> support;  // per row: output indices
  std::vector<std::vector<double>> ln_w;          // per row: ln of entries

  explicit LogChannel(const Channel& W) : ny(W.output_size()) {
    support.resize(W.input_size());
    ln_w.resize(W.input_size());
    for (std::size_t x = 0; x < W.input_size(); ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        const double w = W.row(x)[y];
        if (w > 0.0) {
          support[x].push_back(y);
          ln_w[x].push_back(std::log(w));
        }
      }
    }
  }
};

// One tilted row against ln q, written as softmax weights into `row` (dense,
// zero off the surviving support). Returns the row's log-normalizer
// lse = (alpha-1) D_alpha(W(x)||q), or +infinity when the row divergence is
// infinite (alpha > 1 and the row has mass where q vanishes), in which case
// `row` is untouched. `t` is scratch of size >= support size.
inline double tilted_row(double a, bool alpha_is_one,
                         const std::vector<std::size_t>& support,
                         const std::vector<double>& ln_w,
                         const std::vector<double>& ln_q,
                         std::vector<double>& t, std::vector<double>& row) {
  const double inf = std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  double shift = -inf;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const double lq = ln_q[support[i]];
    if (lq == -inf) {
      if (alpha_is_one || a > 1.0) return inf;
      continue;
    }
    const double v =
        alpha_is_one ? ln_w[i] : a * ln_w[i] + (1.0 - a) * lq;
    t[count] = v;
    shift = std::max(shift, v);
    ++count;
  }
  if (count == 0) return inf;
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) sum += std::exp(t[i] - shift);
  const double lse = shift + std::log(sum);
  std::fill(row.begin(), row.end(), 0.0);
  std::size_t i = 0;
  for (std::size_t j = 0; j < support.size(); ++j) {
    if (ln_q[support[j]] == -inf) continue;  // alpha < 1 here, term dropped
    row[support[j]] = std::exp(t[i] - lse);
    ++i;
  }
  return lse;
}

inline std::vector<double> log_of(const std::vector<double>& q) {
  std::vector<double> ln_q(q.size());
  for (std::size_t y = 0; y < q.size(); ++y)
    ln_q[y] = q[y] > 0.0 ? std::log(q[y])
                         : -std::numeric_limits<double>::infinity();
  return ln_q;
}

}  // namespace detail

// q_P(y) = sum_x P(x) W(y|x), the output distribution induced by P.
inline Distribution output_distribution(const Distribution& P,
                                        const Channel& W) {
  detail::require_same_size(P.size(), W.input_size());
  std::vector<double> q(W.output_size(), 0.0);
  for (std::size_t x = 0; x < W.input_size(); ++x) {
    if (P[x] == 0.0) continue;
    for (std::size_t y = 0; y < W.output_size(); ++y)
      q[y] += P[x] * W.row(x)[y];
  }
  return detail::as_distribution(std::move(q));
}

// sum_x P(x) times the part of W(x) absolutely continuous w.r.t. q_P. For a
// finite channel every row with P(x) > 0 is automatically dominated by q_P,
// so this equals q_P; it exists for discretizations of continuous channels
// and for bookkeeping around zero-mass inputs.
inline FiniteMeasure output_distribution_tilde(const Distribution& P,
                                               const Channel& W) {
  const Distribution q_P = output_distribution(P, W);
  std::vector<double> q(W.output_size(), 0.0);
  for (std::size_t x = 0; x < W.input_size(); ++x) {
    if (P[x] == 0.0) continue;
    const FiniteMeasure ac =
        lebesgue_decompose(W.row(x), q_P).absolutely_continuous;
    for (std::size_t y = 0; y < W.output_size(); ++y) q[y] += P[x] * ac[y];
  }
  return FiniteMeasure(std::move(q));
}

struct TiltedChannel {
  Channel channel;                      // one row per admissible input
  std::vector<std::size_t> admissible;  // original input indices, ascending
};

// The order-alpha tilted channel against q: admissible inputs are those with
// finite row divergence, and each admissible row is
// e^{(1-alpha) D_alpha(W(x)||q)} W(x)^alpha q^{1-alpha}, a probability
// vector by construction.
inline TiltedChannel tilted_channel(const Order& alpha, const Channel& W,
                                    const Distribution& q) {
  detail::require_finite_order(alpha, "the tilted channel");
  detail::require_same_size(W.output_size(), q.size());

  const detail::LogChannel log_w(W);
  const std::vector<double> ln_q = detail::log_of(q.mass());
  std::vector<double> t(W.output_size());
  std::vector<double> row(W.output_size());

  std::vector<Distribution> rows;
  std::vector<std::size_t> admissible;
  for (std::size_t x = 0; x < W.input_size(); ++x) {
    const double lse =
        detail::tilted_row(alpha.value(), alpha.is_one(), log_w.support[x],
                           log_w.ln_w[x], ln_q, t, row);
    if (!std::isfinite(lse)) continue;
    admissible.push_back(x);
    if (alpha.is_one())
      rows.push_back(W.row(x));  // exponents degenerate, row is unchanged
    else
      rows.push_back(Distribution(row));
  }
  if (admissible.empty())
    throw std::domain_error(
        "no admissible inputs: every row diverges infinitely from q");
  return {Channel(std::move(rows)), std::move(admissible)};
}

// A_{alpha,P}(q) = sum_x P(x) (tilted row x). Defined exactly on the domain
// where the conditional divergence is finite; at alpha = 1 it returns q_P
// itself.
inline Distribution augustin_operator(const Order& alpha, const Distribution& P,
                                      const Channel& W, const Distribution& q) {
  detail::require_finite_order(alpha, "the fixed-point operator");
  detail::require_same_size(P.size(), W.input_size());
  detail::require_same_size(W.output_size(), q.size());

  const detail::LogChannel log_w(W);
  const std::vector<double> ln_q = detail::log_of(q.mass());
  std::vector<double> t(W.output_size());
  std::vector<double> row(W.output_size());
  std::vector<double> out(W.output_size(), 0.0);

  for (std::size_t x = 0; x < W.input_size(); ++x) {
    if (P[x] == 0.0) continue;
    const double lse =
        detail::tilted_row(alpha.value(), alpha.is_one(), log_w.support[x],
                           log_w.ln_w[x], ln_q, t, row);
    if (!std::isfinite(lse))
      throw std::domain_error(
          "q lies outside the operator domain: infinite conditional divergence");
    if (alpha.is_one()) continue;  // handled by the closed form below
    for (std::size_t y : log_w.support[x]) out[y] += P[x] * row[y];
  }
  if (alpha.is_one()) return output_distribution(P, W);
  return detail::as_distribution(std::move(out));
}

// A^beta(q): the normalized geometric mixture A(q)^beta q^{1-beta}, with
// normalizer e^{(1-beta) D_beta(A(q)||q)}.
inline Distribution tilted_augustin_operator(const Order& alpha,
                                             const TiltingOrder& beta,
                                             const Distribution& P,
                                             const Channel& W,
                                             const Distribution& q) {
  const Distribution a = augustin_operator(alpha, P, W, q);
  if (beta.value() == 1.0) return a;

  const double b = beta.value();
  std::vector<double> t;
  std::vector<std::size_t> where;
  t.reserve(q.size());
  where.reserve(q.size());
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t y = 0; y < q.size(); ++y) {
    if (a[y] == 0.0 || q[y] == 0.0) continue;
    const double v = b * std::log(a[y]) + (1.0 - b) * std::log(q[y]);
    where.push_back(y);
    t.push_back(v);
    shift = std::max(shift, v);
  }
  if (t.empty())
    throw std::domain_error(
        "infinite divergence between the operator output and q");
  double sum = 0.0;
  for (double v : t) sum += std::exp(v - shift);
  const double log_norm = shift + std::log(sum);
  std::vector<double> out(q.size(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i)
    out[where[i]] = std::exp(t[i] - log_norm);
  return detail::as_distribution(std::move(out));
}

struct SolveOptions {
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  std::optional<TiltingOrder> beta;     // default: min(1, 1/alpha)
  std::optional<Distribution> initial;  // default: q_P
};

struct SolveReport {
  Distribution mean;
  ExtendedReal information;  // nats
  std::size_t iterations;
  double residual_tv;                  // tv(A(mean), mean) at exit
  std::vector<double> objective_trace; // conditional divergence per iterate
  std::vector<double> residual_trace;  // tv(A(Q_k), Q_k) per iterate
  bool converged;
  double alpha;
  double beta;
};

// Fixed-point solve: Q_0 = q_P (or a caller-supplied start), then
// Q_{k+1} = A^beta(Q_k) until tv(A(Q_k), Q_k) <= tol or max_iter steps were
// taken. The objective trace is nonincreasing by the decrease inequality;
// non-convergence is reported, never silently mislabeled. At alpha = 1 with
// the default start, the closed form q_P is returned without iterating.
inline SolveReport solve_augustin_mean(const Order& alpha,
                                       const Distribution& P, const Channel& W,
                                       const SolveOptions& options = {}) {
  if (alpha.is_infinite())
    throw std::domain_error(
        "unsupported order: the fixed-point operator is undefined at alpha = "
        "infinity");
  detail::require(options.tol > 0.0, "tolerance must be positive");
  detail::require_same_size(P.size(), W.input_size());

  const TiltingOrder beta = options.beta.value_or(default_tilting(alpha));
  if (options.beta) detail::require_tilting_hypothesis(alpha, beta);

  const Distribution q_P = output_distribution(P, W);

  if (alpha.is_one() && !options.initial) {
    // Closed form: the mean is q_P and one operator application confirms it.
    const Distribution a = augustin_operator(alpha, P, W, q_P);
    const double residual = tv_distance(a, q_P);
    const double information =
        conditional_renyi_divergence(alpha, W, q_P, P).value();
    return {q_P,       ExtendedReal(information), 0,
            residual,  {information},             {residual},
            residual <= options.tol,              alpha.value(),
            beta.value()};
  }

  const double a = alpha.value();
  const bool is_one = alpha.is_one();
  const double b = beta.value();
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> q =
      options.initial ? options.initial->mass() : q_P.mass();
  detail::require_same_size(q.size(), W.output_size());

  const detail::LogChannel log_w(W);
  std::vector<double> t(W.output_size());
  std::vector<double> row(W.output_size());
  std::vector<double> mean_buf(W.output_size());
  std::vector<double> ln_q = detail::log_of(q);

  std::vector<double> objective_trace;
  std::vector<double> residual_trace;
  std::size_t iterations = 0;
  bool converged = false;

  while (true) {
    // One pass over the rows gives the objective at q and A(q) together.
    std::fill(mean_buf.begin(), mean_buf.end(), 0.0);
    double objective = 0.0;
    bool infinite = false;
    for (std::size_t x = 0; x < W.input_size() && !infinite; ++x) {
      if (P[x] == 0.0) continue;
      const double lse = detail::tilted_row(a, is_one, log_w.support[x],
                                            log_w.ln_w[x], ln_q, t, row);
      if (!std::isfinite(lse)) {
        infinite = true;
        break;
      }
      if (is_one) {
        double kl = 0.0;
        for (std::size_t i = 0; i < log_w.support[x].size(); ++i) {
          const std::size_t y = log_w.support[x][i];
          kl += W.row(x)[y] * (log_w.ln_w[x][i] - ln_q[y]);
        }
        objective += P[x] * kl;
      } else {
        objective += P[x] * lse / (a - 1.0);
      }
      for (std::size_t y : log_w.support[x]) mean_buf[y] += P[x] * row[y];
    }

    if (infinite) {
      // The objective is infinite at this iterate (only possible at a
      // caller-supplied start outside the domain); report it as such.
      return {Distribution(q), ExtendedReal::infinity(), iterations,
              inf,             std::move(objective_trace),
              std::move(residual_trace), false, a, b};
    }

    double residual = 0.0;
    for (std::size_t y = 0; y < q.size(); ++y)
      residual += std::fabs(mean_buf[y] - q[y]);
    objective_trace.push_back(objective);
    residual_trace.push_back(residual);

    if (residual <= options.tol) {
      converged = true;
      break;
    }
    if (iterations >= options.max_iter) break;

    // Tilted update Q <- softmax(beta ln A(Q) + (1-beta) ln Q).
    if (b == 1.0) {
      q = mean_buf;
    } else {
      double shift = -inf;
      for (std::size_t y = 0; y < q.size(); ++y) {
        if (mean_buf[y] > 0.0 && q[y] > 0.0) {
          t[y] = b * std::log(mean_buf[y]) + (1.0 - b) * ln_q[y];
          shift = std::max(shift, t[y]);
        } else {
          t[y] = -inf;
        }
      }
      double sum = 0.0;
      for (std::size_t y = 0; y < q.size(); ++y)
        if (t[y] != -inf) sum += std::exp(t[y] - shift);
      const double log_norm = shift + std::log(sum);
      for (std::size_t y = 0; y < q.size(); ++y)
        q[y] = t[y] == -inf ? 0.0 : std::exp(t[y] - log_norm);
    }
    ln_q = detail::log_of(q);
    ++iterations;
  }

  return {detail::as_distribution(std::move(q)),
          ExtendedReal(objective_trace.back()),
          iterations,
          residual_trace.back(),
          std::move(objective_trace),
          std::move(residual_trace),
          converged,
          a,
          b};
}

struct MonotonicityGap {
  double lhs;           // objective drop of one tilted step
  double middle;        // tilted divergence mixture between A(q) and q
  double pinsker_term;  // quadratic lower bound on the drop
};

// The quantified-decrease chain for one step from q:
//   lhs    = D^c(W||q|P) - D^c(W||A^beta(q)|P)
//   middle = beta D_{ord}(A(q)||q) + (1-beta) D_beta(A(q)||q),
//            ord = 1 for alpha < 1, ord = 1 - beta(alpha-1) for alpha > 1
//   pinsker_term = beta (2 - beta max(alpha,1))/2 * tv(A(q), q)^2
// Contract: lhs >= middle >= pinsker_term >= 0 under the hypotheses
// alpha in (0,1) with beta in (0,1], or alpha in (1,inf) with
// beta < min(1, 1/(alpha-1)).
inline MonotonicityGap monotonicity_gap(const Order& alpha,
                                        const TiltingOrder& beta,
                                        const Distribution& P, const Channel& W,
                                        const Distribution& q) {
  detail::require_finite_order(alpha, "the decrease inequality");
  if (alpha.is_one())
    throw std::invalid_argument(
        "the decrease inequality requires alpha != 1");
  detail::require_tilting_hypothesis(alpha, beta);

  const double b = beta.value();
  const Distribution a_q = augustin_operator(alpha, P, W, q);
  const Distribution a_b = tilted_augustin_operator(alpha, beta, P, W, q);

  const ExtendedReal d_before = conditional_renyi_divergence(alpha, W, q, P);
  const ExtendedReal d_after = conditional_renyi_divergence(alpha, W, a_b, P);
  const double lhs = (d_before - d_after).value();

  const double mid_order =
      alpha.value() < 1.0 ? 1.0 : 1.0 - b * (alpha.value() - 1.0);
  const ExtendedReal middle = b * renyi_divergence(Order(mid_order), a_q, q) +
                              (1.0 - b) * renyi_divergence(Order(b), a_q, q);

  const double tv = tv_distance(a_q, q);
  const double pinsker =
      b * (2.0 - b * std::max(alpha.value(), 1.0)) / 2.0 * tv * tv;

  return {lhs, middle.value(), pinsker};
}

struct EhbSandwich {
  ExtendedReal upper;  // D_{max(1,alpha)}(q* || q)
  ExtendedReal gap;    // D^c_alpha(W||q|P) - I_alpha
  ExtendedReal lower;  // D_{min(1,alpha)}(q* || q)
};

// The divergence sandwich around the optimality gap of an arbitrary probe q:
// upper >= gap >= lower, with q* the solved mean. Infinities order naturally.
inline EhbSandwich ehb_sandwich(const Order& alpha, const Distribution& P,
                                const Channel& W, const Distribution& q,
                                const SolveReport& solved) {
  detail::require(solved.converged, "sandwich requires a converged solve");
  detail::require(alpha.value() == solved.alpha,
                  "order does not match the solve report");
  const ExtendedReal upper = renyi_divergence(
      Order(std::max(1.0, alpha.value())), solved.mean, q);
  const ExtendedReal gap =
      conditional_renyi_divergence(alpha, W, q, P) - solved.information;
  const ExtendedReal lower = renyi_divergence(
      Order(std::min(1.0, alpha.value())), solved.mean, q);
  return {upper, gap, lower};
}

// Residual of the implicit characterization of the mean: the maximum over
// y in supp(q_P) of
//   | q*(y)/q_P(y) - ( sum_x P(x) (W(y|x)/q_P(y))^alpha
//                       e^{(1-alpha) D_alpha(W(x)||q*)} )^{1/alpha} |.
// Zero at the exact mean; small at a converged solve.
inline double mean_identity_residual(const Order& alpha, const Distribution& P,
                                     const Channel& W,
                                     const SolveReport& solved) {
  detail::require_finite_order(alpha, "the mean identity");
  detail::require(solved.converged, "the identity requires a converged solve");
  detail::require(alpha.value() == solved.alpha,
                  "order does not match the solve report");

  const Distribution q_P = output_distribution(P, W);
  const Distribution& q_star = solved.mean;
  const double a = alpha.value();

  std::vector<double> d_row(W.input_size(), 0.0);
  for (std::size_t x = 0; x < W.input_size(); ++x) {
    if (P[x] == 0.0) continue;
    const ExtendedReal d = renyi_divergence(alpha, W.row(x), q_star);
    if (!d.is_finite())
      throw std::domain_error(
          "identity undefined: infinite divergence at the solved mean");
    d_row[x] = d.value();
  }

  double worst = 0.0;
  std::vector<double> terms;
  for (std::size_t y = 0; y < q_P.size(); ++y) {
    if (q_P[y] == 0.0) continue;
    terms.clear();
    for (std::size_t x = 0; x < W.input_size(); ++x) {
      if (P[x] == 0.0 || W.row(x)[y] == 0.0) continue;
      terms.push_back(std::log(P[x]) +
                      a * (std::log(W.row(x)[y]) - std::log(q_P[y])) +
                      (1.0 - a) * d_row[x]);
    }
    const double value = std::exp(detail::log_sum_exp(terms) / a);
    worst = std::max(worst, std::fabs(q_star[y] / q_P[y] - value));
  }
  return worst;
}

}  // namespace augustin
