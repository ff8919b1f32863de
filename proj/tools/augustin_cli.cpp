// Command-line front end: channel ingestion, fixed-point solves, order
// sweeps, a property-check harness over seeded random instances, and the
// refinement study for the discretized triangular-kernel family.
//
// Output is JSON or CSV on stdout (or --out FILE), natural-log units unless
// --bits is given, and byte-identical across runs for identical inputs and
// seeds. Exit codes: 0 success/converged, 1 usage or input error, 2
// non-convergence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "augustin/augustin.hpp"
#include "augustin/channel_io.hpp"
#include "augustin/channels.hpp"
#include "augustin/divergence.hpp"
#include "augustin/measures.hpp"
#include "augustin/oracle.hpp"

namespace {

using namespace augustin;

constexpr double ln_2 = 0.6931471805599453;

std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  out << text;
}

nlohmann::ordered_json information_field(const ExtendedReal& information,
                                         double scale) {
  if (!information.is_finite()) return "inf";
  return information.value() / scale;
}

struct SolveArgs {
  std::string file;
  double alpha = 0.0;
  std::optional<double> beta;
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  std::string format = "json";
  std::string out;
  bool bits = false;
};

int run_solve(const SolveArgs& args) {
  const ChannelInstance instance = load_channel_file(args.file);
  const Order alpha(args.alpha);
  SolveOptions options;
  options.tol = args.tol;
  options.max_iter = args.max_iter;
  if (args.beta) options.beta = TiltingOrder(*args.beta);

  const SolveReport report =
      solve_augustin_mean(alpha, instance.P, instance.W, options);
  const double scale = args.bits ? ln_2 : 1.0;

  if (args.format == "json") {
    nlohmann::ordered_json doc;
    doc["alpha"] = report.alpha;
    doc["beta"] = report.beta;
    doc["tol"] = args.tol;
    doc["max_iter"] = args.max_iter;
    doc["units"] = args.bits ? "bits" : "nats";
    doc["converged"] = report.converged;
    doc["iterations"] = report.iterations;
    doc["information"] = information_field(report.information, scale);
    doc["residual_tv"] = report.residual_tv;
    doc["mean"] = report.mean.mass();
    nlohmann::ordered_json trace = nlohmann::ordered_json::array();
    for (double v : report.objective_trace) trace.push_back(v / scale);
    doc["objective_trace"] = std::move(trace);
    emit(doc.dump(2) + "\n", args.out);
  } else {
    std::ostringstream csv;
    csv << "alpha,beta,converged,iterations,information,residual_tv";
    for (std::size_t y = 0; y < report.mean.size(); ++y) csv << ",mean_" << y;
    csv << "\n";
    csv << fmt17(report.alpha) << ',' << fmt17(report.beta) << ','
        << (report.converged ? 1 : 0) << ',' << report.iterations << ','
        << (report.information.is_finite()
                ? fmt17(report.information.value() / scale)
                : "inf")
        << ',' << fmt17(report.residual_tv);
    for (std::size_t y = 0; y < report.mean.size(); ++y)
      csv << ',' << fmt17(report.mean[y]);
    csv << "\n";
    emit(csv.str(), args.out);
  }

  if (report.converged || !report.information.is_finite()) return 0;
  return 2;
}

std::vector<double> parse_alpha_list(const std::string& spec) {
  std::vector<double> alphas;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    const auto c1 = token.find(':');
    if (c1 != std::string::npos) {
      const auto c2 = token.find(':', c1 + 1);
      if (c2 == std::string::npos)
        throw std::invalid_argument("range spec must be start:step:stop");
      const double start = std::stod(token.substr(0, c1));
      const double step = std::stod(token.substr(c1 + 1, c2 - c1 - 1));
      const double stop = std::stod(token.substr(c2 + 1));
      if (!(step > 0.0))
        throw std::invalid_argument("range step must be positive");
      for (double v = start; v <= stop + 1e-12 * std::fabs(step);
           v += step)
        alphas.push_back(v);
    } else {
      alphas.push_back(std::stod(token));
    }
  }
  return alphas;
}

struct SweepArgs {
  std::string file;
  std::string alphas;
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  std::string out;
  bool bits = false;
};

int run_sweep(const SweepArgs& args) {
  const ChannelInstance instance = load_channel_file(args.file);
  std::vector<double> alphas = parse_alpha_list(args.alphas);
  if (alphas.empty()) throw std::invalid_argument("alpha list is empty");
  std::sort(alphas.begin(), alphas.end());
  const double scale = args.bits ? ln_2 : 1.0;

  std::ostringstream csv;
  csv << "alpha,information,iterations,residual_tv\n";
  bool all_converged = true;
  for (double a : alphas) {
    const Order alpha(a);
    SolveOptions options;
    options.tol = args.tol;
    options.max_iter = args.max_iter;
    const SolveReport report =
        solve_augustin_mean(alpha, instance.P, instance.W, options);
    all_converged =
        all_converged &&
        (report.converged || !report.information.is_finite());
    csv << fmt17(a) << ','
        << (report.information.is_finite()
                ? fmt17(report.information.value() / scale)
                : "inf")
        << ',' << report.iterations << ',' << fmt17(report.residual_tv)
        << "\n";
  }
  emit(csv.str(), args.out);
  return all_converged ? 0 : 2;
}

struct CheckArgs {
  std::string property;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::string sizes = "3x3,4x4";
};

std::vector<std::pair<std::size_t, std::size_t>> parse_sizes(
    const std::string& spec) {
  std::vector<std::pair<std::size_t, std::size_t>> sizes;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto cross = token.find('x');
    if (cross == std::string::npos)
      throw std::invalid_argument("size spec must look like 3x4");
    sizes.emplace_back(std::stoul(token.substr(0, cross)),
                       std::stoul(token.substr(cross + 1)));
  }
  if (sizes.empty()) throw std::invalid_argument("size list is empty");
  return sizes;
}

// Smallest margin by which a >= b holds; +inf-aware, negative on violation.
double ordering_slack(const ExtendedReal& a, const ExtendedReal& b) {
  if (!b.is_finite())
    return a.is_finite() ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  if (!a.is_finite()) return std::numeric_limits<double>::infinity();
  return a.value() - b.value();
}

int run_check(const CheckArgs& args) {
  const auto sizes = parse_sizes(args.sizes);
  std::printf("# property=%s trials=%zu rng=mt19937_64 seed=%llu\n",
              args.property.c_str(), args.trials,
              static_cast<unsigned long long>(args.seed));

  const std::vector<double> order_grid = {0.25, 0.5, 0.9, 1.0, 1.5, 2.0, 4.0};
  double min_slack = std::numeric_limits<double>::infinity();
  bool pass = true;

  for (std::size_t trial = 0; trial < args.trials; ++trial) {
    std::mt19937_64 rng(detail::mix_seed(args.seed, trial));
    const auto [nx, ny] = sizes[trial % sizes.size()];
    double slack = 0.0;
    double tolerance = 0.0;

    if (args.property == "pinsker") {
      tolerance = 1e-12;
      const double a = order_grid[trial % order_grid.size()];
      const Distribution w(detail::sample_simplex(rng, ny));
      const Distribution q(detail::sample_simplex(rng, ny));
      slack = pinsker_slack(Order(a), w, q).value();
    } else if (args.property == "homogeneity") {
      tolerance = 1e-12;
      const double a = order_grid[trial % order_grid.size()];
      const Distribution w(detail::sample_simplex(rng, ny));
      const Distribution q(detail::sample_simplex(rng, ny));
      const double c = 0.1 + 9.9 * detail::uniform01(rng);
      std::vector<double> scaled(ny);
      for (std::size_t y = 0; y < ny; ++y) scaled[y] = c * q[y];
      const double lhs =
          renyi_divergence(Order(a), w, FiniteMeasure(scaled)).value();
      const double rhs =
          renyi_divergence(Order(a), w, q).value() - std::log(c);
      slack = tolerance - std::fabs(lhs - rhs);
      tolerance = 0.0;
    } else if (args.property == "monotonicity") {
      tolerance = 1e-10;
      const bool low_branch = trial % 2 == 0;
      const double a =
          low_branch ? 0.2 + 0.7 * detail::uniform01(rng)
                     : 1.2 + 3.0 * detail::uniform01(rng);
      const double b = low_branch
                           ? (trial % 4 == 0 ? 1.0 : 0.3)
                           : 0.5 * std::min(1.0, 1.0 / (a - 1.0));
      const Channel W = random_channel(nx, ny, rng());
      const Distribution P(detail::sample_simplex(rng, nx));
      const Distribution q(detail::sample_simplex(rng, ny));
      const MonotonicityGap gap =
          monotonicity_gap(Order(a), TiltingOrder(b), P, W, q);
      slack = std::min({gap.lhs - gap.middle, gap.middle - gap.pinsker_term,
                        gap.pinsker_term});
    } else if (args.property == "sandwich") {
      tolerance = 1e-8;
      const double a = order_grid[trial % order_grid.size()];
      const Channel W = random_channel(nx, ny, rng());
      const Distribution P(detail::sample_simplex(rng, nx));
      const SolveReport solved = solve_augustin_mean(Order(a), P, W);
      const Distribution probe(detail::sample_simplex(rng, ny));
      const EhbSandwich s = ehb_sandwich(Order(a), P, W, probe, solved);
      slack = std::min(ordering_slack(s.upper, s.gap),
                       ordering_slack(s.gap, s.lower));
    } else if (args.property == "uniqueness") {
      tolerance = 1e-8;
      const double a = order_grid[(trial + 1) % order_grid.size()];
      const Channel W = random_channel(nx, ny, rng());
      const Distribution P(detail::sample_simplex(rng, nx));
      std::vector<Distribution> means;
      for (int start = 0; start < 5; ++start) {
        SolveOptions options;
        options.initial = Distribution(detail::sample_simplex(rng, ny));
        means.push_back(
            solve_augustin_mean(Order(a), P, W, options).mean);
      }
      double worst = 0.0;
      for (std::size_t i = 0; i < means.size(); ++i)
        for (std::size_t j = i + 1; j < means.size(); ++j)
          worst = std::max(worst, tv_distance(means[i], means[j]));
      slack = tolerance - worst;
      tolerance = 0.0;
    } else if (args.property == "restriction") {
      tolerance = 0.0;
      const double a = order_grid[(trial + 2) % order_grid.size()];
      // Dead output column so that supp(q_P) is a strict subset.
      const Channel base = random_channel(nx, ny, rng());
      std::vector<std::vector<double>> rows;
      for (std::size_t x = 0; x < nx; ++x) {
        std::vector<double> row = base.row(x).mass();
        row.push_back(0.0);
        rows.push_back(std::move(row));
      }
      const Channel W = Channel::from_rows(rows);
      const Distribution P(detail::sample_simplex(rng, nx));
      const OracleResult restricted =
          descent_minimize(Order(a), P, W, 1e-9, 20000, 2, rng());
      const OracleResult full =
          descent_minimize(Order(a), P, W, 1e-9, 20000, 2, rng(), false);
      slack = 1e-6 - std::fabs(restricted.value.value() - full.value.value());
    } else {
      throw std::invalid_argument("unknown property: " + args.property);
    }

    min_slack = std::min(min_slack, slack);
    const bool ok = slack >= -tolerance;
    pass = pass && ok;
    std::printf("trial %zu size %zux%zu worst slack %s%s\n", trial, nx, ny,
                fmt17(slack).c_str(), ok ? "" : " VIOLATION");
  }

  std::printf("%s %s: min slack %s over %zu trials\n", pass ? "PASS" : "FAIL",
              args.property.c_str(), fmt17(min_slack).c_str(), args.trials);
  return pass ? 0 : 1;
}

struct Example1Args {
  double gamma = 0.0;
  double alpha = 0.0;
  std::string grids = "16,32,64,128";
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  std::string out;
};

int run_example1(const Example1Args& args) {
  const Order alpha(args.alpha);
  const ExtendedReal closed = example1_information(args.gamma, alpha);
  if (!closed.is_finite())
    std::cerr << "note: closed form is infinite for alpha >= 1; "
                 "table reports raw information only\n";

  std::vector<std::size_t> grids;
  {
    std::stringstream ss(args.grids);
    std::string token;
    while (std::getline(ss, token, ','))
      if (!token.empty()) grids.push_back(std::stoul(token));
  }
  if (grids.empty()) throw std::invalid_argument("grid list is empty");

  std::ostringstream csv;
  csv << "n,m,information,closed_form,rel_error\n";
  bool all_converged = true;
  for (std::size_t n : grids) {
    const Example1Instance instance =
        example1_discretized(args.gamma, n, n);
    SolveOptions options;
    options.tol = args.tol;
    options.max_iter = args.max_iter;
    const SolveReport report =
        solve_augustin_mean(alpha, instance.P, instance.W, options);
    all_converged = all_converged && report.converged;
    const double info = report.information.value();
    csv << n << ',' << n << ',' << fmt17(info) << ',';
    if (closed.is_finite()) {
      const double rel = std::fabs(info - closed.value()) / closed.value();
      csv << fmt17(closed.value()) << ',' << fmt17(rel) << "\n";
    } else {
      csv << "inf,nan\n";
    }
  }
  emit(csv.str(), args.out);
  return all_converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Order-alpha information measures for finite channels: fixed-point "
      "solves, order sweeps, property checks, refinement studies"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand(
      "solve", "Solve for the order-alpha mean and information");
  solve->add_option("file", solve_args.file, "channel JSON file")->required();
  solve->add_option("--alpha", solve_args.alpha, "divergence order")
      ->required();
  solve->add_option("--beta", solve_args.beta, "tilting order override");
  solve->add_option("--tol", solve_args.tol, "TV stopping tolerance");
  solve->add_option("--max-iter", solve_args.max_iter, "iteration cap");
  solve->add_option("--format", solve_args.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  solve->add_option("--out", solve_args.out, "output file (default stdout)");
  solve->add_flag("--bits", solve_args.bits, "display values in bits");

  SweepArgs sweep_args;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Solve across a list or range of orders");
  sweep->add_option("file", sweep_args.file, "channel JSON file")->required();
  sweep
      ->add_option("--alphas", sweep_args.alphas,
                   "comma list and/or start:step:stop ranges")
      ->required();
  sweep->add_option("--tol", sweep_args.tol, "TV stopping tolerance");
  sweep->add_option("--max-iter", sweep_args.max_iter, "iteration cap");
  sweep->add_option("--out", sweep_args.out, "output file (default stdout)");
  sweep->add_flag("--bits", sweep_args.bits, "display values in bits");

  CheckArgs check_args;
  CLI::App* check = app.add_subcommand(
      "check", "Run a property harness on seeded random instances");
  check
      ->add_option("property", check_args.property,
                   "pinsker | monotonicity | sandwich | homogeneity | "
                   "uniqueness | restriction")
      ->required();
  check->add_option("--trials", check_args.trials, "number of trials")
      ->check(CLI::PositiveNumber);
  check->add_option("--seed", check_args.seed, "PRNG seed");
  check->add_option("--sizes", check_args.sizes,
                    "comma list of instance sizes, e.g. 3x3,4x4");

  Example1Args example_args;
  CLI::App* example = app.add_subcommand(
      "example1", "Refinement study for the triangular-kernel family");
  example->add_option("--gamma", example_args.gamma, "family parameter > 0.5")
      ->required();
  example->add_option("--alpha", example_args.alpha, "divergence order")
      ->required();
  example->add_option("--grids", example_args.grids,
                      "comma list of grid sizes (n = m)");
  example->add_option("--tol", example_args.tol, "TV stopping tolerance");
  example->add_option("--max-iter", example_args.max_iter, "iteration cap");
  example->add_option("--out", example_args.out,
                      "output file (default stdout)");

  try {
    app.parse(argc, argv);
    if (solve->parsed()) return run_solve(solve_args);
    if (sweep->parsed()) return run_sweep(sweep_args);
    if (check->parsed()) return run_check(check_args);
    if (example->parsed()) return run_example1(example_args);
    return 1;
  } catch (const CLI::ParseError& err) {
    if (err.get_name() == "CallForHelp" || err.get_name() == "CallForAllHelp")
      return app.exit(err);
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
