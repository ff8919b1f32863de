// End-to-end tests that drive the installed binary through a shell, capture
// stdout/stderr, and assert on exit codes and the serialized output.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

static const double ln2 = 0.6931471805599453;
static const double ln3 = 1.0986122886681098;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CliResult run_cli(const std::string& args) {
  const std::string out_path = "cli_stdout.txt";
  const std::string err_path = "cli_stderr.txt";
  const std::string command = std::string(CLI_BIN) + " " + args + " > " +
                              out_path + " 2> " + err_path;
  const int status = std::system(command.c_str());
  CliResult result;
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

std::string data_file(const std::string& name) {
  return std::string(DATA_DIR) + "/" + name;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

TEST_CASE("solve subcommand, JSON output") {
  const CliResult r =
      run_cli("solve " + data_file("bsc01.json") + " --alpha 1");
  REQUIRE(r.code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc["alpha"].get<double>() == 1.0);
  CHECK(doc["units"] == "nats");
  CHECK(doc["converged"].get<bool>());
  CHECK(doc["iterations"].get<int>() == 0);
  CHECK(doc["information"].get<double>() ==
        Catch::Approx(0.3680642071684971).margin(1e-14));
  CHECK(doc["residual_tv"].get<double>() == 0.0);
  REQUIRE(doc["mean"].size() == 2);
  CHECK(doc["mean"][0].get<double>() == Catch::Approx(0.5).margin(1e-15));
  CHECK(doc["objective_trace"].size() >= 1);
}

TEST_CASE("solve output is byte-identical across runs") {
  const std::string args =
      "solve " + data_file("asym23.json") + " --alpha 0.7";
  const CliResult first = run_cli(args);
  const CliResult second = run_cli(args);
  REQUIRE(first.code == 0);
  CHECK(first.out == second.out);
  CHECK(!first.out.empty());
}

TEST_CASE("solve at order two on the noiseless channel") {
  const CliResult r =
      run_cli("solve " + data_file("noiseless3.json") + " --alpha 2");
  REQUIRE(r.code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc["information"].get<double>() == Catch::Approx(ln3).margin(1e-9));
}

TEST_CASE("bits flag rescales by ln 2") {
  const std::string base = "solve " + data_file("bsc01.json") + " --alpha 2";
  const nlohmann::json nats = nlohmann::json::parse(run_cli(base).out);
  const nlohmann::json bits =
      nlohmann::json::parse(run_cli(base + " --bits").out);
  CHECK(bits["units"] == "bits");
  CHECK(bits["information"].get<double>() * ln2 ==
        Catch::Approx(nats["information"].get<double>()).margin(1e-14));
}

TEST_CASE("solve subcommand, CSV output") {
  const CliResult r = run_cli("solve " + data_file("bsc01.json") +
                              " --alpha 0.5 --format csv");
  REQUIRE(r.code == 0);
  const std::vector<std::string> lines = split_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "alpha,beta,converged,iterations,information,residual_tv,mean_0,"
        "mean_1");
  const std::vector<std::string> fields = split_fields(lines[1]);
  REQUIRE(fields.size() == 8);
  CHECK(std::stod(fields[0]) == 0.5);
  CHECK(std::stod(fields[2]) == 1.0);
  CHECK(std::stod(fields[4]) ==
        Catch::Approx(0.22314355131420976).margin(1e-10));
}

TEST_CASE("solve respects the out flag") {
  const std::string target = "cli_solve_out.json";
  std::remove(target.c_str());
  const CliResult r = run_cli("solve " + data_file("bsc01.json") +
                              " --alpha 1 --out " + target);
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const nlohmann::json doc = nlohmann::json::parse(slurp(target));
  CHECK(doc["converged"].get<bool>());
}

TEST_CASE("support restriction shows up as exact zeros in the mean") {
  const CliResult r =
      run_cli("solve " + data_file("zerocol34.json") + " --alpha 2");
  REQUIRE(r.code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["mean"].size() == 4);
  CHECK(doc["mean"][3].get<double>() == 0.0);
}

TEST_CASE("solved mean parses back as a valid input distribution") {
  const CliResult r =
      run_cli("solve " + data_file("asym23.json") + " --alpha 1.5");
  REQUIRE(r.code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  // Rebuild a channel file whose P is the reported mean; the strict parser
  // accepts it only if the printed mean is normalized to tolerance.
  nlohmann::json echo;
  echo["P"] = doc["mean"];
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < doc["mean"].size(); ++i) {
    std::vector<double> row(doc["mean"].size(), 0.0);
    row[i] = 1.0;
    rows.push_back(row);
  }
  echo["W"] = rows;
  const std::string path = "cli_echo.json";
  std::ofstream(path) << echo.dump();
  const CliResult again = run_cli("solve " + path + " --alpha 1");
  CHECK(again.code == 0);
}

TEST_CASE("solve error paths") {
  SECTION("nonpositive order") {
    const CliResult r =
        run_cli("solve " + data_file("bsc01.json") + " --alpha 0");
    CHECK(r.code == 1);
    CHECK(r.err.find("order must be positive") != std::string::npos);
  }

  SECTION("missing channel file") {
    const CliResult r = run_cli("solve no_such_file.json --alpha 1");
    CHECK(r.code == 1);
    CHECK(r.err.find("cannot open channel file") != std::string::npos);
  }

  SECTION("invalid tilting override") {
    const CliResult r = run_cli("solve " + data_file("bsc01.json") +
                                " --alpha 3 --beta 0.6");
    CHECK(r.code == 1);
  }

  SECTION("valid tilting override") {
    const CliResult r = run_cli("solve " + data_file("bsc01.json") +
                                " --alpha 3 --beta 0.4");
    CHECK(r.code == 0);
  }

  SECTION("non-convergence exits with code 2") {
    const CliResult r = run_cli("solve " + data_file("asym23.json") +
                                " --alpha 3 --tol 1e-30 --max-iter 3");
    CHECK(r.code == 2);
    const nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(!doc["converged"].get<bool>());
    CHECK(doc["iterations"].get<int>() == 3);
  }
}

TEST_CASE("sweep subcommand") {
  SECTION("range syntax on the noiseless channel") {
    const CliResult r = run_cli("sweep " + data_file("noiseless3.json") +
                                " --alphas 0.5:0.5:2.0");
    REQUIRE(r.code == 0);
    const std::vector<std::string> lines = split_lines(r.out);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "alpha,information,iterations,residual_tv");
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const std::vector<std::string> fields = split_fields(lines[i]);
      REQUIRE(fields.size() == 4);
      CHECK(std::stod(fields[1]) == Catch::Approx(ln3).margin(1e-9));
    }
  }

  SECTION("information is nondecreasing in the order") {
    const CliResult r = run_cli("sweep " + data_file("bsc01.json") +
                                " --alphas 0.25,0.5,1,2");
    REQUIRE(r.code == 0);
    const std::vector<std::string> lines = split_lines(r.out);
    REQUIRE(lines.size() == 5);
    double previous = -1.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const double info = std::stod(split_fields(lines[i])[1]);
      CHECK(info >= previous - 1e-10);
      previous = info;
    }
  }

  SECTION("empty order list is an error") {
    const CliResult r =
        run_cli("sweep " + data_file("bsc01.json") + " --alphas ,");
    CHECK(r.code == 1);
    CHECK(r.err.find("alpha list is empty") != std::string::npos);
  }
}

TEST_CASE("check subcommand") {
  SECTION("pinsker harness passes and announces its seed") {
    const CliResult r = run_cli("check pinsker --trials 6 --seed 9");
    REQUIRE(r.code == 0);
    const std::vector<std::string> lines = split_lines(r.out);
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] ==
          "# property=pinsker trials=6 rng=mt19937_64 seed=9");
    CHECK(lines.back().rfind("PASS pinsker:", 0) == 0);
  }

  SECTION("monotonicity harness passes") {
    const CliResult r = run_cli("check monotonicity --trials 6 --seed 2");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("PASS monotonicity:") != std::string::npos);
  }

  SECTION("unknown property is an error") {
    const CliResult r = run_cli("check convexity --trials 2");
    CHECK(r.code == 1);
    CHECK(r.err.find("unknown property") != std::string::npos);
  }
}

TEST_CASE("example1 subcommand") {
  SECTION("refinement toward the closed form") {
    const CliResult r =
        run_cli("example1 --gamma 2 --alpha 0.5 --grids 16,32");
    REQUIRE(r.code == 0);
    const std::vector<std::string> lines = split_lines(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "n,m,information,closed_form,rel_error");
    const std::vector<std::string> coarse = split_fields(lines[1]);
    const std::vector<std::string> fine = split_fields(lines[2]);
    REQUIRE(coarse.size() == 5);
    CHECK(std::stod(coarse[3]) ==
          Catch::Approx(1.5040773967762742).margin(1e-12));
    CHECK(std::stod(fine[4]) < std::stod(coarse[4]));
  }

  SECTION("orders with no finite limit are flagged") {
    const CliResult r =
        run_cli("example1 --gamma 2 --alpha 1.5 --grids 16");
    REQUIRE(r.code == 0);
    CHECK(r.err.find("closed form is infinite") != std::string::npos);
    const std::vector<std::string> lines = split_lines(r.out);
    REQUIRE(lines.size() == 2);
    const std::vector<std::string> fields = split_fields(lines[1]);
    REQUIRE(fields.size() == 5);
    CHECK(fields[3] == "inf");
    CHECK(fields[4] == "nan");
  }
}

TEST_CASE("usage errors") {
  CHECK(run_cli("").code == 1);
  CHECK(run_cli("solve").code == 1);
  CHECK(run_cli("frobnicate --alpha 1").code == 1);
  CHECK(run_cli("--help").code == 0);
}
