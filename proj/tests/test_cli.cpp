#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "plp/bayes.hpp"
#include "plp/cli/commands.hpp"
#include "plp/cli/config.hpp"
#include "plp/cli/failure_file.hpp"
#include "plp/cli/report.hpp"
#include "plp/datasets.hpp"
#include "plp/hash.hpp"
#include "plp/kde.hpp"
#include "plp/random.hpp"
#include "plp/simulate.hpp"
#include "support/fixtures.hpp"

using json = nlohmann::ordered_json;
using namespace plp;
using namespace plp::cli;
namespace fs = std::filesystem;

namespace {

struct Run
{
  int code;
  std::string out;
  std::string err;
};

Run plp_run(std::vector<std::string> args)
{
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return Run{code, out.str(), err.str()};
}

std::string crow_path()
{
  return plp::testing::crow_fixture().string();
}

std::string config_path(const std::string& name)
{
  return (plp::testing::data_dir() / "configs" / name).string();
}

//! Fresh scratch directory under the system temp dir.
fs::path scratch(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / ("plp_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& path, const std::string& text)
{
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

const json& estimator(const json& report, const std::string& name)
{
  for (const auto& e : report["estimators"]) {
    if (e["name"] == name) {
      return e;
    }
  }
  throw std::runtime_error("no estimator " + name);
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      row.push_back(cell);
    }
    rows.push_back(row);
  }
  return rows;
}

} // namespace

TEST_CASE("the Crow fixture is unmodified")
{
  CHECK(fnv1a(read_text_file(plp::testing::crow_fixture())) == plp::testing::crow_fixture_fnv1a);
  const auto parsed = parse_failure_file(plp::testing::crow_fixture());
  CHECK(parsed.times.size() == 40);
  CHECK(parsed.times.first() == 0.7);
  CHECK(parsed.times.last() == 3256.3);
  CHECK(parsed.warnings.empty());
  const auto bundled = datasets::crow_1974();
  for (std::size_t i = 0; i < 40; ++i) {
    CHECK(parsed.times[i] == bundled[i]);
  }
}

TEST_CASE("failure file parsing")
{
  CHECK(parse_failure_text("# header\n0.7\n3.7\n", "x").times.size() == 2);
  CHECK(parse_failure_text("\n  # indented comment\n1e-3\n  2.5  \n\n", "x").times.size() == 2);

  auto message = [](std::string_view text, ParseOptions opts = {}) {
    try {
      parse_failure_text(text, "f.txt", opts);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("1.0\n1.0\n").find("f.txt:2:") != std::string::npos);
  CHECK(message("1.0\n1.0\n").find("duplicate") != std::string::npos);
  CHECK(message("1.0\nabc\n").find("f.txt:2:") != std::string::npos);
  CHECK(message("1.0\n2.0x\n").find("f.txt:2:") != std::string::npos);
  CHECK(message("-1.0\n").find("f.txt:1:") != std::string::npos);
  CHECK(message("0\n").find("f.txt:1:") != std::string::npos);
  CHECK(message("2.0\n1.0\n").find("f.txt:2:") != std::string::npos);
  CHECK(message("# only a comment\n\n").find("no failure times") != std::string::npos);
  CHECK(message("").find("no failure times") != std::string::npos);
  CHECK(message("2.0\n1.0\n2.0\n", ParseOptions{true}).find("duplicate") != std::string::npos);

  const auto sorted = parse_failure_text("2.0\n1.0\n3.0\n", "f", ParseOptions{true});
  CHECK(sorted.times[0] == 1.0);
  CHECK(sorted.times[2] == 3.0);
  CHECK(sorted.warnings.size() == 1);

  CHECK_THROWS_AS(parse_failure_file("/nonexistent/plp/file.txt"), InputError);
  CHECK(parse_value_text("0.5\n0.5\n0.4\n", "v").size() == 3);
  CHECK_THROWS_AS(parse_value_text("0.5\n-0.4\n", "v"), InputError);
}

TEST_CASE("writing and re-reading failure times is the identity")
{
  RandomStream rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const auto data = simulate_failure_times(PlpParams(0.3 + rng.uniform(), 0.01 + 10.0 * rng.uniform()), 60, rng);
    const auto back = parse_failure_text(format_failure_file(data, "round trip"), "rt");
    REQUIRE(back.times.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      CHECK(back.times[i] == data[i]);
    }
  }
}

TEST_CASE("exit codes")
{
  const fs::path dir = scratch("exit");
  CHECK(plp_run({"mle", crow_path()}).code == exit_ok);
  CHECK(plp_run({}).code == exit_usage);
  CHECK(plp_run({"mle"}).code == exit_usage);
  CHECK(plp_run({"mle", crow_path(), "--bogus"}).code == exit_usage);
  CHECK(plp_run({"bayes", crow_path(), "--prior", "gamma"}).code == exit_usage);
  CHECK(plp_run({"bayes", crow_path(), "--f1", "-1"}).code == exit_usage);
  CHECK(plp_run({"bayes", crow_path(), "--burr", "1,2"}).code == exit_usage);
  CHECK(plp_run({"frobnicate"}).code == exit_usage);

  const auto bad = write_file(dir / "bad.txt", "1.0\nnot-a-number\n");
  const Run r = plp_run({"mle", bad.string()});
  CHECK(r.code == exit_input);
  CHECK(r.err.find("bad.txt:2:") != std::string::npos);
  CHECK(plp_run({"mle", (dir / "missing.txt").string()}).code == exit_input);
  CHECK(plp_run({"bayes", crow_path(), "--burr", "2,-1,0.1,1"}).code == exit_input);
  CHECK(plp_run({"bayes", crow_path(), "--burr", "2,5,0.1,1"}).code == exit_numerical);
  const auto one = write_file(dir / "one.txt", "3.0\n");
  CHECK(plp_run({"mle", one.string()}).code == exit_numerical);

  const Run q = plp_run({"bayes", crow_path(), "--rel-tol", "1e-15", "--max-refinements", "1"});
  CHECK(q.code == exit_numerical);
  CHECK(q.out.empty());
  CHECK(q.err.find("integrals") != std::string::npos);

  const auto cfg = write_file(dir / "cfg.json", R"({"theta_values": [1], "sample_sizes": [40], "colour": 1})");
  const Run c = plp_run({"simulate", cfg.string()});
  CHECK(c.code == exit_input);
  CHECK(c.err.find("colour") != std::string::npos);
}

TEST_CASE("mle report")
{
  const Run r = plp_run({"mle", crow_path()});
  REQUIRE(r.code == exit_ok);
  const json report = json::parse(r.out);
  const auto& mle = estimator(report, "mle");
  CHECK(std::round(mle["beta"].get<double>() * 100.0) / 100.0 == 0.49);
  CHECK(std::abs(mle["theta"].get<double>() - 1.7441) <= 0.01);
  CHECK(report["mle_trajectory"]["values"].size() == 36);
  CHECK(report["input"]["n"] == 40);

  const fs::path dir = scratch("mle");
  const auto two = write_file(dir / "two.txt", "1\n2.718281828459045\n");
  const json small = json::parse(plp_run({"mle", two.string()}).out);
  CHECK(std::abs(estimator(small, "mle")["beta"].get<double>() - 2.0) <= 1e-12);

  const Run csv = plp_run({"mle", crow_path(), "--format", "csv"});
  const auto rows = csv_rows(csv.out);
  CHECK(rows[0] == std::vector<std::string>{"estimator", "beta", "theta", "a", "b"});
  CHECK(rows[1][0] == "mle");
  CHECK(rows[1][1] == format_csv_number(mle["beta"].get<double>()));
}

TEST_CASE("bayes reports are self-consistent")
{
  const Run r = plp_run({"bayes", crow_path()});
  REQUIRE(r.code == exit_ok);
  const json report = json::parse(r.out);
  CHECK(report["theta_mode"] == "mle-derived");
  CHECK(report["priors"][0]["kind"] == "burr");
  for (const auto& e : report["estimators"]) {
    const double beta = e["beta"];
    const double theta = e["theta"];
    CHECK(std::abs(e["intensity"]["a"].get<double>() - beta / std::pow(theta, beta)) <= 1e-9);
    CHECK(std::abs(e["intensity"]["b"].get<double>() - (beta - 1.0)) <= 1e-9);
    CHECK(std::abs(e["reliability"]["c"].get<double>() - std::pow(theta, -beta)) <= 1e-9);
  }
  const auto& b = estimator(report, "bayes_ht:burr");
  const double beta = b["beta"];
  CHECK(std::abs(b["theta"].get<double>() - 3256.3 / std::pow(40.0, 1.0 / beta)) <= 1e-9);
  CHECK(beta > 0.45);
  CHECK(beta < 0.55);

  const json supplied = json::parse(plp_run({"bayes", crow_path(), "--theta", "2"}).out);
  CHECK(supplied["theta_mode"] == "supplied");
  CHECK(supplied["theta"] == 2.0);
}

TEST_CASE("kde-epan bandwidth is the AMISE bandwidth")
{
  const json report = json::parse(plp_run({"bayes", crow_path(), "--prior", "kde-epan"}).out);
  const auto& prior = report["priors"][0];
  const auto& ref = prior["amise_reference_burr"];
  const priors::BurrParams p{ref["alpha"], ref["gamma"], ref["delta"], ref["kappa"]};
  const double h = priors::amise_bandwidth(priors::Kernel::epanechnikov, p, prior["sample_size"]);
  CHECK(prior["bandwidth"].get<double>() == h);

  const json fixed = json::parse(plp_run({"bayes", crow_path(), "--prior", "kde-gauss", "--bandwidth", "0.05"}).out);
  CHECK(fixed["priors"][0]["bandwidth"] == 0.05);
  CHECK(fixed["priors"][0]["bandwidth_source"] == "supplied");
}

TEST_CASE("small loss weights report the posterior mean")
{
  const json report = json::parse(plp_run({"bayes", crow_path(), "--f1", "1e-4", "--f2", "1e-4"}).out);
  const double est = estimator(report, "bayes_ht:burr")["beta"];
  CHECK(std::abs(est - report["posterior"][0]["posterior_mean"].get<double>()) <= 1e-4);
}

TEST_CASE("simulate")
{
  const fs::path dir = scratch("simulate");
  const std::string prefix = (dir / "smoke").string();
  REQUIRE(plp_run({"simulate", config_path("smoke.json"), "--out", prefix}).code == exit_ok);
  REQUIRE(fs::exists(prefix + ".csv"));
  REQUIRE(fs::exists(prefix + ".json"));
  const json doc = json::parse(read_text_file(prefix + ".json"));
  CHECK(doc["cells"].size() == 6);
  CHECK(doc["metadata"]["master_seed"] == 7);
  const auto rows = csv_rows(read_text_file(prefix + ".csv"));
  CHECK(rows[0] == std::vector<std::string>{"theta", "n", "estimator", "mean", "mse", "replicates", "errors"});
  CHECK(rows.size() == 7);

  const Run a = plp_run({"simulate", config_path("smoke.json"), "--threads", "1"});
  const Run b = plp_run({"simulate", config_path("smoke.json"), "--threads", "4"});
  CHECK(a.out == b.out);
  CHECK(a.out == read_text_file(prefix + ".csv"));

  const Run seeded = plp_run({"simulate", config_path("smoke.json"), "--seed", "8"});
  CHECK(seeded.out != a.out);
}

TEST_CASE("desk-scale theta grid campaign favours the Bayes estimate at every theta")
{
  const Run r = plp_run({"simulate", config_path("theta_grid_desk.json"), "--format", "json", "--threads", "0"});
  REQUIRE(r.code == exit_ok);
  const json doc = json::parse(r.out);
  for (double theta : {0.5, 1.7441, 4.0}) {
    double mle = -1.0;
    double bayes = -1.0;
    for (const auto& c : doc["cells"]) {
      if (c["theta"] == theta && c["estimator"] == "beta_mle") {
        mle = c["mse"];
      }
      if (c["theta"] == theta && c["estimator"] == "beta_burr") {
        bayes = c["mse"];
      }
    }
    INFO("theta = " << theta);
    REQUIRE(mle > 0.0);
    REQUIRE(bayes > 0.0);
    CHECK(bayes / mle < 0.5);
  }
  CHECK(doc["relative_efficiency"].size() == 3);
}

TEST_CASE("curve plot data")
{
  const fs::path dir = scratch("curve");
  const auto data = datasets::crow_1974();
  json report;
  report["input"] = input_block("crow", data, {});
  report["estimators"] = json::array({estimator_block("bayes_ht:reported", PlpParams(0.501199, bayes::adjusted_theta(data, 0.501199))),
                                      estimator_block("hpp", PlpParams(1.0, 4.0))});
  const auto path = write_file(dir / "report.json", report.dump(2));

  const Run at_one = plp_run({"curve", path.string(), "--t-lo", "1", "--t-hi", "10", "--points", "2", "--estimator",
                              "bayes_ht:reported"});
  REQUIRE(at_one.code == exit_ok);
  const auto rows = csv_rows(at_one.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"estimator", "t", "intensity"});
  CHECK(rows[1][1] == "1");
  CHECK(rows[2][1] == "10");
  CHECK(std::abs(std::stod(rows[1][2]) - 0.347933) <= 1e-5);

  const Run flat = plp_run({"curve", path.string(), "--estimator", "hpp"});
  const auto flat_rows = csv_rows(flat.out);
  CHECK(flat_rows.size() == 101);
  CHECK(flat_rows[1][1] == "0.7");
  CHECK(flat_rows.back()[1] == "3256.3");
  for (std::size_t i = 1; i < flat_rows.size(); ++i) {
    CHECK(flat_rows[i][2] == "0.25");
  }

  CHECK(plp_run({"curve", path.string(), "--t-lo", "0"}).code == exit_usage);
  CHECK(plp_run({"curve", path.string(), "--t-lo", "5", "--t-hi", "1"}).code == exit_input);
  CHECK(plp_run({"curve", path.string(), "--estimator", "nope"}).code == exit_input);
  CHECK_THROWS_AS(curve_csv(report, -1.0, 1.0, 10, {}), InputError);
}

TEST_CASE("failing commands leave no output behind")
{
  const fs::path dir = scratch("partial");
  const auto bad = write_file(dir / "bad.txt", "1.0\n0.5\n");
  const fs::path out = dir / "report.json";
  const Run r = plp_run({"mle", bad.string(), "--out", out.string()});
  CHECK(r.code == exit_input);
  CHECK(r.out.empty());
  CHECK_FALSE(fs::exists(out));

  const Run q = plp_run({"bayes", crow_path(), "--rel-tol", "1e-15", "--max-refinements", "1", "--out",
                         out.string()});
  CHECK(q.code == exit_numerical);
  CHECK_FALSE(fs::exists(out));

  const auto cfg = write_file(dir / "cfg.json", R"({"theta_values": [1], "sample_sizes": [1]})");
  CHECK(plp_run({"simulate", cfg.string(), "--out", (dir / "camp").string()}).code == exit_input);
  CHECK_FALSE(fs::exists(dir / "camp.csv"));
  CHECK_FALSE(fs::exists(dir / "camp.json"));
  for (const auto& entry : fs::directory_iterator(dir)) {
    CHECK(entry.path().extension() != ".tmp");
  }
}

TEST_CASE("run config validation names the offending key")
{
  auto error = [](const std::string& text) {
    try {
      parse_run_config(json::parse(text), ".");
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(error(R"({"sample_sizes": [40]})").find("theta_values") != std::string::npos);
  CHECK(error(R"({"theta_values": [1], "sample_sizes": [40], "replicates": 0})").find("replicates") !=
        std::string::npos);
  CHECK(error(R"({"theta_values": [1], "sample_sizes": [40], "priors": ["gamma"]})").find("priors") !=
        std::string::npos);
  CHECK(error(R"({"theta_values": [1], "sample_sizes": [40], "quadrature": {"tol": 1}})").find("tol") !=
        std::string::npos);
  CHECK(error(R"({"theta_values": [-1], "sample_sizes": [40]})").find("theta_values") != std::string::npos);

  const RunConfig ok = parse_run_config(json::parse(R"({"theta_values": [1], "sample_sizes": [40]})"), ".");
  CHECK(ok.sim.replicates == 500);
  CHECK(ok.sim.loss.f1 == 1.0);
  CHECK(ok.sim.priors.size() == 1);
  CHECK(ok.sim.priors[0].label == "burr");
  CHECK(ok.re_range == montecarlo::default_re_range);
}
