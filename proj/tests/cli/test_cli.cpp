#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "schatten/cli/commands.hpp"
#include "schatten/cli/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = schatten::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / "schatten_cli_test";
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("sha256 digest") {
  CHECK(schatten::cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("estimate from a spectrum") {
  const std::string spec = write_temp("id3.json", "[1,1,1]");
  const auto r = run({"estimate", "--spectrum", spec, "--p", "2", "--n", "6", "--seed", "1", "--reps", "1000"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["manifest"]["subcommand"] == "estimate");
  CHECK(j["manifest"]["seed"] == 1);
  CHECK(j["manifest"]["inputs"][0]["sha256"].get<std::string>().size() == 64);
  CHECK(j["target"] == 3.0);
  const double mean = j["stats"]["empirical_mean"];
  const double se = j["stats"]["stderr_mean"];
  CHECK(std::abs(mean - 3.0) <= 4 * se);
}

TEST_CASE("estimate from a matrix") {
  const std::string mat = write_temp("diag34.csv", "3,0\n0,4\n");
  const auto r = run({"estimate", "--matrix", mat, "--p", "2", "--n", "4", "--seed", "7"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["target"].get<double>() == doctest::Approx(337.0));
  CHECK(std::isfinite(j["estimate"].get<double>()));
}

TEST_CASE("input errors exit with code 2") {
  const std::string spec = write_temp("id3.json", "[1,1,1]");
  auto r = run({"estimate", "--spectrum", spec, "--p", "5", "--n", "3"});
  CHECK(r.code == 2);
  CHECK(r.err.find("n must be ≥ p") != std::string::npos);
  CHECK(run({"estimate", "--spectrum", "/nonexistent/x.json", "--p", "1", "--n", "3"}).code == 2);
  const std::string bad = write_temp("bad.csv", "1,2\n3\n");
  CHECK(run({"estimate", "--matrix", bad, "--p", "1", "--n", "3"}).code == 2);
  CHECK(run({"estimate", "--p", "1", "--n", "3"}).code == 2);
  CHECK(run({"variance", "--spectrum", spec, "--p", "2", "--n", "4", "--method", "other"}).code == 2);
  CHECK(run({"nope"}).code == 2);
  CHECK(run({"bounds", "--spectrum", spec, "--p", "2", "--n", "4", "--format", "yaml"}).code == 2);
}

TEST_CASE("variance methods") {
  const std::string id3 = write_temp("id3.json", "[1,1,1]");
  const std::string s123 = write_temp("s123.json", "[1,2,3]");
  auto j = json::parse(run({"variance", "--spectrum", id3, "--p", "2", "--n", "6"}).out);
  CHECK(j["variance"]["variance"].get<double>() == doctest::Approx(5.6).epsilon(1e-13));
  j = json::parse(run({"variance", "--spectrum", s123, "--p", "1", "--n", "10"}).out);
  CHECK(j["variance"]["variance"].get<double>() == doctest::Approx(2.8).epsilon(1e-13));
  j = json::parse(run({"variance", "--spectrum", id3, "--p", "2", "--n", "6", "--method", "single-sum"}).out);
  CHECK(run({"variance", "--spectrum", id3, "--p", "2", "--n", "6", "--method", "paper-literal"}).out == 
        run({"variance", "--spectrum", id3, "--p", "2", "--n", "6", "--method", "single-sum"}).out);
  CHECK(j["discrepancy"].get<double>() != 0.0);
  for (const char* method : {"brute", "oracle"}) {
    j = json::parse(run({"variance", "--spectrum", id3, "--p", "2", "--n", "6", "--method", method}).out);
    CHECK(j["variance"]["variance"].get<double>() == doctest::Approx(5.6).epsilon(1e-12));
  }
  const auto guarded = run({"variance", "--spectrum", id3, "--p", "4", "--n", "20", "--method", "oracle"});
  CHECK(guarded.code == 3);
  CHECK(guarded.err.find("1e6") != std::string::npos);
  CHECK(run({"variance", "--spectrum", id3, "--p", "5", "--n", "30", "--method", "brute"}).code == 3);
}

TEST_CASE("bounds report and grid") {
  const std::string id3 = write_temp("id3.json", "[1,1,1]");
  const std::string id4 = write_temp("id4.json", "[1,1,1,1]");
  auto j = json::parse(run({"bounds", "--spectrum", id3, "--p", "2", "--n", "6"}).out);
  CHECK(j["bound"]["new_bound"].get<double>() == doctest::Approx(13.4).epsilon(1e-12));
  CHECK(j["bound"]["exact_variance"].get<double>() == doctest::Approx(5.6).epsilon(1e-12));
  CHECK(j["bound"]["slack"].get<double>() > 0.0);
  j = json::parse(run({"bounds", "--spectrum", id3, "--p", "2", "--n", "3"}).out);
  CHECK(j["bound"]["b1"] == 0.0);
  CHECK(j["bound"]["b2"] == 0.0);
  j = json::parse(run({"bounds", "--spectrum", id4, "--p", "2", "--n", "8", "--kappa", "3"}).out);
  CHECK(j["bound"]["ratio"].get<double>() < 1e-6);

  const auto csv = run({"bounds", "--grid", "p=2:3,n=4:5,d=2:3", "--format", "csv"});
  REQUIRE(csv.code == 0);
  std::istringstream lines(csv.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "p,n,d,b1,b2,b3,b4,new_bound,kv_bound,exact_variance,slack,ratio\r");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 8);
  CHECK(run({"bounds", "--grid", "p=2:3"}).code == 2);
}

TEST_CASE("validate passes and is independent of threads") {
  const auto a = run({"validate", "--reps", "20000", "--threads", "1"});
  const auto b = run({"validate", "--reps", "20000", "--threads", "3"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const json j = json::parse(a.out);
  CHECK(j["passed"] == true);
  bool erratum = false;
  for (const auto& e : j["errata"]) {
    if (e["name"] == "m_moment_single_sum") {
      erratum = true;
      CHECK(e["literal"] == 15.0);
      CHECK(e["normative"] == 45.0);
      CHECK(e["expected"] == true);
    }
  }
  CHECK(erratum);
  CHECK(j["manifest"]["params"].find("threads") == j["manifest"]["params"].end());
}

TEST_CASE("validate engages the Wick path and skips guarded sizes") {
  auto j = json::parse(run({"validate", "--p", "3", "--n", "4", "--d", "2", "--reps", "5000"}).out);
  CHECK(j["passed"] == true);
  for (const auto& c : j["checks"]) {
    if (c["name"] == "brute_variance") CHECK(c["status"] == "pass");
  }
  const auto r = run({"validate", "--p", "4", "--d", "6", "--reps", "2000"});
  CHECK(r.code == 0);
  j = json::parse(r.out);
  for (const auto& c : j["checks"]) {
    if (c["name"] == "brute_variance") CHECK(c["status"] == "skip");
  }
}

TEST_CASE("thread count from the environment") {
  const std::string id3 = write_temp("id3.json", "[1,1,1]");
  ::setenv("SCHATTEN_THREADS", "2", 1);
  const auto a = run({"estimate", "--spectrum", id3, "--p", "2", "--n", "5", "--reps", "300"});
  ::setenv("SCHATTEN_THREADS", "bogus", 1);
  const auto bad = run({"estimate", "--spectrum", id3, "--p", "2", "--n", "5", "--reps", "300"});
  ::unsetenv("SCHATTEN_THREADS");
  const auto b = run({"estimate", "--spectrum", id3, "--p", "2", "--n", "5", "--reps", "300"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(bad.code == 2);
}

TEST_CASE("text and csv formats") {
  const std::string id3 = write_temp("id3.json", "[1,1,1]");
  const auto text = run({"variance", "--spectrum", id3, "--p", "2", "--n", "6", "--format", "text"});
  CHECK(text.out.find("variance: 5.6") != std::string::npos);
  const auto csv = run({"variance", "--spectrum", id3, "--p", "2", "--n", "6", "--format", "csv"});
  CHECK(csv.out.rfind("p,n,d,method,mean,second_moment,variance,discrepancy\r\n", 0) == 0);
}
