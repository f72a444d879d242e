#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracineq/cli.hpp"

using namespace fracineq;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fracineq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string line(const std::string& text, int n) {
  std::istringstream in(text);
  std::string l;
  for (int i = 0; i <= n; ++i) std::getline(in, l);
  return l;
}

std::string drop_last_field(const std::string& row) { return row.substr(0, row.rfind(',')); }

}  // namespace

TEST_CASE("cli rl: prints the integral", "[cli]") {
  const auto r = run({"rl", "--f", "exp", "--a", "0", "--x", "1", "--alpha", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("1.71828182", 0) == 0);
  const auto right = run({"rl", "--f", "exp", "--b", "3", "--x", "1", "--alpha", "0.7", "--right"});
  CHECK(right.code == 0);
  CHECK(std::abs(std::stod(right.out) - 13.309081135399794636) < 1e-8);
  CHECK(run({"rl", "--f", "exp", "--x", "1", "--alpha", "1"}).code == 2);
  CHECK(run({"rl", "--f", "exp", "--a", "0", "--x", "1", "--alpha", "-1"}).code == 2);
}

TEST_CASE("cli classify: exit codes follow the verdict", "[cli]") {
  const auto q = run({"classify", "--f", "paper-piecewise", "--class", "quasi", "--lo", "0.5", "--hi", "4"});
  CHECK(q.code == 0);
  CHECK(q.out.rfind("quasi-geometric: certified-on-samples", 0) == 0);
  const auto ga = run({"classify", "--f", "paper-piecewise", "--class", "ga", "--lo", "0.01", "--hi", "4"});
  CHECK(ga.code == 1);
  CHECK_THAT(ga.out, Catch::Matchers::ContainsSubstring("violated"));
  CHECK_THAT(ga.out, Catch::Matchers::ContainsSubstring("witness x="));
}

TEST_CASE("cli verify: row equals the library report", "[cli]") {
  const auto r = run({"verify", "--theorem", "ga-s", "--f", "exp", "--a", "0.5", "--b", "3", "--x", "1.1",
                      "--alpha", "1.2", "--lambda", "0.2", "--q", "2", "--s", "0.6"});
  CHECK(r.code == 0);
  CHECK(line(r.out, 0) == kCsvHeader);

  Params p;
  p.iv = Interval(0.5, 3.0);
  p.x = 1.1;
  p.alpha = 1.2;
  p.lambda = 0.2;
  p.q = 2.0;
  p.cls.s = 0.6;
  SweepRow row;
  row.report = verify({Theorem::ga_s}, lookup("exp"), p);
  std::ostringstream want;
  write_csv_row(want, row);
  CHECK(drop_last_field(line(r.out, 1)) == drop_last_field(line(want.str(), 0)));
}

TEST_CASE("cli verify: findings, hh and forced parameters", "[cli]") {
  const auto trap = run({"verify", "--theorem", "quasi", "--corollary", "trapezoid", "--f", "exp", "--a", "1", "--b",
                         "3", "--alpha", "1", "--q", "2"});
  CHECK(trap.code == 1);
  CHECK_THAT(line(trap.out, 1), Catch::Matchers::ContainsSubstring(",false,"));

  const auto hh = run({"verify", "--theorem", "hh", "--f", "exp", "--a", "1", "--b", "4", "--alpha", "0.5"});
  CHECK(hh.code == 0);
  CHECK(line(hh.out, 2).rfind("middle ", 0) == 0);

  const auto un = run({"verify", "--theorem", "ga-s", "--f", "log-squared", "--a", "1", "--b", "7.38905609893065",
                       "--x", "2.718281828459045", "--alpha", "1"});
  CHECK(un.code == 1);
  CHECK(un.out.rfind("uncertified: ", 0) == 0);

  const auto mismatch = run({"verify", "--theorem", "quasi", "--corollary", "q1", "--f", "exp", "--a", "1", "--b",
                             "3", "--x", "2", "--q", "2"});
  CHECK(mismatch.code == 2);
  CHECK(mismatch.err.rfind("error: KindParameterMismatch", 0) == 0);

  CHECK(run({"verify", "--theorem", "ga-s", "--f", "exp", "--a", "1", "--b", "3"}).code == 2);
  CHECK(run({"verify", "--theorem", "ga-s", "--corollary", "ostrowski", "--f", "exp", "--a", "1", "--b", "3",
             "--x", "2"})
            .code == 2);
}

TEST_CASE("cli: usage errors exit 2 with one diagnostic line", "[cli]") {
  const auto unknown = run({"rl", "--f", "nope", "--a", "0", "--x", "1", "--alpha", "1"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err == "error: UnknownFunction: no registered function named 'nope'\n");
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"classify", "--f", "exp", "--class", "convex", "--lo", "1", "--hi", "2"}).code == 2);
  CHECK(run({"sweep", "--spec", "/nonexistent.toml", "--out", "x"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli sweep: writes deterministic CSV and JSON", "[cli]") {
  const auto dir = std::filesystem::temp_directory_path() / "fracineq_cli_test";
  std::filesystem::create_directories(dir);
  const auto spec = dir / "spec.toml";
  {
    std::ofstream s(spec);
    s << "seed = 5\nn_samples = 6\nkinds = [\"ga-s\", \"sm:simpson\"]\n";
  }
  auto once = [&](const std::string& prefix, const std::string& threads) {
    const auto r = run({"sweep", "--spec", spec.string(), "--out", (dir / prefix).string(), "--threads", threads});
    REQUIRE(std::filesystem::exists(dir / (prefix + ".csv")));
    REQUIRE(std::filesystem::exists(dir / (prefix + ".json")));
    return r;
  };
  const auto r1 = once("a", "1");
  const auto r2 = once("b", "2");
  CHECK(r1.out == r2.out);
  CHECK(r1.code == r2.code);
  CHECK_THAT(r1.out, Catch::Matchers::ContainsSubstring("ga-s: 6 instances"));

  auto rows = [](const std::string& csv) {
    std::istringstream in(csv);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(drop_last_field(l));
    return out;
  };
  const auto c1 = rows(slurp(dir / "a.csv"));
  CHECK(c1.size() == 13);
  CHECK(c1 == rows(slurp(dir / "b.csv")));
  const auto j = nlohmann::json::parse(slurp(dir / "a.json"));
  CHECK(j["rows"].size() == 12);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli identity: restricted run", "[cli]") {
  const auto r = run({"identity", "--f", "exp", "--f", "const-5", "--m", "0.5"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("evaluations ", 0) == 0);
  CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("second-member sign: minus"));
  CHECK(run({"identity", "--f", "nope"}).code == 2);
}
