#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "graphlogm/bench.hpp"
#include "graphlogm/cli.hpp"
#include "graphlogm/matio.hpp"
#include "oracles.hpp"

using namespace graphlogm;
using graphlogm::test::u;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "graphlogm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> report(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string key, value;
  while (is >> key && std::getline(is >> std::ws, value)) kv[key] = value;
  return kv;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("graphlogm_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

BenchRecord rec(const std::string& id, const std::string& method, double er) {
  BenchRecord r;
  r.matrix_id = id;
  r.method = method;
  r.er = er;
  return r;
}

}  // namespace

TEST_CASE("relative_error") {
  std::mt19937_64 rng(51);
  const auto l = test::random_matrix(8, rng);
  CHECK(relative_error(l, l) == 0.0);
  CHECK(relative_error(Matrix<double>(1.01 * l), l) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK_THROWS_AS(relative_error(l, Matrix<double>::zeros(8)), ArgumentError);
  const auto big = test::random_matrix(32, rng);
  CHECK(norm2_power(big) == doctest::Approx(norm2_svd(big)).epsilon(1e-8));
}

TEST_CASE("performance_profile") {
  SUBCASE("single method") {
    const auto c = performance_profile({rec("m1", "graph", 1e-15), rec("m2", "graph", 1e-13)});
    REQUIRE(c.size() == 1);
    for (const auto& p : c[0].points) CHECK(p.p == 1.0);
  }
  SUBCASE("two methods on one matrix") {
    const auto c = performance_profile({rec("m1", "A", 1e-15), rec("m1", "B", 3e-15)});
    REQUIRE(c.size() == 2);
    for (const auto& curve : c) {
      for (const auto& p : curve.points) {
        if (curve.method == "A") CHECK(p.p == 1.0);
        if (curve.method == "B") CHECK(p.p == (p.alpha >= 3.0 ? 1.0 : 0.0));
      }
      CHECK(curve.points.front().alpha == 1.0);
      CHECK(curve.points.back().alpha == 5.0);
    }
  }
  SUBCASE("errors below the unit roundoff tie") {
    const auto c = performance_profile({rec("m1", "A", 1e-18), rec("m1", "B", 1e-17)});
    for (const auto& curve : c) CHECK(curve.points.front().p == 1.0);
  }
  SUBCASE("incomplete grid") {
    CHECK_THROWS_AS(performance_profile({rec("m1", "A", 1e-15), rec("m1", "B", 1e-15), rec("m2", "A", 1e-15)}),
                    InputError);
  }
}

TEST_CASE("bench records") {
  FamilyOptions fo;
  fo.n = 12;
  const auto set = gen_test_matrices('b', 3, 4, fo);
  const auto r1 = run_bench(set, {"graph", "ps"});
  const auto r2 = run_bench(set, {"graph", "ps"});
  REQUIRE(r1.size() == 8);
  for (std::size_t i = 0; i < r1.size(); ++i) {
    BenchRecord a = r1[i], b = r2[i];
    a.seconds = b.seconds = 0.0;
    CHECK(a == b);
    CHECK(r1[i].er <= 1e-10);
  }
  std::stringstream ss;
  write_bench_csv(ss, r1);
  CHECK(read_bench_csv(ss) == r1);

  const auto curves = performance_profile(r1);
  for (const auto& c : curves)
    for (std::size_t i = 1; i < c.points.size(); ++i) CHECK(c.points[i].p >= c.points[i - 1].p);
}

TEST_CASE("cli logm") {
  const fs::path dir = scratch("logm");
  const std::string in = (dir / "id.mat").string();
  write_matrix_file(in, Matrix<double>::identity(4));
  auto r = run({"--out-dir", dir.string(), "logm", in});
  CHECK(r.code == kExitOk);
  auto kv = report(r.out);
  CHECK(kv["s"] == "0");
  CHECK(kv["k"] == "1");
  CHECK(std::get<Matrix<double>>(read_matrix_file((dir / "logm.txt").string())) == Matrix<double>::zeros(4));

  FamilyOptions fo;
  fo.n = 10;
  const TestMatrix t = make_test_matrix('b', 9, fo);
  write_matrix_file((dir / "b.mat").string(), t.a);
  write_matrix_file((dir / "b.log.mat").string(), t.log_ref);
  r = run({"logm", (dir / "b.mat").string(), "--ref", (dir / "b.log.mat").string(), "-o", (dir / "l.mat").string()});
  CHECK(r.code == kExitOk);
  kv = report(r.out);
  CHECK(std::stod(kv["er"]) <= 1e-12);

  write_matrix_file((dir / "sing.mat").string(), Matrix<double>(2, {1, 2, 2, 4}));
  r = run({"--out-dir", dir.string(), "logm", (dir / "sing.mat").string()});
  CHECK(r.code == kExitNumerical);
  CHECK(r.err.find("singular") != std::string::npos);

  r = run({"logm", (dir / "missing.mat").string()});
  CHECK(r.code == kExitInput);
  r = run({"logm"});
  CHECK(r.code == kExitInput);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("cli gen, bench and profile") {
  const fs::path dir = scratch("bench");
  auto r = run({"--out-dir", dir.string(), "--seed", "4", "gen", "--family", "b", "--count", "3", "-n", "8"});
  REQUIRE(r.code == kExitOk);
  FamilyOptions fo;
  fo.n = 8;
  CHECK(std::get<Matrix<double>>(read_matrix_file((dir / "b_n8_0.mat").string())) ==
        make_test_matrix('b', 4, fo, 0).a);

  const fs::path out = dir / "out";
  r = run({"--out-dir", out.string(), "--format", "svg", "bench", "--dir", dir.string()});
  REQUIRE(r.code == kExitOk);
  auto kv = report(r.out);
  CHECK(kv["records"] == "6");
  CHECK(kv["alpha_violations"] == "0");
  CHECK(kv["product_violations"] == "0");
  CHECK(fs::exists(out / "errors.svg"));

  r = run({"--out-dir", out.string(), "bench", "--family", "b", "--count", "20", "-n", "32"});
  REQUIRE(r.code == kExitOk);
  kv = report(r.out);
  CHECK(kv["records"] == "40");
  std::ifstream f(out / "bench.csv");
  for (const BenchRecord& b : read_bench_csv(f)) CHECK(b.er <= 1e-10);

  r = run({"--out-dir", out.string(), "--format", "svg", "profile", (out / "bench.csv").string()});
  CHECK(r.code == kExitOk);
  CHECK(fs::exists(out / "profile.csv"));
  CHECK(fs::exists(out / "profile.svg"));

  CHECK(run({"bench", "--family", "z"}).code == kExitInput);
  CHECK(run({"profile", (dir / "nope.csv").string()}).code == kExitInput);
}

TEST_CASE("cli theta and stability") {
  const fs::path dir = scratch("theta");
  auto r = run({"--out-dir", dir.string(), "theta"});
  REQUIRE(r.code == kExitOk);
  CHECK(line_count(r.out) == static_cast<std::size_t>(builtin_max_k()) + 1);
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  CHECK(line == "k,m,degree,theta,published,rel_diff");
  for (int k = 1; k <= 5; ++k) {
    std::getline(is, line);
    const double rel = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(std::abs(rel) <= 0.02);
  }
  CHECK(fs::exists(dir / "theta.csv"));

  r = run({"--out-dir", dir.string(), "stability", "--published"});
  REQUIRE(r.code == kExitOk);
  const auto pos = r.out.find("published_k5,5,");
  REQUIRE(pos != std::string::npos);
  const std::string row = r.out.substr(pos, r.out.find('\n', pos) - pos);
  std::vector<std::string> cells;
  std::istringstream rs(row);
  for (std::string c; std::getline(rs, c, ',');) cells.push_back(c);
  REQUIRE(cells.size() == 7);
  CHECK(std::stod(cells[5]) <= 6.0);
  CHECK(cells[6] == "pass");

  CHECK(run({"--digits", "20", "theta"}).code == kExitInput);
  CHECK(run({"theta", "--k5", "other"}).code == kExitInput);
}

TEST_CASE("cli fit") {
  const fs::path dir = scratch("fit");
  auto r = run({"--out-dir", dir.string(), "fit", "--k", "3", "--moment", "8"});
  REQUIRE(r.code == kExitOk);
  CHECK(fs::exists(dir / "fit_k3.scheme"));
  CHECK(run({"fit", "--k", "3", "--moment", "7"}).code == kExitNumerical);
  r = run({"--out-dir", dir.string(), "fit", "--k", "2", "--radius", "0.01", "--restarts", "1", "--samples", "32"});
  CHECK(r.code == kExitOk);
  CHECK(report(r.out).count("achieved_max_error") == 1);
}
