#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "liek/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

using namespace liek;
using cplx = std::complex<double>;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string fresh_dir(const char* stem) {
  const auto d = fs::temp_directory_path() / stem;
  fs::remove_all(d);
  fs::create_directories(d);
  return d.string();
}

}  // namespace

TEST_CASE("the registry lists every check once, in suite order") {
  const std::vector<std::string> want = {
      "identity",          "vector_field",      "weylq_oracle",
      "cutoff_independence", "composition_law", "commutator_poisson",
      "adjoint",           "power_conjugation", "flow_conjugation",
      "diff_recovery",     "sobolev_ladder",    "suspended_invariance",
      "semiclassical_scaling"};
  const auto& reg = check_registry();
  REQUIRE(reg.size() == want.size());
  for (size_t i = 0; i < want.size(); ++i) {
    CHECK(reg[i].name == want[i]);
    CHECK(reg[i].default_tol != 0.0);
    CHECK(!reg[i].properties.empty());
    CHECK(static_cast<bool>(reg[i].run));
  }
}

TEST_CASE("the property tags cover the verified algebra facts") {
  std::set<std::string> tags;
  for (const auto& def : check_registry())
    tags.insert(def.properties.begin(), def.properties.end());
  for (const char* required :
       {"conjugation-by-bdf-power", "conjugation-by-flow",
        "principal-symbol-isomorphism", "algebra-closure", "adjoint-closure",
        "sobolev-boundedness", "commutator-poisson",
        "vector-field-quantization", "diff-recovery", "cutoff-independence",
        "face-preservation"})
    CHECK_MESSAGE(tags.count(required) == 1, "missing tag: " << required);
}

TEST_CASE("loglog slope is exact on pure powers") {
  std::vector<std::pair<double, double>> cubic, flat;
  for (double x : {2.0, 4.0, 8.0, 16.0}) {
    cubic.emplace_back(x, 5.0 * x * x * x);
    flat.emplace_back(x, 7.0);
  }
  CHECK(loglog_slope(cubic) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(loglog_slope(flat) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sobolev norms on a single circle mode") {
  auto g = make_model(ModelKind::Circle, {64, 10.0, 1.0});
  auto u = make_grid_function_s(
      g, [](double s) { return std::exp(cplx(0.0, 3.0 * s)); });
  // ||e^{i3s}||_{H^s}^2 = 2 L <3>^{2s} with L = pi.
  for (double s : {0.0, 1.0, 2.0}) {
    const double want = std::sqrt(2.0 * kPi) * std::pow(10.0, 0.5 * s);
    CHECK(sobolev_norm(u, s) == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(sobolev_norm(u, 0.0) == doctest::Approx(l2_norm(u)).epsilon(1e-12));
}

TEST_CASE("operator norm by power iteration") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = cplx(0.0, 5.0);
  a(2, 2) = 2.0;
  CHECK(operator_norm2(a) == doctest::Approx(5.0).epsilon(1e-8));
  CHECK(operator_norm2(Eigen::MatrixXcd::Zero(3, 3)) ==
        doctest::Approx(0.0));
}

TEST_CASE("band-limited trial fields are deterministic in the seed") {
  auto g = make_model(ModelKind::BInterval, {64, 10.0, 1.0});
  auto u1 = bandlimited_field(g, 42);
  auto u2 = bandlimited_field(g, 42);
  auto u3 = bandlimited_field(g, 43);
  CHECK((u1.values - u2.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK((u1.values - u3.values).cwiseAbs().maxCoeff() > 1e-3);
  CHECK(u1.values.cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sobolev bound estimate is exact for the identity") {
  auto g = make_model(ModelKind::Circle, {64, 10.0, 1.0});
  auto id = identity_operator(g);
  CHECK(estimate_sobolev_bound(id, 1.0, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Gauss-Legendre oracle agrees with the FFT assembly") {
  auto g = make_model(ModelKind::Circle, {32, 10.0, 1.0});
  auto chi = make_cutoff(*g);
  auto sym = symbol_from_name(*g, "gauss");
  auto fftk = assemble_kernel(g, sym, chi);
  auto oracle = oracle_weylq_kernel(g, sym, chi);
  CHECK((oracle - fftk.kernel()).cwiseAbs().maxCoeff() < 1e-9);

  auto u = bandlimited_field(g, 5);
  auto via_oracle = oracle_weylq(g, sym, chi, u);
  auto via_fft = fftk.apply(u);
  CHECK((via_oracle.values - via_fft.values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("run_suite: identity on a coarse circle passes and writes reports") {
  RunConfig cfg;
  cfg.kind = ModelKind::Circle;
  cfg.n = 64;
  cfg.suite = {"identity"};
  cfg.out_dir = fresh_dir("liek_verify_identity");
  auto reports = run_suite(cfg);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].name == "identity");
  CHECK(reports[0].geometry == "circle");
  CHECK(reports[0].n == 64);
  CHECK(reports[0].pass);
  CHECK(reports[0].measured <= 1e-6);
  CHECK(!reports[0].properties.empty());

  const std::string csv = slurp(cfg.out_dir + "/suite.csv");
  CHECK(csv.rfind("name,geometry,N,L,measured,tol,pass\n", 0) == 0);
  CHECK(csv.find("identity,circle,64,") != std::string::npos);

  auto root = nlohmann::json::parse(slurp(cfg.out_dir + "/suite.json"));
  CHECK(root["all_pass"].get<bool>());
  REQUIRE(root["checks"].size() == 1);
  CHECK(root["checks"][0]["name"] == "identity");
  CHECK(root["checks"][0]["measured"].get<double>() <= 1e-6);
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("run_suite: unknown check names are rejected") {
  RunConfig cfg;
  cfg.suite = {"nonexistent_check"};
  cfg.out_dir = fresh_dir("liek_verify_unknown");
  CHECK_THROWS_AS(run_suite(cfg), std::invalid_argument);
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("run_suite: an empty selection runs nothing but still reports") {
  RunConfig cfg;
  cfg.suite = {};
  cfg.out_dir = fresh_dir("liek_verify_empty");
  auto reports = run_suite(cfg);
  CHECK(reports.empty());
  CHECK(slurp(cfg.out_dir + "/suite.csv") ==
        "name,geometry,N,L,measured,tol,pass\n");
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("run_suite: tolerance overrides are applied verbatim") {
  RunConfig cfg;
  cfg.kind = ModelKind::Circle;
  cfg.n = 64;
  cfg.suite = {"adjoint"};
  cfg.tolerances["adjoint"] = 1e-30;
  cfg.out_dir = fresh_dir("liek_verify_tol");
  auto reports = run_suite(cfg);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].tol == 1e-30);
  CHECK(!reports[0].pass);
  CHECK(reports[0].measured > 1e-30);
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("identical seeds reproduce bit-identical reports and artifacts") {
  RunConfig cfg;
  cfg.kind = ModelKind::BInterval;
  cfg.n = 64;
  cfg.seed = 7;
  cfg.suite = {"identity", "adjoint", "diff_recovery"};

  RunConfig a = cfg, b = cfg;
  a.out_dir = fresh_dir("liek_verify_det_a");
  b.out_dir = fresh_dir("liek_verify_det_b");
  auto ra = run_suite(a);
  auto rb = run_suite(b);
  CHECK(summary_csv(ra) == summary_csv(rb));
  CHECK(slurp(a.out_dir + "/suite.csv") == slurp(b.out_dir + "/suite.csv"));

  REQUIRE(ra.size() == rb.size());
  for (size_t i = 0; i < ra.size(); ++i) {
    REQUIRE(ra[i].artifacts.size() == rb[i].artifacts.size());
    for (size_t k = 0; k < ra[i].artifacts.size(); ++k)
      CHECK(slurp(ra[i].artifacts[k]) == slurp(rb[i].artifacts[k]));
  }
  // suite.json only differs in the artifact paths, which embed the out dir.
  auto ja = nlohmann::json::parse(slurp(a.out_dir + "/suite.json"));
  auto jb = nlohmann::json::parse(slurp(b.out_dir + "/suite.json"));
  for (size_t i = 0; i < ra.size(); ++i)
    CHECK(ja["checks"][i]["measured"].get<double>() ==
          jb["checks"][i]["measured"].get<double>());
  fs::remove_all(a.out_dir);
  fs::remove_all(b.out_dir);
}

TEST_CASE("series render to two-column CSV") {
  Series s;
  s.label = "demo";
  s.x_name = "lambda";
  s.y_name = "residual";
  s.points = {{1.0, 0.5}, {2.0, 0.25}};
  CHECK(series_csv(s) == "lambda,residual\n1,0.5\n2,0.25\n");
}

TEST_CASE("a throwing check is reported as failed, not fatal") {
  RunConfig cfg;
  cfg.kind = ModelKind::Circle;
  cfg.n = 64;
  // Needs at least two rungs; a single-entry ladder must throw inside and be
  // converted into a failing report.
  cfg.semiclassical_t_ladder = {1.0};
  cfg.suite = {"semiclassical_scaling", "identity"};
  cfg.out_dir = fresh_dir("liek_verify_throw");
  auto reports = run_suite(cfg);
  REQUIRE(reports.size() == 2);
  CHECK(!reports[0].pass);
  CHECK(reports[0].detail.find("error:") != std::string::npos);
  CHECK(reports[1].pass);
  fs::remove_all(cfg.out_dir);
}
