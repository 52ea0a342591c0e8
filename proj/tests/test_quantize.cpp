#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "liek/fft.hpp"
#include "liek/quantize.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

using namespace liek;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

GeometryPtr circle(int n) { return make_model(ModelKind::Circle, {n, 10.0, 1.0}); }
GeometryPtr bint(int n, double L = 10.0) {
  return make_model(ModelKind::BInterval, {n, L, 1.0});
}

// Random trigonometric polynomial with modes |k| <= kmax in the straightened
// coordinate (window periodic, so exact for the spectral paths).
GridFunction trig_field(const GeometryPtr& g, int kmax, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
  const double k0 = kPi / g->window();
  std::vector<std::pair<int, double>> modes;
  for (int k = -kmax; k <= kmax; ++k) modes.emplace_back(k, ph(rng));
  return make_grid_function_s(g, [&](double s) {
    cplx acc = 0.0;
    for (auto& [k, phase] : modes)
      acc += std::exp(cplx(0.0, k * k0 * s + phase));
    return acc / double(2 * kmax + 1);
  });
}

double max_entry_gap(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

std::string temp_path(const char* stem) {
  return (std::filesystem::temp_directory_path() / stem).string();
}

}  // namespace

TEST_CASE("constant symbols quantize to the identity kernel") {
  for (auto g : {circle(64), bint(64)}) {
    auto p = assemble_kernel(g, symbol_from_name(*g, "one"), make_cutoff(*g));
    const double h = g->spacing();
    Eigen::MatrixXcd want =
        Eigen::MatrixXcd::Identity(g->size(), g->size()) / h;
    CHECK(max_entry_gap(p.kernel(), want) < 1e-12);
    auto u = trig_field(g, 10, 7);
    auto pu = p.apply(u);
    CHECK((pu.values - u.values).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(!p.provenance().quadrature_path);
  }
}

TEST_CASE("identity_operator applies as the identity") {
  auto g = bint(64);
  auto id = identity_operator(g);
  auto u = trig_field(g, 8, 3);
  CHECK((id.apply(u).values - u.values).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(id.order() == 0.0);
}

TEST_CASE("smoothing quadrature matches the closed-form Gaussian kernel") {
  // Continuum: (2 pi)^{-1} Int e^{i tau eta} e^{-eta^2} deta
  //          = (2 sqrt(pi))^{-1} exp(-tau^2 / 4); the taper never touches the
  // integrand and the trapezoid aliasing images are below 1e-300 here.
  for (auto g : {circle(128), bint(128)}) {
    auto chi = make_cutoff(*g);
    auto p = assemble_kernel(g, symbol_from_name(*g, "gauss"), chi);
    CHECK(p.provenance().quadrature_path);
    const auto& ss = g->nodes_s();
    double gap = 0.0;
    for (int i = 0; i < g->size(); ++i) {
      for (int j = 0; j < g->size(); ++j) {
        double tau = ss[i] - ss[j];
        if (g->periodic()) {
          while (tau > kPi) tau -= 2.0 * kPi;
          while (tau < -kPi) tau += 2.0 * kPi;
        }
        const double want = chi.profile_value(std::abs(tau) / chi.radius) *
                            std::exp(-tau * tau / 4.0) /
                            (2.0 * std::sqrt(kPi));
        gap = std::max(gap, std::abs(p.kernel()(i, j) - cplx(want)));
      }
    }
    CHECK(gap < 1e-11);
  }
}

TEST_CASE("spectral derivative matrices act diagonally on modes") {
  auto g = circle(32);
  auto d1 = spectral_derivative_matrix(*g, 1);
  auto d2 = spectral_derivative_matrix(*g, 2);
  Eigen::VectorXcd u(32), nyq(32);
  for (int i = 0; i < 32; ++i) {
    u[i] = std::exp(cplx(0.0, 3.0 * g->nodes_s()[i]));
    nyq[i] = (i % 2 == 0) ? 1.0 : -1.0;  // cos(16 theta) on the grid
  }
  CHECK((d1 * u - 3.0 * u).cwiseAbs().maxCoeff() < 1e-11);
  CHECK((d2 * u - 9.0 * u).cwiseAbs().maxCoeff() < 1e-10);
  // Odd derivatives annihilate the unsigned Nyquist mode; even ones keep it.
  CHECK((d1 * nyq).cwiseAbs().maxCoeff() < 1e-11);
  CHECK((d2 * nyq - 256.0 * nyq).cwiseAbs().maxCoeff() < 1e-9);

  auto b = bint(64, 8.0);
  const double k0 = kPi / 8.0;
  auto v = make_grid_function_s(
      b, [&](double s) { return std::exp(cplx(0.0, 5.0 * k0 * s)); });
  auto dv = spectral_derivative_matrix(*b, 1) * v.values;
  CHECK((dv - 5.0 * k0 * v.values).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("polynomial symbols assemble as differential operators") {
  auto g = circle(128);
  auto c0 = [](double x) { return cplx(0.1 + 0.05 * std::cos(x)); };
  auto c1 = [](double x) { return cplx(0.5 * std::cos(x)); };
  auto c2 = [](double x) { return cplx(1.0 + 0.3 * std::sin(x)); };
  auto a = Symbol::polynomial({c0, c1, c2}, "test_poly");
  auto p = assemble_kernel(g, a, make_cutoff(*g));
  CHECK(p.order() == 2.0);

  auto u = trig_field(g, 12, 11);
  auto du = anchor_apply(u);
  auto ddu = anchor_apply(du);
  Eigen::VectorXcd want(g->size());
  for (int i = 0; i < g->size(); ++i) {
    const double x = g->nodes_x()[i];
    want[i] = c0(x) * u.values[i] + c1(x) * cplx(0.0, -1.0) * du.values[i] -
              c2(x) * ddu.values[i];
  }
  CHECK((p.apply(u).values - want).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("symbol recovery: identity and the frame field") {
  auto g = circle(128);
  auto one = assemble_kernel(g, symbol_from_name(*g, "one"), make_cutoff(*g));
  auto rec = recover_symbol(one, 1.0, 1.0);
  CHECK(std::abs(rec.value - cplx(1.0)) < 1e-4);
  CHECK(rec.error < 1e-6);
  CHECK(rec.ladder.size() == 3);
  CHECK(rec.raw.size() == rec.ladder.size());

  auto g5 = circle(512);
  auto ax = assemble_kernel(g5, symbol_from_name(*g5, "frame_field"),
                            make_cutoff(*g5));
  for (double xi : {1.0, -1.0}) {
    auto r = recover_symbol(ax, 1.0, xi, {32.0, 64.0, 128.0});
    CHECK(std::abs(r.value - cplx(xi)) < 1e-3);
  }
}

TEST_CASE("symbol recovery: truncated bracket power") {
  auto g = circle(256);
  auto p = assemble_kernel(g, symbol_from_name(*g, "jbracket_pow:2"),
                           make_cutoff(*g));
  CHECK(p.provenance().quadrature_path);
  auto rec = recover_symbol(p, 1.0, 1.0);
  // Leading coefficient of <xi>^2 is xi^2 = 1.
  CHECK(std::abs(rec.value - cplx(1.0)) < 2e-2);
}

TEST_CASE("composition squares the frame derivative") {
  auto g = circle(128);
  auto p = assemble_kernel(g, symbol_from_name(*g, "frame_field"),
                           make_cutoff(*g));
  auto pp = compose(p, p);
  CHECK(pp.order() == 2.0);
  auto u = trig_field(g, 10, 5);
  auto want = anchor_apply(anchor_apply(u));
  CHECK((pp.apply(u).values + want.values).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("adjoint transposes the weighted pairing exactly") {
  auto g = circle(128);
  auto w = [](double x) { return cplx(1.0 + 0.5 * std::sin(x)); };
  auto p = assemble_kernel(
      g, Symbol::polynomial({[](double) { return cplx(0.0); }, w}, "wxi"),
      make_cutoff(*g));
  auto a = adjoint(p);
  auto u = trig_field(g, 9, 21), v = trig_field(g, 9, 22);
  auto pu = p.apply(u), av = a.apply(v);
  cplx lhs = 0.0, rhs = 0.0;
  for (int i = 0; i < g->size(); ++i) {
    lhs += g->weights()[i] * std::conj(pu.values[i]) * v.values[i];
    rhs += g->weights()[i] * std::conj(u.values[i]) * av.values[i];
  }
  CHECK(std::abs(lhs - rhs) < 1e-12);

  // P* - P is order 0 with symbol -i w'(s) for P = w(s) (-i d/ds). On
  // band-limited input the identity is exact; the plateau-bump probe of
  // recover_symbol only resolves it to taper-band accuracy.
  auto d = subtract(a, p);
  auto du = d.apply(u);
  double op_gap = 0.0;
  for (int i = 0; i < g->size(); ++i)
    op_gap = std::max(
        op_gap, std::abs(du.values[i] -
                         cplx(0.0, -0.5 * std::cos(g->nodes_s()[i])) *
                             u.values[i]));
  CHECK(op_gap < 1e-11);
  auto rec = recover_symbol(d, 1.0, 1.0, {}, 0.0);
  CHECK(std::abs(rec.value - cplx(0.0, -0.5 * std::cos(1.0))) < 2e-2);
}

TEST_CASE("operator linear algebra: add, subtract, scale, commutator") {
  auto g = circle(64);
  auto p = assemble_kernel(g, symbol_from_name(*g, "frame_field"),
                           make_cutoff(*g));
  auto q = assemble_kernel(
      g,
      Symbol::polynomial({[](double x) { return cplx(std::sin(x)); }}, "sin"),
      make_cutoff(*g));
  CHECK(max_entry_gap(add(p, q).kernel(), p.kernel() + q.kernel()) == 0.0);
  CHECK(max_entry_gap(subtract(p, q).kernel(), p.kernel() - q.kernel()) == 0.0);
  CHECK(max_entry_gap(scale(cplx(0.0, 2.0), p).kernel(), 2.0 * cplx(0.0, 1.0) * p.kernel()) <
        1e-15);
  // [P, sin] u = -i cos(theta) u on band-limited u.
  auto u = trig_field(g, 6, 9);
  auto cu = commutator(p, q).apply(u);
  double gap = 0.0;
  for (int i = 0; i < g->size(); ++i)
    gap = std::max(gap, std::abs(cu.values[i] -
                                 cplx(0.0, -std::cos(g->nodes_x()[i])) *
                                     u.values[i]));
  CHECK(gap < 1e-9);
  // The stored order is the a-priori sum; recovery reads the true drop.
  CHECK(commutator(p, q).order() == doctest::Approx(1.0));
}

TEST_CASE("conjugation by boundary defining function powers") {
  auto g = bint(128);
  auto p = assemble_kernel(g, symbol_from_name(*g, "frame_field"),
                           make_cutoff(*g));
  const double scale = p.kernel().cwiseAbs().maxCoeff();
  for (cplx s : {cplx(2.0, 0.0), cplx(0.0, 1.0)}) {
    for (int face : {0, 1}) {
      auto q = conjugate_by_power(conjugate_by_power(p, s, face), -s, face);
      CHECK(max_entry_gap(q.kernel(), p.kernel()) < 1e-10 * scale);
    }
  }
  CHECK_THROWS_AS(conjugate_by_power(p, cplx(1.0), 5), std::invalid_argument);
  auto c = circle(64);
  auto pc = assemble_kernel(c, symbol_from_name(*c, "one"), make_cutoff(*c));
  CHECK_THROWS_AS(conjugate_by_power(pc, cplx(1.0)), std::domain_error);
}

TEST_CASE("generator chain: one rotation factor equals an exact shift") {
  const int n = 64;
  auto g = circle(n);
  auto chi = make_cutoff(*g);
  auto gauss = symbol_from_name(*g, "gauss");
  const double c = 0.3;
  FlowField rot{[c](double) { return c; }, "rot"};

  auto chain = generator_chain(g, gauss, chi, {rot});
  auto base = assemble_kernel(g, gauss, chi);
  CHECK(chain.provenance().generators.size() == 1);

  auto u = trig_field(g, 10, 13);
  // Pullback by the rotation flow, applied in Fourier space.
  std::vector<cplx> buf(u.values.data(), u.values.data() + n);
  fft::forward(buf);
  for (int k = 0; k < n; ++k) {
    if (k == n / 2)
      buf[k] *= std::cos(0.5 * n * c);
    else
      buf[k] *= std::exp(cplx(0.0, fft::mode_number(k, n) * c));
  }
  fft::inverse(buf);
  GridFunction shifted{g, Eigen::Map<Eigen::VectorXcd>(buf.data(), n)};

  auto lhs = chain.apply(u);
  auto rhs = base.apply(shifted);
  CHECK((lhs.values - rhs.values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("generator chain: a field and its inverse cancel") {
  // The time-1 flows of X and -X are exact inverses; the discrete gap is
  // interpolation error and must shrink at high order under refinement.
  FlowField fwd{[](double x) { return 0.2 * (1.0 + 0.3 * std::cos(x)); }, "f"};
  FlowField bwd{[](double x) { return -0.2 * (1.0 + 0.3 * std::cos(x)); }, "b"};
  double gap128 = 0.0, gap256 = 0.0;
  for (int n : {128, 256}) {
    auto g = circle(n);
    auto chi = make_cutoff(*g);
    auto gauss = symbol_from_name(*g, "gauss");
    auto chain = generator_chain(g, gauss, chi, {fwd, bwd});
    auto base = assemble_kernel(g, gauss, chi);
    (n == 128 ? gap128 : gap256) =
        max_entry_gap(chain.kernel(), base.kernel());
  }
  CHECK(gap256 < 1e-5);
  CHECK(gap256 < gap128 / 8.0);
}

TEST_CASE("generator chain rejects non-smoothing base symbols") {
  auto g = circle(64);
  FlowField rot{[](double) { return 0.1; }, "rot"};
  CHECK_THROWS_AS(generator_chain(g, symbol_from_name(*g, "frame_field"),
                                  make_cutoff(*g), {rot}),
                  std::invalid_argument);
}

TEST_CASE("kernel snapshots round trip bit-exactly") {
  auto g = circle(32);
  auto p = assemble_kernel(g, symbol_from_name(*g, "jbracket_pow:2"),
                           make_cutoff(*g));

  const std::string bin = temp_path("liek_test_kernel.bin");
  write_kernel_binary(p, bin);
  auto q = read_kernel_binary(g, bin);
  CHECK((q.kernel() - p.kernel()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(q.order() == p.order());

  // %.17g CSV cells reparse to the identical doubles.
  const std::string csv = temp_path("liek_test_kernel.csv");
  write_kernel_csv(p, csv);
  std::ifstream f(csv);
  REQUIRE(f.good());
  std::string line;
  int row = 0;
  double gap = 0.0;
  while (std::getline(f, line)) {
    const char* ptr = line.c_str();
    for (int col = 0; col < 32; ++col) {
      char* end = nullptr;
      const double re = std::strtod(ptr, &end);
      REQUIRE(*end == ',');
      const double im = std::strtod(end + 1, &end);
      gap = std::max(gap, std::abs(p.kernel()(row, col) - cplx(re, im)));
      ptr = (*end == ',') ? end + 1 : end;
    }
    ++row;
  }
  CHECK(row == 32);
  CHECK(gap == 0.0);

  auto g64 = circle(64);
  CHECK_THROWS_AS(read_kernel_binary(g64, bin), std::invalid_argument);
  const std::string junk = temp_path("liek_test_junk.bin");
  std::ofstream(junk) << "not a kernel";
  CHECK_THROWS_AS(read_kernel_binary(g, junk), std::runtime_error);
  std::filesystem::remove(bin);
  std::filesystem::remove(csv);
  std::filesystem::remove(junk);
}

TEST_CASE("quadrature kernels vanish outside the cutoff support") {
  for (int n : {64, 128}) {
    auto g = circle(n);
    Cutoff chi{0.8, "smooth"};
    auto p = assemble_kernel(g, symbol_from_name(*g, "jbracket_pow:2"), chi);
    const auto& ss = g->nodes_s();
    double outside = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double tau = ss[i] - ss[j];
        while (tau > kPi) tau -= 2.0 * kPi;
        while (tau < -kPi) tau += 2.0 * kPi;
        if (std::abs(tau) > chi.radius)
          outside = std::max(outside, std::abs(p.kernel()(i, j)));
      }
    CHECK(outside == 0.0);
  }
}

TEST_CASE("kernels of growing symbols concentrate near the diagonal") {
  // Ratio of the far off-diagonal mass to the diagonal peak must fall as the
  // grid refines: the far field converges to a fixed small tail while the
  // near-diagonal singularity grows like eta_max^3.
  std::vector<double> ratio;
  for (int n : {64, 128, 256}) {
    auto g = circle(n);
    auto p = assemble_kernel(g, symbol_from_name(*g, "jbracket_pow:2"),
                             make_cutoff(*g));
    const auto& ss = g->nodes_s();
    double far = 0.0, peak = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double tau = ss[i] - ss[j];
        while (tau > kPi) tau -= 2.0 * kPi;
        while (tau < -kPi) tau += 2.0 * kPi;
        const double mag = std::abs(p.kernel()(i, j));
        peak = std::max(peak, mag);
        if (std::abs(tau) >= 0.6) far = std::max(far, mag);
      }
    ratio.push_back(far / peak);
    CHECK(ratio.back() < 2e-2);
  }
  CHECK(ratio[2] < ratio[0]);
}

TEST_CASE("quadrature taper: plateau below half Nyquist, smooth rolloff") {
  CHECK(quadrature_taper(0.0) == 1.0);
  CHECK(quadrature_taper(0.5) == 1.0);
  CHECK(quadrature_taper(0.75) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(quadrature_taper(1.0) == 0.0);
  CHECK(quadrature_taper(0.6) > quadrature_taper(0.9));
}

TEST_CASE("density correction toggles the frame Jacobian column factor") {
  auto g = bint(64);
  auto chi = make_cutoff(*g);
  AssembleOptions plain;
  plain.density_correction = false;
  auto with = assemble_kernel(g, symbol_from_name(*g, "gauss"), chi);
  auto without = assemble_kernel(g, symbol_from_name(*g, "gauss"), chi, plain);
  CHECK(!without.provenance().density_correction);
  double gap = 0.0;
  for (int j = 0; j < g->size(); ++j) {
    const double frame = g->frame(g->nodes_x()[j]);
    gap = std::max(gap, (without.kernel().col(j) - frame * with.kernel().col(j))
                            .cwiseAbs()
                            .maxCoeff());
  }
  CHECK(gap < 1e-13);
}
