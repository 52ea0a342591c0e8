#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "liek/geometry.hpp"
#include "liek/symbols.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

using namespace liek;
using cplx = std::complex<double>;

namespace {
GeometryPtr circle(int n = 64) { return make_model(ModelKind::Circle, {n, 10.0, 1.0}); }
GeometryPtr bint(int n = 64) { return make_model(ModelKind::BInterval, {n, 10.0, 1.0}); }
}  // namespace

TEST_CASE("polynomial symbols evaluate by Horner and expose structure") {
  auto a = Symbol::polynomial(
      {[](double x) { return cplx(x); }, [](double) { return cplx(0.0); },
       [](double) { return cplx(2.0); }},
      "x+2xi^2");
  CHECK(a.is_polynomial());
  CHECK(a.degree() == 2);
  CHECK(a.order() == 2.0);
  CHECK(a.eval(0.3, 1.5).real() == doctest::Approx(0.3 + 2.0 * 2.25));
  CHECK(a.coeffs().size() == 3);

  auto c = Symbol::constants({cplx(1.0), cplx(0.0), cplx(-3.0)});
  CHECK(c.eval(7.0, 2.0).real() == doctest::Approx(1.0 - 12.0));
  CHECK_THROWS_AS(Symbol::polynomial({}), std::invalid_argument);

  auto t = Symbol::type10(1.0, [](double, double xi) { return cplx(xi); });
  CHECK(!t.is_polynomial());
  CHECK_THROWS_AS(t.degree(), std::logic_error);
  CHECK_THROWS_AS(t.coeffs(), std::logic_error);
  CHECK_THROWS_AS(t.principal(0.0, 1.0), std::logic_error);
}

TEST_CASE("xi derivatives: falling factorials exactly on polynomials") {
  auto a = Symbol::constants({cplx(0.0), cplx(0.0), cplx(0.0), cplx(1.0)});
  CHECK(a.dxi(0.0, 5.0, 1).real() == doctest::Approx(75.0).epsilon(1e-14));
  CHECK(a.dxi(0.0, 5.0, 2).real() == doctest::Approx(30.0).epsilon(1e-14));
  CHECK(a.dxi(0.0, 5.0, 3).real() == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(a.dxi(0.0, 5.0, 4).real() == doctest::Approx(0.0));
  CHECK_THROWS_AS(a.dxi(0.0, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(a.dxi(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("xi derivatives: finite difference fallback tracks analytics") {
  // No derivative closure given; the fallback must hit the analytic values.
  auto a = Symbol::type10(1.0, [](double, double xi) {
    return cplx(std::sqrt(1.0 + xi * xi));
  });
  const double xi = 2.0, br = std::sqrt(5.0);
  CHECK(std::abs(a.dxi(0.0, xi, 1) - cplx(xi / br)) < 1e-8);
  CHECK(std::abs(a.dxi(0.0, xi, 2) - cplx(1.0 / (br * br * br))) < 1e-6);
}

TEST_CASE("straightened base derivative") {
  auto g = circle();
  auto a = Symbol::type10(1.0, [](double x, double xi) {
    return cplx(std::sin(x) * xi);
  });
  // On the circle the chart is already straightened.
  CHECK(std::abs(a.dstraight(*g, 1.0, 2.0) - cplx(2.0 * std::cos(1.0))) < 1e-8);

  // Analytic closure is used verbatim when installed.
  auto b = Symbol::type10(0.0, [](double, double) { return cplx(1.0); });
  b.with_dstraight([](double, double) { return cplx(42.0); });
  CHECK(b.dstraight(*g, 0.0, 0.0).real() == 42.0);
}

TEST_CASE("japanese bracket against the identity fiber metric") {
  auto g = bint();
  CHECK(jbracket(*g, 0.5, 0.0) == doctest::Approx(1.0));
  CHECK(jbracket(*g, 0.5, 3.0) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));
}

TEST_CASE("built-in symbol registry") {
  auto g = circle();
  auto one = symbol_from_name(*g, "one");
  CHECK(one.order() == 0.0);
  CHECK(one.eval(0.2, 17.0).real() == doctest::Approx(1.0));

  auto xi = symbol_from_name(*g, "xi");
  CHECK(xi.is_polynomial());
  CHECK(xi.degree() == 1);
  CHECK(xi.eval(0.0, -2.5).real() == doctest::Approx(-2.5));

  auto ff = symbol_from_name(*g, "frame_field");
  CHECK(ff.is_polynomial());
  CHECK(ff.eval(1.0, 4.0).real() == doctest::Approx(4.0));

  auto gauss = symbol_from_name(*g, "gauss");
  CHECK(gauss.klass() == SymbolClass::Smoothing);
  CHECK(gauss.eval(0.0, 2.0).real() == doctest::Approx(std::exp(-4.0)));

  auto jb2 = symbol_from_name(*g, "jbracket_pow:2");
  CHECK(jb2.order() == 2.0);
  CHECK(jb2.eval(0.0, 3.0).real() == doctest::Approx(10.0).epsilon(1e-14));
  auto jbm2 = symbol_from_name(*g, "jbracket_pow:-2");
  CHECK(jbm2.order() == -2.0);
  CHECK(jbm2.eval(0.0, 3.0).real() == doctest::Approx(0.1).epsilon(1e-14));

  auto poly = symbol_from_name(*g, "poly:[1,0,2]");
  CHECK(poly.is_polynomial());
  CHECK(poly.degree() == 2);
  CHECK(poly.eval(0.0, 3.0).real() == doctest::Approx(19.0));

  CHECK_THROWS_AS(symbol_from_name(*g, "laplace"), std::invalid_argument);
  CHECK_THROWS_AS(symbol_from_name(*g, "poly:[1,0"), std::invalid_argument);
  CHECK_THROWS_AS(symbol_from_name(*g, "poly:[]"), std::invalid_argument);
  CHECK_THROWS_AS(symbol_from_name(*g, "jbracket_pow:abc"),
                  std::invalid_argument);
}

TEST_CASE("gauss carries exact Hermite derivative closures") {
  auto g = circle();
  auto gauss = symbol_from_name(*g, "gauss");
  const double xi = 0.7, e = std::exp(-xi * xi);
  CHECK(std::abs(gauss.dxi(0.0, xi, 1) - cplx(-2.0 * xi * e)) < 1e-13);
  CHECK(std::abs(gauss.dxi(0.0, xi, 2) - cplx((4.0 * xi * xi - 2.0) * e)) <
        1e-13);
  CHECK(std::abs(gauss.dxi(0.0, xi, 3) -
                 cplx(-(8.0 * xi * xi * xi - 12.0 * xi) * e)) < 1e-13);
  CHECK(std::abs(gauss.dxi(0.0, xi, 4) -
                 cplx((16.0 * std::pow(xi, 4) - 48.0 * xi * xi + 12.0) * e)) <
        1e-12);
}

TEST_CASE("order estimation recovers growth exponents") {
  auto g = bint(64);
  auto jb2 = symbol_from_name(*g, "jbracket_pow:2");
  auto est2 = estimate_order(*g, jb2);
  CHECK(est2.slope == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(est2.max_residual < 1e-9);

  auto ff = symbol_from_name(*g, "frame_field");
  auto est1 = estimate_order(*g, ff);
  CHECK(est1.slope == doctest::Approx(1.0).epsilon(0.01));

  // Rapid decay shows up as a large negative slope.
  auto gauss = symbol_from_name(*g, "gauss");
  CHECK(estimate_order(*g, gauss).slope < -20.0);
}

TEST_CASE("principal part: closure fast path and scaling limit") {
  auto g = circle();
  auto jb2 = symbol_from_name(*g, "jbracket_pow:2");
  auto p2 = principal_symbol(*g, jb2);
  CHECK(p2.eval(0.3, 2.0).real() == doctest::Approx(4.0).epsilon(1e-14));

  // Without a closure the limit is extracted by scaling + extrapolation.
  auto a = Symbol::type10(1.0, [](double x, double xi) {
    return cplx((1.0 + 0.3 * std::sin(x)) * std::sqrt(1.0 + xi * xi));
  });
  auto pa = principal_symbol(*g, a);
  const double want = (1.0 + 0.3 * std::sin(1.0)) * 1.0;
  CHECK(std::abs(pa.eval(1.0, 1.0) - cplx(want)) < 1e-7);
  CHECK(std::abs(pa.eval(1.0, -2.0) - cplx(2.0 * want / 1.0)) < 1e-7);

  // A bounded oscillation has no homogeneous leading part.
  auto osc = Symbol::type10(0.0, [](double, double xi) {
    return cplx(std::sin(xi));
  });
  auto posc = principal_symbol(*g, osc);
  CHECK_THROWS_AS(posc.eval(1.0, 1.3), std::runtime_error);

  auto sm = symbol_from_name(*g, "gauss");
  CHECK_THROWS_AS(principal_symbol(*g, sm), std::invalid_argument);
}

TEST_CASE("poisson bracket: closed form with and without closures") {
  auto g = bint(64);
  auto a = Symbol::constants({cplx(0.0), cplx(0.0), cplx(1.0)}, "xi^2");

  auto w = [g](double x) {
    const double s = g->straighten(x);
    return cplx(std::exp(-s * s / 8.0));
  };
  auto w_ds = [g](double x) {
    const double s = g->straighten(x);
    return cplx(-(s / 4.0) * std::exp(-s * s / 8.0));
  };

  const double x0 = g->unstraighten(0.8), xi0 = 1.5;
  const double want = 2.0 * xi0 * (-(0.8 / 4.0) * std::exp(-0.8 * 0.8 / 8.0));

  auto b_exact = Symbol::polynomial({w}, "w", {w_ds});
  auto pb = poisson_bracket(*g, a, b_exact);
  CHECK(pb.order() == doctest::Approx(1.0));
  CHECK(std::abs(pb.eval(x0, xi0) - cplx(want)) < 1e-12);

  auto b_fd = Symbol::polynomial({w}, "w");
  auto pb_fd = poisson_bracket(*g, a, b_fd);
  CHECK(std::abs(pb_fd.eval(x0, xi0) - cplx(want)) < 1e-6);
}
