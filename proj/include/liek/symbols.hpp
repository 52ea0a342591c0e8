#pragma once

#include "liek/geometry.hpp"

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace liek {

// Symbol classes on the frame-dual coordinate xi:
//   Type10     : |d^k_xi a| <= C_k <xi>^{m-k}, the widest class handled.
//   Classical  : Type10 with a homogeneous principal part.
//   Polynomial : finite sum c_k(x) xi^k; quantizes to a differential operator.
//   Smoothing  : rapidly decaying in xi (order -infinity).
enum class SymbolClass { Type10, Classical, Polynomial, Smoothing };

std::string to_string(SymbolClass klass);

using SymbolEval = std::function<std::complex<double>(double x, double xi)>;
using CoeffFn = std::function<std::complex<double>(double x)>;

// A full symbol a(x, xi) in the interior chart, with optional analytic
// derivative closures. Missing derivatives fall back to central finite
// differences with documented steps (see dxi/dstraight).
class Symbol {
 public:
  Symbol() = default;

  double order() const { return order_; }
  SymbolClass klass() const { return class_; }
  const std::string& name() const { return name_; }

  std::complex<double> eval(double x, double xi) const { return eval_(x, xi); }

  // d^k/dxi^k for k in 1..4. Fallback: central differences of order 2 with
  // step <xi> * eps^(1/(k+2)), the balance point of truncation and roundoff.
  std::complex<double> dxi(double x, double xi, int k = 1) const;

  // Derivative in the straightened base coordinate s at fixed xi. Fallback
  // step matches dxi with k = 1.
  std::complex<double> dstraight(const ModelGeometry& geom, double x,
                                 double xi) const;

  bool is_polynomial() const { return class_ == SymbolClass::Polynomial; }
  int degree() const;
  const std::vector<CoeffFn>& coeffs() const;

  bool has_principal() const { return static_cast<bool>(principal_); }
  std::complex<double> principal(double x, double xi) const;

  // Factories. Polynomial coefficients are listed lowest degree first; the
  // optional coeff_ds closures are their s-derivatives.
  static Symbol polynomial(std::vector<CoeffFn> coeffs, std::string name = "",
                           std::vector<CoeffFn> coeff_ds = {});
  static Symbol constants(std::vector<std::complex<double>> coeffs,
                          std::string name = "");
  static Symbol type10(double order, SymbolEval eval, std::string name = "");
  static Symbol classical(double order, SymbolEval eval, SymbolEval principal,
                          std::string name = "");
  static Symbol smoothing(SymbolEval eval, std::string name = "");

  Symbol& with_dxi(
      std::function<std::complex<double>(double, double, int)> dxi);
  Symbol& with_dstraight(SymbolEval ds);

 private:
  double order_ = 0.0;
  SymbolClass class_ = SymbolClass::Type10;
  std::string name_ = "custom";
  SymbolEval eval_;
  std::function<std::complex<double>(double, double, int)> dxi_;
  SymbolEval dstraight_;
  SymbolEval principal_;
  std::vector<CoeffFn> coeffs_;
  std::vector<CoeffFn> coeff_ds_;

  friend Symbol poisson_bracket(const ModelGeometry&, const Symbol&,
                                const Symbol&);
};

// Japanese bracket <xi> = sqrt(1 + g(xi, xi)) of the frame-dual metric.
double jbracket(const ModelGeometry& geom, double x, double xi);

// Built-in registry. Names:
//   "one", "xi", "frame_field", "gauss",
//   "jbracket_pow:m"  for real m (symbol <xi>^m),
//   "poly:[c0,c1,...]" with real constant coefficients.
Symbol symbol_from_name(const ModelGeometry& geom, const std::string& name);

// Least squares fit of log|a(x, .)| against log <xi> over a dyadic ladder,
// maximized over base samples. Decaying symbols report large negative slopes.
struct OrderEstimate {
  double slope = 0.0;
  double max_residual = 0.0;  // worst per-sample deviation from the fit
};
OrderEstimate estimate_order(const ModelGeometry& geom, const Symbol& a,
                             double xi_min = 8.0, double xi_max = 1024.0);

// Leading part a_m(x, xi) = lim t^{-m} a(x, t xi) extracted by Richardson
// extrapolation over t in {64, 128, 256}; throws at evaluation when the
// tail estimate exceeds 1e-2 * |value| (limit not convergent).
Symbol principal_symbol(const ModelGeometry& geom, const Symbol& a);

// Canonical Poisson bracket in the straightened chart:
//   {a, b} = d_xi a * d_s b - d_s a * d_xi b.
Symbol poisson_bracket(const ModelGeometry& geom, const Symbol& a,
                       const Symbol& b);

}  // namespace liek
