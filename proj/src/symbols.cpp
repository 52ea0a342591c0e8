#include "liek/symbols.hpp"

#include "liek/detail/neville.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace liek {

namespace {

constexpr double kEps = 2.22e-16;

double jbracket_euclid(double xi) { return std::sqrt(1.0 + xi * xi); }

using detail::neville_at_zero;

}  // namespace

std::string to_string(SymbolClass klass) {
  switch (klass) {
    case SymbolClass::Type10: return "type10";
    case SymbolClass::Classical: return "classical";
    case SymbolClass::Polynomial: return "polynomial";
    case SymbolClass::Smoothing: return "smoothing";
  }
  throw std::logic_error("unknown SymbolClass");
}

std::complex<double> Symbol::dxi(double x, double xi, int k) const {
  if (k < 1 || k > 4) throw std::invalid_argument("dxi supports k in 1..4");
  if (dxi_) return dxi_(x, xi, k);
  // First derivative uses the fixed relative step 1e-5 <xi>; higher orders
  // rebalance truncation against the k-fold roundoff amplification.
  const double h = jbracket_euclid(xi) *
                   (k == 1 ? 1e-5 : std::pow(kEps, 1.0 / (k + 2)));
  auto f = [&](double z) { return eval_(x, z); };
  switch (k) {
    case 1:
      return (f(xi + h) - f(xi - h)) / (2.0 * h);
    case 2:
      return (f(xi + h) - 2.0 * f(xi) + f(xi - h)) / (h * h);
    case 3:
      return (f(xi + 2 * h) - 2.0 * f(xi + h) + 2.0 * f(xi - h) -
              f(xi - 2 * h)) /
             (2.0 * h * h * h);
    default:
      return (f(xi + 2 * h) - 4.0 * f(xi + h) + 6.0 * f(xi) -
              4.0 * f(xi - h) + f(xi - 2 * h)) /
             (h * h * h * h);
  }
}

std::complex<double> Symbol::dstraight(const ModelGeometry& geom, double x,
                                       double xi) const {
  if (dstraight_) return dstraight_(x, xi);
  const double s = geom.straighten(x);
  const double h = std::cbrt(kEps) * (1.0 + std::abs(s));
  return (eval_(geom.unstraighten(s + h), xi) -
          eval_(geom.unstraighten(s - h), xi)) /
         (2.0 * h);
}

int Symbol::degree() const {
  if (!is_polynomial())
    throw std::logic_error("degree only defined for polynomial symbols");
  return static_cast<int>(coeffs_.size()) - 1;
}

const std::vector<CoeffFn>& Symbol::coeffs() const {
  if (!is_polynomial())
    throw std::logic_error("coeffs only defined for polynomial symbols");
  return coeffs_;
}

std::complex<double> Symbol::principal(double x, double xi) const {
  if (!principal_)
    throw std::logic_error("symbol has no principal part closure");
  return principal_(x, xi);
}

Symbol Symbol::polynomial(std::vector<CoeffFn> coeffs, std::string name,
                          std::vector<CoeffFn> coeff_ds) {
  if (coeffs.empty())
    throw std::invalid_argument("polynomial symbol needs coefficients");
  Symbol a;
  a.class_ = SymbolClass::Polynomial;
  a.order_ = static_cast<double>(coeffs.size() - 1);
  a.coeffs_ = std::move(coeffs);
  a.coeff_ds_ = std::move(coeff_ds);
  a.name_ = name.empty() ? "poly" : std::move(name);
  const auto cs = a.coeffs_;
  a.eval_ = [cs](double x, double xi) {
    std::complex<double> acc = 0.0;
    for (int k = static_cast<int>(cs.size()) - 1; k >= 0; --k)
      acc = acc * xi + cs[k](x);
    return acc;
  };
  a.dxi_ = [cs](double x, double xi, int k) -> std::complex<double> {
    std::complex<double> acc = 0.0;
    for (int j = static_cast<int>(cs.size()) - 1; j >= k; --j) {
      double fall = 1.0;
      for (int r = 0; r < k; ++r) fall *= j - r;
      acc += fall * cs[j](x) * std::pow(xi, j - k);
    }
    return acc;
  };
  const int deg = static_cast<int>(a.coeffs_.size()) - 1;
  const auto lead = a.coeffs_.back();
  a.principal_ = [lead, deg](double x, double xi) {
    return lead(x) * std::pow(xi, deg);
  };
  if (!a.coeff_ds_.empty()) {
    if (a.coeff_ds_.size() != a.coeffs_.size())
      throw std::invalid_argument("coefficient derivative list size mismatch");
    const auto ds = a.coeff_ds_;
    a.dstraight_ = [ds](double x, double xi) {
      std::complex<double> acc = 0.0;
      for (int k = static_cast<int>(ds.size()) - 1; k >= 0; --k)
        acc = acc * xi + ds[k](x);
      return acc;
    };
  }
  return a;
}

Symbol Symbol::constants(std::vector<std::complex<double>> coeffs,
                         std::string name) {
  std::vector<CoeffFn> cfs;
  std::vector<CoeffFn> dcfs;
  for (auto c : coeffs) {
    cfs.push_back([c](double) { return c; });
    dcfs.push_back([](double) { return std::complex<double>(0.0); });
  }
  return polynomial(std::move(cfs), std::move(name), std::move(dcfs));
}

Symbol Symbol::type10(double order, SymbolEval eval, std::string name) {
  Symbol a;
  a.class_ = SymbolClass::Type10;
  a.order_ = order;
  a.eval_ = std::move(eval);
  if (!name.empty()) a.name_ = std::move(name);
  return a;
}

Symbol Symbol::classical(double order, SymbolEval eval, SymbolEval principal,
                         std::string name) {
  Symbol a = type10(order, std::move(eval), std::move(name));
  a.class_ = SymbolClass::Classical;
  a.principal_ = std::move(principal);
  return a;
}

Symbol Symbol::smoothing(SymbolEval eval, std::string name) {
  Symbol a = type10(-std::numeric_limits<double>::infinity(), std::move(eval),
                    std::move(name));
  a.class_ = SymbolClass::Smoothing;
  return a;
}

Symbol& Symbol::with_dxi(
    std::function<std::complex<double>(double, double, int)> dxi) {
  dxi_ = std::move(dxi);
  return *this;
}

Symbol& Symbol::with_dstraight(SymbolEval ds) {
  dstraight_ = std::move(ds);
  return *this;
}

double jbracket(const ModelGeometry& geom, double x, double xi) {
  return std::sqrt(1.0 + xi * xi / geom.metric_coeff(x));
}

namespace {

Symbol make_jbracket_pow(double m) {
  auto eval = [m](double, double xi) -> std::complex<double> {
    return std::pow(1.0 + xi * xi, 0.5 * m);
  };
  auto principal = [m](double, double xi) -> std::complex<double> {
    return std::pow(std::abs(xi), m);
  };
  Symbol a = Symbol::classical(m, eval, principal,
                               "jbracket_pow:" + std::to_string(m));
  a.with_dxi([m](double, double xi, int k) -> std::complex<double> {
    const double w = 1.0 + xi * xi;
    auto wp = [&](double p) { return std::pow(w, 0.5 * m + p); };
    const double m2 = m - 2, m4 = m - 4, m6 = m - 6;
    switch (k) {
      case 1:
        return m * xi * wp(-1);
      case 2:
        return m * wp(-1) + m * m2 * xi * xi * wp(-2);
      case 3:
        return 3 * m * m2 * xi * wp(-2) + m * m2 * m4 * xi * xi * xi * wp(-3);
      default:
        return 3 * m * m2 * wp(-2) + 6 * m * m2 * m4 * xi * xi * wp(-3) +
               m * m2 * m4 * m6 * xi * xi * xi * xi * wp(-4);
    }
  });
  a.with_dstraight([](double, double) { return std::complex<double>(0.0); });
  return a;
}

Symbol make_gauss() {
  auto eval = [](double, double xi) -> std::complex<double> {
    return std::exp(-xi * xi);
  };
  Symbol a = Symbol::smoothing(eval, "gauss");
  // Hermite form: d^k/dxi^k exp(-xi^2) = (-1)^k H_k(xi) exp(-xi^2).
  a.with_dxi([](double, double xi, int k) -> std::complex<double> {
    const double e = std::exp(-xi * xi);
    switch (k) {
      case 1: return -2.0 * xi * e;
      case 2: return (4.0 * xi * xi - 2.0) * e;
      case 3: return -(8.0 * xi * xi * xi - 12.0 * xi) * e;
      default:
        return (16.0 * xi * xi * xi * xi - 48.0 * xi * xi + 12.0) * e;
    }
  });
  a.with_dstraight([](double, double) { return std::complex<double>(0.0); });
  return a;
}

std::vector<std::complex<double>> parse_real_list(const std::string& body) {
  if (body.size() < 2 || body.front() != '[' || body.back() != ']')
    throw std::invalid_argument("expected [c0,c1,...] coefficient list");
  std::vector<std::complex<double>> out;
  std::string inner = body.substr(1, body.size() - 2);
  size_t pos = 0;
  while (pos < inner.size()) {
    size_t next = inner.find(',', pos);
    if (next == std::string::npos) next = inner.size();
    const std::string tok = inner.substr(pos, next - pos);
    size_t used = 0;
    const double v = std::stod(tok, &used);
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used])))
      ++used;
    if (used != tok.size())
      throw std::invalid_argument("bad coefficient: " + tok);
    out.emplace_back(v, 0.0);
    pos = next + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty coefficient list");
  return out;
}

}  // namespace

Symbol symbol_from_name(const ModelGeometry&, const std::string& name) {
  if (name == "one") return Symbol::constants({1.0}, "one");
  if (name == "xi") return Symbol::constants({0.0, 1.0}, "xi");
  if (name == "frame_field") return Symbol::constants({0.0, 1.0}, "frame_field");
  if (name == "gauss") return make_gauss();
  if (name.rfind("jbracket_pow:", 0) == 0) {
    const std::string arg = name.substr(std::string("jbracket_pow:").size());
    size_t used = 0;
    const double m = std::stod(arg, &used);
    if (used != arg.size())
      throw std::invalid_argument("bad jbracket_pow exponent: " + arg);
    return make_jbracket_pow(m);
  }
  if (name.rfind("poly:", 0) == 0) {
    return Symbol::constants(parse_real_list(name.substr(5)), name);
  }
  throw std::invalid_argument("unknown symbol name: " + name);
}

OrderEstimate estimate_order(const ModelGeometry& geom, const Symbol& a,
                             double xi_min, double xi_max) {
  std::vector<double> xs;
  const int n = geom.size();
  for (int j = 0; j < 5; ++j) xs.push_back(geom.nodes_x()[(2 * j + 1) * n / 10]);

  OrderEstimate best;
  best.slope = -std::numeric_limits<double>::infinity();
  for (double sign : {1.0, -1.0}) {
    for (double x : xs) {
      std::vector<double> lx, ly;
      for (double xi = xi_min; xi <= xi_max * 1.0001; xi *= 2.0) {
        const double mag =
            std::max(std::abs(a.eval(x, sign * xi)), 1e-300);
        lx.push_back(std::log(jbracket(geom, x, xi)));
        ly.push_back(std::log(mag));
      }
      const int m = static_cast<int>(lx.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (int i = 0; i < m; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
      }
      const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      const double icept = (sy - slope * sx) / m;
      double res = 0.0;
      for (int i = 0; i < m; ++i)
        res = std::max(res, std::abs(ly[i] - slope * lx[i] - icept));
      if (slope > best.slope) best.slope = slope;
      best.max_residual = std::max(best.max_residual, res);
    }
  }
  return best;
}

Symbol principal_symbol(const ModelGeometry& geom, const Symbol& a) {
  if (a.has_principal()) {
    Symbol p = Symbol::classical(
        a.order(), [a](double x, double xi) { return a.principal(x, xi); },
        [a](double x, double xi) { return a.principal(x, xi); },
        a.name() + ":principal");
    return p;
  }
  (void)geom;
  const double m = a.order();
  if (!std::isfinite(m))
    throw std::invalid_argument("principal part of a smoothing symbol");
  auto lift = [a, m](double x, double xi) {
    const std::vector<double> ts = {1.0 / 64, 1.0 / 128, 1.0 / 256};
    std::vector<std::complex<double>> vs;
    for (double t : ts)
      vs.push_back(a.eval(x, xi / t) * std::pow(t, m));
    double tail = 0.0;
    const std::complex<double> lim = neville_at_zero(ts, vs, &tail);
    if (tail > 1e-2 * std::max(std::abs(lim), 1e-12))
      throw std::runtime_error("principal limit not convergent");
    return lim;
  };
  return Symbol::classical(m, lift, lift, a.name() + ":principal");
}

Symbol poisson_bracket(const ModelGeometry& geom, const Symbol& a,
                       const Symbol& b) {
  const ModelGeometry g = geom;  // own a copy; the closure may outlive geom
  auto eval = [g, a, b](double x, double xi) {
    return a.dxi(x, xi, 1) * b.dstraight(g, x, xi) -
           a.dstraight(g, x, xi) * b.dxi(x, xi, 1);
  };
  double order = a.order() + b.order() - 1.0;
  Symbol out = Symbol::type10(order, eval, "{" + a.name() + "," + b.name() + "}");
  return out;
}

}  // namespace liek
