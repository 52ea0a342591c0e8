#include "liek/expmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace liek {

namespace {
constexpr double kPi = std::numbers::pi;

double splice(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// Natural cubic spline through uniformly spaced samples; zero outside the
// node hull. Complex valued, shared tridiagonal factorization.
class Spline {
 public:
  Spline(const std::vector<double>& s, const Eigen::VectorXcd& y)
      : s0_(s.front()), h_(s[1] - s[0]), y_(y) {
    const int n = static_cast<int>(y.size());
    m_ = Eigen::VectorXcd::Zero(n);
    if (n < 3) return;
    // Thomas algorithm for M_{i-1} + 4 M_i + M_{i+1} = rhs_i, natural ends.
    std::vector<double> diag(n, 4.0);
    Eigen::VectorXcd rhs(n);
    for (int i = 1; i + 1 < n; ++i)
      rhs[i] = 6.0 * (y[i - 1] - 2.0 * y[i] + y[i + 1]) / (h_ * h_);
    for (int i = 2; i + 1 < n; ++i) {
      const double w = 1.0 / diag[i - 1];
      diag[i] -= w;
      rhs[i] -= w * rhs[i - 1];
    }
    for (int i = n - 2; i >= 1; --i) {
      m_[i] = (rhs[i] - (i + 2 < n ? m_[i + 1] : std::complex<double>(0.0))) /
              diag[i];
    }
    n_ = n;
  }

  std::complex<double> eval(double s) const {
    const double pos = (s - s0_) / h_;
    if (pos < 0.0 || pos > n_ - 1) return 0.0;
    int i = std::min(static_cast<int>(pos), n_ - 2);
    const double t = pos - i;
    const double a = 1.0 - t;
    return y_[i] * a + y_[i + 1] * t +
           (h_ * h_ / 6.0) *
               (m_[i] * (a * a * a - a) + m_[i + 1] * (t * t * t - t));
  }

 private:
  double s0_;
  double h_;
  int n_ = 0;
  Eigen::VectorXcd y_;
  Eigen::VectorXcd m_;
};

// Cardinal function of band-limited interpolation on the even-N periodic
// grid: (1/N) sin(N d / 2) cot(d / 2), continued by 1 at d = 0.
double circle_cardinal(double d, int n) {
  const double sd = std::sin(0.5 * d);
  if (std::abs(sd) < 1e-12) return 1.0;
  return std::sin(0.5 * n * d) * std::cos(0.5 * d) / (n * sd);
}

struct Dopri5Result {
  double y;
  int steps;
};

Dopri5Result dopri5(const std::function<double(double)>& f, double y0,
                    double t1, double tol) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695,
                          e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                          e6 = 187.0 / 2100, e7 = 1.0 / 40;

  const double dir = t1 >= 0.0 ? 1.0 : -1.0;
  const double tend = std::abs(t1);
  double t = 0.0;
  double y = y0;
  double h = std::min(0.1, tend);
  int steps = 0;
  double k1 = dir * f(y);
  while (t < tend) {
    if (++steps > 100000)
      throw std::runtime_error("flow integration failed to converge");
    h = std::min(h, tend - t);
    const double k2 = dir * f(y + h * a21 * k1);
    const double k3 = dir * f(y + h * (a31 * k1 + a32 * k2));
    const double k4 = dir * f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 =
        dir * f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 = dir * f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 +
                                       a64 * k4 + a65 * k5));
    const double y5 =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = dir * f(y5);
    const double y4 = y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 +
                               e6 * k6 + e7 * k7);
    const double err = std::abs(y5 - y4);
    const double sc = tol * (1.0 + std::abs(y));
    if (err <= sc) {
      t += h;
      y = y5;
      k1 = k7;  // first-same-as-last
    }
    const double factor =
        0.9 * std::pow(sc / std::max(err, 1e-300), 0.2);
    h *= std::clamp(factor, 0.2, 5.0);
  }
  return {y, steps};
}

}  // namespace

double Cutoff::profile_value(double u) const {
  u = std::abs(u);
  if (profile == "smooth") {
    if (u <= 0.5) return 1.0;
    if (u >= 1.0) return 0.0;
    const double up = splice(2.0 - 2.0 * u);
    const double dn = splice(2.0 * u - 1.0);
    return up / (up + dn);
  }
  if (profile == "sharp") {
    return u <= 0.75 ? 1.0 : 0.0;
  }
  throw std::invalid_argument("unknown cutoff profile: " + profile);
}

double Cutoff::operator()(const ModelGeometry& geom, double x,
                          double vhat) const {
  const double len = std::abs(vhat) * std::sqrt(geom.metric_coeff(x));
  return profile_value(len / radius);
}

Cutoff make_cutoff(const ModelGeometry& geom, double r,
                   const std::string& profile) {
  Cutoff chi;
  chi.profile = profile;
  chi.profile_value(0.0);  // validates the profile name
  if (r > 0.0) {
    chi.radius = r;
  } else {
    const InjRadius r0 = injectivity_radius(geom);
    chi.radius = r0.infinite ? 1.0 : std::min(0.5 * r0.value, 1.0);
  }
  const InjRadius r0 = injectivity_radius(geom);
  if (!r0.infinite && chi.radius >= r0.value)
    throw std::invalid_argument("cutoff radius exceeds injectivity radius");
  return chi;
}

InjRadius injectivity_radius(const ModelGeometry& geom) {
  if (geom.kind() == ModelKind::Circle) return {kPi, false};
  return {0.0, true};
}

double exp_point(const ModelGeometry& geom, double x, double vhat) {
  return geom.unstraighten(geom.straighten(x) + vhat);
}

double tau_hat(const ModelGeometry& geom, double x, double y) {
  double d = geom.straighten(x) - geom.straighten(y);
  if (geom.kind() == ModelKind::Circle) {
    d = std::remainder(d, 2.0 * kPi);
    if (std::abs(std::abs(d) - kPi) < 1e-14)
      throw std::domain_error("tau undefined at the injectivity radius");
  }
  return d;
}

double flow_point_s(const ModelGeometry& geom, const FlowField& field,
                    double s0, double time, double tol, int* steps) {
  auto rhs = [&](double s) { return field.coeff(geom.unstraighten(s)); };
  const Dopri5Result r = dopri5(rhs, s0, time, tol);
  if (steps) *steps = r.steps;
  return r.y;
}

namespace {

std::vector<double> flow_targets(const ModelGeometry& geom,
                                 const FlowField& field, double time,
                                 double tol, FlowStats* stats) {
  const auto& ss = geom.nodes_s();
  std::vector<double> targets(ss.size());
  FlowStats local;
  for (size_t i = 0; i < ss.size(); ++i) {
    int steps = 0;
    targets[i] = flow_point_s(geom, field, ss[i], time, tol, &steps);
    local.max_steps = std::max(local.max_steps, steps);
    if (!geom.periodic() && std::abs(targets[i]) > geom.window())
      ++local.escaped;
  }
  if (stats) *stats = local;
  return targets;
}

}  // namespace

GridFunction flow_apply(const GridFunction& u, const FlowField& field,
                        double time, double tol, FlowStats* stats) {
  const auto& g = *u.geom;
  const std::vector<double> targets = flow_targets(g, field, time, tol, stats);
  GridFunction out{u.geom, Eigen::VectorXcd::Zero(g.size())};
  if (g.periodic()) {
    const auto& ss = g.nodes_s();
    for (int i = 0; i < g.size(); ++i) {
      std::complex<double> acc = 0.0;
      for (int j = 0; j < g.size(); ++j)
        acc += u.values[j] * circle_cardinal(targets[i] - ss[j], g.size());
      out.values[i] = acc;
    }
  } else {
    Spline sp(g.nodes_s(), u.values);
    for (int i = 0; i < g.size(); ++i) out.values[i] = sp.eval(targets[i]);
  }
  return out;
}

Eigen::MatrixXd interpolation_matrix(const ModelGeometry& geom,
                                     const std::vector<double>& s_targets) {
  const int n = geom.size();
  const int m = static_cast<int>(s_targets.size());
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(m, n);
  if (geom.periodic()) {
    const auto& ss = geom.nodes_s();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        mat(i, j) = circle_cardinal(s_targets[i] - ss[j], n);
  } else {
    // Cardinal splines, one tridiagonal solve per basis vector.
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    for (int j = 0; j < n; ++j) {
      e[j] = 1.0;
      Spline sp(geom.nodes_s(), e);
      for (int i = 0; i < m; ++i) mat(i, j) = sp.eval(s_targets[i]).real();
      e[j] = 0.0;
    }
  }
  return mat;
}

Eigen::MatrixXd flow_matrix(const ModelGeometry& geom, const FlowField& field,
                            double time, double tol, FlowStats* stats) {
  const std::vector<double> targets =
      flow_targets(geom, field, time, tol, stats);
  return interpolation_matrix(geom, targets);
}

}  // namespace liek
