#include "liek/geometry.hpp"

#include "liek/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace liek {

namespace {
constexpr double kPi = std::numbers::pi;

double sigmoid(double s) {
  // Evaluated towards the saturating tail to stay monotone in double
  // precision at large |s|.
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}
}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Circle: return "circle";
    case ModelKind::BInterval: return "binterval";
    case ModelKind::ScLine: return "scline";
  }
  throw std::logic_error("unknown ModelKind");
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "circle") return ModelKind::Circle;
  if (name == "binterval") return ModelKind::BInterval;
  if (name == "scline") return ModelKind::ScLine;
  throw std::invalid_argument("unknown geometry kind: " + name);
}

ModelGeometry::ModelGeometry(ModelKind kind, const ModelParams& params)
    : kind_(kind), n_(params.n), c_(params.scattering_c) {
  if (n_ < 8) throw std::invalid_argument("grid size must be at least 8");
  if (n_ % 2 != 0) throw std::invalid_argument("grid size must be even");
  if (kind_ == ModelKind::ScLine && c_ <= 0.0)
    throw std::invalid_argument("scattering constant must be positive");

  if (kind_ == ModelKind::Circle) {
    window_ = kPi;
    h_ = 2.0 * kPi / n_;
    nodes_s_.resize(n_);
    for (int i = 0; i < n_; ++i) nodes_s_[i] = i * h_;
  } else {
    if (params.window <= 0.0)
      throw std::invalid_argument("window must be positive");
    window_ = params.window;
    h_ = 2.0 * window_ / n_;
    // Cell centered nodes keep both faces strictly outside the grid and give
    // total weight exactly 2L.
    nodes_s_.resize(n_);
    for (int i = 0; i < n_; ++i) nodes_s_[i] = -window_ + (i + 0.5) * h_;
  }

  nodes_x_.resize(n_);
  for (int i = 0; i < n_; ++i) nodes_x_[i] = unstraighten(nodes_s_[i]);
  weights_.assign(n_, h_);

  switch (kind_) {
    case ModelKind::Circle:
      break;
    case ModelKind::BInterval:
      bdf_.push_back([](double x) { return x; });
      bdf_.push_back([](double x) { return 1.0 - x; });
      break;
    case ModelKind::ScLine:
      // Face 0 is always the s -> -inf end, matching BInterval.
      bdf_.push_back([](double x) { return 1.0 + x; });
      bdf_.push_back([](double x) { return 1.0 - x; });
      break;
  }
}

double ModelGeometry::frame(double x) const {
  switch (kind_) {
    case ModelKind::Circle: return 1.0;
    case ModelKind::BInterval: return x * (1.0 - x);
    case ModelKind::ScLine: return c_ * (1.0 - x * x);
  }
  throw std::logic_error("unknown ModelKind");
}

double ModelGeometry::straighten(double x) const {
  switch (kind_) {
    case ModelKind::Circle:
      return x;
    case ModelKind::BInterval:
      if (x <= 0.0 || x >= 1.0)
        throw std::domain_error("point not in the interior (0,1)");
      return std::log(x / (1.0 - x));
    case ModelKind::ScLine:
      if (x <= -1.0 || x >= 1.0)
        throw std::domain_error("point not in the interior (-1,1)");
      return std::atanh(x) / c_;
  }
  throw std::logic_error("unknown ModelKind");
}

double ModelGeometry::unstraighten(double s) const {
  switch (kind_) {
    case ModelKind::Circle: {
      double t = std::fmod(s, 2.0 * kPi);
      return t < 0.0 ? t + 2.0 * kPi : t;
    }
    case ModelKind::BInterval:
      return sigmoid(s);
    case ModelKind::ScLine:
      return std::tanh(c_ * s);
  }
  throw std::logic_error("unknown ModelKind");
}

double ModelGeometry::geodesic_distance(double x, double y) const {
  double d = straighten(x) - straighten(y);
  if (kind_ == ModelKind::Circle) {
    d = std::remainder(d, 2.0 * kPi);
  }
  return std::abs(d);
}

bool ModelGeometry::contains(double x) const {
  switch (kind_) {
    case ModelKind::Circle: return std::isfinite(x);
    case ModelKind::BInterval: return x > 0.0 && x < 1.0;
    case ModelKind::ScLine: return x > -1.0 && x < 1.0;
  }
  return false;
}

GeometryPtr make_model(ModelKind kind, const ModelParams& params) {
  return std::make_shared<const ModelGeometry>(kind, params);
}

GridFunction make_grid_function(
    GeometryPtr geom,
    const std::function<std::complex<double>(double)>& f) {
  GridFunction u{std::move(geom), {}};
  const auto& xs = u.geom->nodes_x();
  u.values.resize(u.geom->size());
  for (int i = 0; i < u.geom->size(); ++i) u.values[i] = f(xs[i]);
  return u;
}

GridFunction make_grid_function_s(
    GeometryPtr geom,
    const std::function<std::complex<double>(double)>& f) {
  GridFunction u{std::move(geom), {}};
  const auto& ss = u.geom->nodes_s();
  u.values.resize(u.geom->size());
  for (int i = 0; i < u.geom->size(); ++i) u.values[i] = f(ss[i]);
  return u;
}

std::vector<double> riemannian_volume_weights(const ModelGeometry& geom) {
  // Uniform in s because the frame metric is |ds|^2: dvol = ds.
  return std::vector<double>(geom.size(), geom.spacing());
}

GridFunction anchor_apply(const GridFunction& u) {
  const auto& g = *u.geom;
  const int n = g.size();
  std::vector<std::complex<double>> buf(u.values.data(), u.values.data() + n);
  fft::forward(buf);
  const double k0 = kPi / g.window();  // physical wavenumber of mode 1
  for (int k = 0; k < n; ++k) {
    if (2 * k == n) {
      buf[k] = 0.0;
      continue;
    }
    buf[k] *= std::complex<double>(0.0, k0 * fft::mode_number(k, n));
  }
  fft::inverse(buf);
  GridFunction out{u.geom, Eigen::VectorXcd::Map(buf.data(), n)};
  return out;
}

double l2_norm(const GridFunction& u) {
  const auto& w = u.geom->weights();
  double acc = 0.0;
  for (int i = 0; i < u.size(); ++i) acc += w[i] * std::norm(u.values[i]);
  return std::sqrt(acc);
}

double linf_norm(const GridFunction& u) {
  return u.values.lpNorm<Eigen::Infinity>();
}

}  // namespace liek
