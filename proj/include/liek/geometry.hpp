#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace liek {

// One dimensional model geometries carrying a degenerate frame field.
//
//   Circle    : compact, no boundary; frame d/dtheta.
//   BInterval : (0,1) with both endpoints as boundary faces; frame x(1-x) d/dx.
//   ScLine    : (-1,1) with both endpoints as boundary faces; frame
//               c(1-x^2) d/dx.
//
// Each model admits a global "straightened" coordinate s in which the frame
// becomes d/ds and the frame-induced metric is |ds|^2. All operators are
// discretized on a uniform grid in s: the full circle for Circle, the
// truncation window [-L, L] for the open models.
enum class ModelKind { Circle, BInterval, ScLine };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct ModelParams {
  int n = 128;               // grid size
  double window = 10.0;      // straightened half-width L (ignored for Circle)
  double scattering_c = 1.0; // frame constant for ScLine
};

class ModelGeometry;
using GeometryPtr = std::shared_ptr<const ModelGeometry>;

class ModelGeometry {
 public:
  ModelGeometry(ModelKind kind, const ModelParams& params);

  ModelKind kind() const { return kind_; }
  int dim() const { return 1; }
  int size() const { return n_; }
  bool periodic() const { return kind_ == ModelKind::Circle; }

  // Straightened half-width: pi for Circle, params.window otherwise.
  double window() const { return window_; }
  double spacing() const { return h_; }
  double scattering_c() const { return c_; }

  // Frame coefficient against d/dx in the interior chart.
  double frame(double x) const;
  // Fiber metric coefficient g(x) for the frame-dual pairing (identity here;
  // kept explicit so cutoff radii and brackets state their metric).
  double metric_coeff(double) const { return 1.0; }

  // Straightening diffeomorphism s(x) and its inverse. Both are global:
  // Circle s = theta, BInterval s = log(x/(1-x)), ScLine s = atanh(x)/c.
  double straighten(double x) const;
  double unstraighten(double s) const;

  // Distance in the frame metric: |s(x)-s(y)|, wrapped on the circle.
  double geodesic_distance(double x, double y) const;

  const std::vector<double>& nodes_x() const { return nodes_x_; }
  const std::vector<double>& nodes_s() const { return nodes_s_; }
  const std::vector<double>& weights() const { return weights_; }

  // Defining functions of the boundary hyperfaces (empty for Circle). They
  // are positive on the interior and cut out the faces at 0.
  const std::vector<std::function<double(double)>>& boundary_defining() const {
    return bdf_;
  }

  // True if x lies in the open interior chart.
  bool contains(double x) const;

 private:
  ModelKind kind_;
  int n_;
  double window_;
  double h_;
  double c_;
  std::vector<double> nodes_x_;
  std::vector<double> nodes_s_;
  std::vector<double> weights_;
  std::vector<std::function<double(double)>> bdf_;
};

GeometryPtr make_model(ModelKind kind, const ModelParams& params = {});

// Node values of a function on a model grid, with the geometry they live on.
struct GridFunction {
  GeometryPtr geom;
  Eigen::VectorXcd values;

  int size() const { return static_cast<int>(values.size()); }
};

GridFunction make_grid_function(
    GeometryPtr geom,
    const std::function<std::complex<double>(double x)>& f);

// Same, sampled in the straightened coordinate.
GridFunction make_grid_function_s(
    GeometryPtr geom,
    const std::function<std::complex<double>(double s)>& f);

// Riemannian volume weights of the frame metric on the grid nodes. These are
// the quadrature weights used by every inner product and operator apply.
std::vector<double> riemannian_volume_weights(const ModelGeometry& geom);

// Derivative along the frame (the anchor image of the canonical section),
// computed spectrally in the straightened coordinate. Open models are
// treated as window-periodic; inputs are expected to vanish near the window
// edge. The Nyquist mode is annihilated, as for any odd spectral derivative.
GridFunction anchor_apply(const GridFunction& u);

// Weighted norms over the grid.
double l2_norm(const GridFunction& u);
double linf_norm(const GridFunction& u);

}  // namespace liek
