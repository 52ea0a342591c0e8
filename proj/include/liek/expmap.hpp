#pragma once

#include "liek/geometry.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>

namespace liek {

// Radial cutoff chi(x, v) = profile(|v|_g / r) used to localize quantization
// kernels near the diagonal. Profiles:
//   "smooth" : identically 1 on [0, 1/2], identically 0 on [1, inf),
//              C-infinity in between (exponential splice).
//   "sharp"  : indicator of [0, 3/4]; deliberately discontinuous, kept as a
//              negative control for smoothness-sensitive checks.
struct Cutoff {
  double radius = 1.0;
  std::string profile = "smooth";

  // The radial profile rho on [0, inf).
  double profile_value(double u) const;
  // chi at base point x and frame fiber coordinate vhat.
  double operator()(const ModelGeometry& geom, double x, double vhat) const;
};

// Default radius min(r0/2, 1) where r0 is the injectivity radius.
Cutoff make_cutoff(const ModelGeometry& geom, double r = -1.0,
                   const std::string& profile = "smooth");

struct InjRadius {
  double value = 0.0;  // meaningful only when !infinite
  bool infinite = false;
};

// Injectivity radius of the frame metric: pi on the circle, infinite on the
// open models (their straightened line is complete without conjugate points).
InjRadius injectivity_radius(const ModelGeometry& geom);

// Geodesic exponential of the frame metric: exp_x(vhat * frame). In the
// straightened coordinate this is s(x) + vhat.
double exp_point(const ModelGeometry& geom, double x, double vhat);

// Frame coordinate of tau(x, y) = exp_x^{-1}(y) ... the unique vector with
// exp_x(-tau) = y, following the Riemann-Weyl fibration convention, is
// -tau_hat * frame. Here tau_hat(x, y) = s(x) - s(y), wrapped on the circle.
// Throws std::domain_error when y is at or beyond the injectivity radius.
double tau_hat(const ModelGeometry& geom, double x, double y);

// Time dependent free vector fields f(x) * frame with x-chart coefficient f.
struct FlowField {
  std::function<double(double x)> coeff;
  std::string name = "field";
};

struct FlowStats {
  int escaped = 0;    // grid nodes whose flow left the truncation window
  int max_steps = 0;  // largest adaptive step count over the nodes
};

// Flow a single point for unit time along field * frame. Adaptive embedded
// Runge-Kutta (Dormand-Prince 5(4)) on ds/dt = f(x(s)); tol controls the
// local error per step. Returns the straightened endpoint.
double flow_point_s(const ModelGeometry& geom, const FlowField& field,
                    double s0, double time, double tol, int* steps = nullptr);

// Pullback of u by the time-one flow: (psi u)(x) = u(phi_1(x)) on every grid
// node. Endpoints are interpolated: band-limited trigonometric interpolation
// on the circle, natural cubic spline with zero extension on open models.
GridFunction flow_apply(const GridFunction& u, const FlowField& field,
                        double time = 1.0, double tol = 1e-10,
                        FlowStats* stats = nullptr);

// Dense matrix of flow_apply, column by column; flow_apply(u) == M * u.
Eigen::MatrixXd flow_matrix(const ModelGeometry& geom, const FlowField& field,
                            double time = 1.0, double tol = 1e-10,
                            FlowStats* stats = nullptr);

// Interpolation matrix: row i evaluates a grid function at straightened
// target s_targets[i] (same rules as flow_apply).
Eigen::MatrixXd interpolation_matrix(const ModelGeometry& geom,
                                     const std::vector<double>& s_targets);

}  // namespace liek
