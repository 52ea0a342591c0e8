#pragma once

#include "liek/config.hpp"
#include "liek/quantize.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace liek {

// One named data series attached to a check (raw points behind a plot).
struct Series {
  std::string label;
  std::string x_name = "x";
  std::string y_name = "y";
  std::vector<std::pair<double, double>> points;
};

struct CheckReport {
  std::string name;
  std::string geometry;
  int n = 0;
  double window = 0.0;
  double measured = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string detail;
  std::vector<std::string> properties;
  std::vector<Series> series;
  std::vector<std::string> artifacts;  // CSV paths written by run_suite
};

struct CheckDef {
  std::string name;
  std::vector<std::string> properties;  // verified operator-algebra facts
  double default_tol;
  std::function<CheckReport(const RunConfig&)> run;
};

// The named checks, in suite order. Property tags are drawn from:
//   quantization-identity, vector-field-quantization,
//   quantization-euclidean-oracle, cutoff-independence, algebra-closure,
//   principal-symbol-isomorphism, commutator-poisson, adjoint-closure,
//   conjugation-by-bdf-power, conjugation-by-flow, face-preservation,
//   diff-recovery, sobolev-boundedness, suspended-right-invariance,
//   semiclassical-scaling.
const std::vector<CheckDef>& check_registry();

// Executes the selected checks ("default" expands to the full registry) and
// writes suite.csv, suite.json and per-series CSV artifacts under
// config.out_dir. A check that throws is reported as failed with the error
// in its detail; the suite continues.
std::vector<CheckReport> run_suite(const RunConfig& config);

// Deterministic report renderings (used by run_suite and the CLI).
std::string summary_csv(const std::vector<CheckReport>& reports);
std::string summary_json(const std::vector<CheckReport>& reports);
std::string series_csv(const Series& series);

// Brute-force oracle for the quantization: same tapered integrand as
// assemble_kernel but integrated with composite Gauss-Legendre panels in eta
// (no FFT), entry by entry.
Eigen::MatrixXcd oracle_weylq_kernel(const GeometryPtr& geom,
                                     const Symbol& symbol,
                                     const Cutoff& cutoff,
                                     bool density_correction = true);
GridFunction oracle_weylq(const GeometryPtr& geom, const Symbol& symbol,
                          const Cutoff& cutoff, const GridFunction& u);

// Discrete H^s norm in the straightened coordinate (window periodic).
double sobolev_norm(const GridFunction& u, double s);

// Estimate of the operator norm H^s -> H^{s-m}: max Rayleigh ratio over
// narrowband trial packets with seeded random phases, packet centers
// sweeping 0 .. 0.3 * eta_max.
double estimate_sobolev_bound(const DenseOperator& p, double s, double m,
                              int trials = 6, uint64_t seed = 1);

// Deterministic band-limited random field: unit-sup random phases on modes
// |k| <= frac * eta_max.
GridFunction bandlimited_field(const GeometryPtr& geom, uint64_t seed,
                               double frac = 0.25);

// Least squares slope of log(y) against log(x).
double loglog_slope(const std::vector<std::pair<double, double>>& points);

// Spectral operator norm by power iteration on A^H A (deterministic start).
double operator_norm2(const Eigen::MatrixXcd& a, int iterations = 40);

}  // namespace liek
