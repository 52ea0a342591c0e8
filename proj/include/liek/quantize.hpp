#pragma once

#include "liek/expmap.hpp"
#include "liek/geometry.hpp"
#include "liek/symbols.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace liek {

// How a kernel was produced; carried along for reports and snapshots.
struct Provenance {
  std::string symbol = "custom";
  double cutoff_radius = 0.0;
  std::string cutoff_profile = "smooth";
  bool density_correction = true;
  bool quadrature_path = false;
  std::vector<std::string> generators;  // flow factors, outermost first

  std::string describe() const;
};

struct AssembleOptions {
  // Compensate the Jacobian of exp so constants quantize to the identity
  // exactly; switching it off keeps the literal kernel density of the
  // defining oscillatory integral.
  bool density_correction = true;
  // Route polynomial symbols through the oscillatory quadrature instead of
  // exact spectral differentiation (used by cross-validation checks).
  bool force_quadrature = false;
  // Frequency samples per grid point for the quadrature path.
  int eta_oversample = 8;
  // Number of worker threads for row assembly; 0 picks the hardware count.
  int threads = 0;
};

// Dense discretization of an operator on a model grid. The stored matrix is
// the Schwartz kernel against the volume weights:
//   (P u)_i = sum_j K(i, j) w_j u_j.
class DenseOperator {
 public:
  DenseOperator() = default;
  DenseOperator(GeometryPtr geom, Eigen::MatrixXcd kernel, double order,
                Provenance prov = {});

  const GeometryPtr& geometry() const { return geom_; }
  const Eigen::MatrixXcd& kernel() const { return kernel_; }
  double order() const { return order_; }
  const Provenance& provenance() const { return prov_; }

  GridFunction apply(const GridFunction& u) const;

  // The matrix acting on value vectors, kernel * diag(weights).
  Eigen::MatrixXcd action_matrix() const;

 private:
  GeometryPtr geom_;
  Eigen::MatrixXcd kernel_;
  double order_ = 0.0;
  Provenance prov_;
};

// Kohn-Nirenberg quantization of a full symbol on the model grid:
//
//   (a(D) u)(x) = (2 pi)^{-1} Int Int e^{i tau_hat(x,y) eta}
//                 chi(x, tau_hat(x,y)) a(x, eta) u(y) J(x,y) deta dvol(y)
//
// realized in the straightened coordinate, where tau_hat(x,y) = s(x) - s(y)
// on a uniform grid. The eta integral is a tapered trapezoid rule evaluated
// by FFT per row; the taper is identically 1 below half the grid Nyquist
// frequency and rolls off smoothly above it, making the rule superalgebraic
// for every symbol class. J is 1 with density correction (quantization in
// dvol), and the frame Jacobian without it.
//
// Polynomial symbols skip the quadrature: they assemble exactly as
// differential operators, sum of diag(c_k(x)) (-i d/ds)^k with spectral
// derivative matrices (window periodic; the cutoff is immaterial on the
// diagonal delta derivatives).
DenseOperator assemble_kernel(GeometryPtr geom, const Symbol& symbol,
                              const Cutoff& cutoff,
                              const AssembleOptions& opts = {});

// Conjugation chain b(D) psi_1 ... psi_k: quantize b, then right multiply by
// the flow pullbacks of the listed fields (outermost first). Order is
// b.order(); flows are order-0 factors.
DenseOperator generator_chain(GeometryPtr geom, const Symbol& b,
                              const Cutoff& cutoff,
                              const std::vector<FlowField>& fields,
                              double flow_tol = 1e-10,
                              const AssembleOptions& opts = {});

// Algebra on dense operators. Geometries must match.
DenseOperator compose(const DenseOperator& p, const DenseOperator& q);
DenseOperator adjoint(const DenseOperator& p);
DenseOperator add(const DenseOperator& p, const DenseOperator& q);
DenseOperator subtract(const DenseOperator& p, const DenseOperator& q);
DenseOperator scale(std::complex<double> c, const DenseOperator& p);
DenseOperator commutator(const DenseOperator& p, const DenseOperator& q);
DenseOperator identity_operator(GeometryPtr geom);

// Conjugate by a complex power of a boundary defining function:
//   rho^s P rho^{-s},  rho = boundary_defining()[face].
// Circle has no faces; throws std::domain_error there.
DenseOperator conjugate_by_power(const DenseOperator& p,
                                 std::complex<double> s, int face = 0);

// Oscillatory-testing recovery of the symbol at one phase space point:
// apply P to u_lambda(y) = exp(i lambda xi (s(y)-s0)) bump(s(y)-s0), read
// off at the node nearest to x, scale by lambda^{-m}, and extrapolate the
// ladder lambda -> infinity. `order` overrides the operator's order tag
// (needed for differences whose leading parts cancel).
struct SymbolRecovery {
  std::complex<double> value;
  double error;  // difference of the last two extrapolation stages
  std::vector<double> ladder;
  std::vector<std::complex<double>> raw;  // lambda^{-m} samples per rung
};
SymbolRecovery recover_symbol(const DenseOperator& p, double x, double xi,
                              std::vector<double> ladder = {},
                              std::optional<double> order = {});

// Kernel snapshot I/O. CSV: N rows of N "re,im" cells.
// Binary: magic "LIEK", u32 N, f64 order, then N*N little-endian complex
// doubles, row major.
void write_kernel_csv(const DenseOperator& p, const std::string& path);
void write_kernel_binary(const DenseOperator& p, const std::string& path);
DenseOperator read_kernel_binary(GeometryPtr geom, const std::string& path);

// Spectral derivative matrix (-i d/ds)^k on the straightened grid, window
// periodic, odd-order Nyquist annihilated. Exposed for oracle tests.
Eigen::MatrixXcd spectral_derivative_matrix(const ModelGeometry& geom, int k);

// The taper used by the quadrature path, as a function of |eta| / eta_max.
double quadrature_taper(double w);

}  // namespace liek
