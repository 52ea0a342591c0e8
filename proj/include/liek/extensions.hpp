#pragma once

#include "liek/quantize.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <map>
#include <vector>

namespace liek {

// ---------------------------------------------------------------------------
// Suspended calculus on M x R, with the group direction discretized as a
// periodic lattice of circumference z_period. Right translation invariance
// in z makes such operators diagonal in the z-frequency mu; a suspended
// operator is a family of model operators indexed by the discrete dual
// lattice mu_k = 2 pi k / z_period.
// ---------------------------------------------------------------------------

struct SuspendedSymbol {
  double order = 0.0;
  SymbolClass klass = SymbolClass::Type10;
  std::string name = "suspended";
  // Full symbol a(x, xi, mu).
  std::function<std::complex<double>(double x, double xi, double mu)> eval;
  // Optional polynomial-in-xi structure: coefficient k as a function of
  // (x, mu). When present, each mu slice assembles on the exact
  // differential path.
  std::vector<std::function<std::complex<double>(double x, double mu)>>
      poly_coeffs;

  // The model symbol at frozen mu.
  Symbol at_mu(double mu) const;
};

class SuspendedOperator {
 public:
  SuspendedOperator(GeometryPtr geom, double z_period,
                    std::vector<DenseOperator> per_mode, double order);

  const GeometryPtr& geometry() const { return geom_; }
  double z_period() const { return z_period_; }
  int n_z() const { return static_cast<int>(per_mode_.size()); }
  double order() const { return order_; }

  // Dual lattice frequency of z-mode index k (DFT ordering).
  double mu(int k) const;
  const DenseOperator& mode_operator(int k) const { return per_mode_[k]; }

  // Apply to samples U(i, l) = u(x_i, z_l), z_l = l * z_period / n_z:
  // FFT in z, apply the frozen-mu model operator per mode, inverse FFT.
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& u) const;

  // Composition is mode-wise; orders add.
  SuspendedOperator compose_with(const SuspendedOperator& other) const;

 private:
  GeometryPtr geom_;
  double z_period_;
  double order_;
  std::vector<DenseOperator> per_mode_;
};

SuspendedOperator suspended_assemble(GeometryPtr geom,
                                     const SuspendedSymbol& symbol,
                                     const Cutoff& cutoff, double z_period,
                                     int n_z,
                                     const AssembleOptions& opts = {});

// Convenience form: assemble and apply in one step.
Eigen::MatrixXcd suspended_apply(GeometryPtr geom,
                                 const SuspendedSymbol& symbol,
                                 const Cutoff& cutoff, double z_period,
                                 const Eigen::MatrixXcd& u,
                                 const AssembleOptions& opts = {});

// Measure translation invariance of a lattice operator in the z direction:
// max over cyclic shifts of ||shift^{-1} op(shift u) - op(u)||_inf over a
// deterministic set of trial inputs.
struct InvarianceReport {
  double max_violation = 0.0;
  bool pass = false;
  std::vector<double> per_shift;
};
InvarianceReport check_invariance(
    const std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>& op,
    int n_x, int n_z, double tol, int n_trials = 3, uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Semiclassical families: operators quantizing a(t, x, t eta) for a scale
// ladder t in (0, 1]. The cutoff stays fixed in t.
// ---------------------------------------------------------------------------

class SemiclassicalFamily {
 public:
  // General form: full symbol a(t, x, xi) evaluated at rescaled frequency.
  SemiclassicalFamily(GeometryPtr geom,
                      std::function<Symbol(double t)> symbol_at,
                      Cutoff cutoff, AssembleOptions opts = {});

  // Family with t-independent generating symbol a(x, xi) -> a(x, t xi).
  static SemiclassicalFamily rescaling(GeometryPtr geom, const Symbol& a,
                                       Cutoff cutoff,
                                       AssembleOptions opts = {});

  const GeometryPtr& geometry() const { return geom_; }

  // Operator at scale t; assembled once and cached.
  const DenseOperator& at(double t) const;

 private:
  GeometryPtr geom_;
  std::function<Symbol(double)> symbol_at_;
  Cutoff cutoff_;
  AssembleOptions opts_;
  mutable std::map<double, DenseOperator> cache_;
};

GridFunction semiclassical_apply(const SemiclassicalFamily& family, double t,
                                 const GridFunction& u);

// The t-rescaled symbol a(x, t xi) with order preserved; polynomial
// structure is rescaled exactly (c_k -> t^k c_k).
Symbol rescale_symbol(const Symbol& a, double t);

}  // namespace liek
