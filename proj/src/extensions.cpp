#include "liek/extensions.hpp"

#include "liek/fft.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace liek {

namespace {
constexpr double kPi = std::numbers::pi;
using Complex = std::complex<double>;
}  // namespace

Symbol SuspendedSymbol::at_mu(double mu) const {
  if (!poly_coeffs.empty()) {
    std::vector<CoeffFn> cs;
    for (const auto& c : poly_coeffs)
      cs.push_back([c, mu](double x) { return c(x, mu); });
    Symbol s = Symbol::polynomial(std::move(cs),
                                  name + "@mu=" + std::to_string(mu));
    return s;
  }
  if (!eval) throw std::invalid_argument("suspended symbol has no evaluator");
  auto ev = eval;
  Symbol s = Symbol::type10(
      order, [ev, mu](double x, double xi) { return ev(x, xi, mu); },
      name + "@mu=" + std::to_string(mu));
  return s;
}

SuspendedOperator::SuspendedOperator(GeometryPtr geom, double z_period,
                                     std::vector<DenseOperator> per_mode,
                                     double order)
    : geom_(std::move(geom)),
      z_period_(z_period),
      order_(order),
      per_mode_(std::move(per_mode)) {
  if (per_mode_.empty())
    throw std::invalid_argument("suspended operator needs z modes");
  if (z_period_ <= 0.0)
    throw std::invalid_argument("z period must be positive");
}

double SuspendedOperator::mu(int k) const {
  return 2.0 * kPi * fft::mode_number(k, n_z()) / z_period_;
}

Eigen::MatrixXcd SuspendedOperator::apply(const Eigen::MatrixXcd& u) const {
  const int n = geom_->size();
  const int nz = n_z();
  if (u.rows() != n || u.cols() != nz)
    throw std::invalid_argument("sample grid does not match the operator");

  // Rows are x, columns are z. Transform each row to z-frequency space.
  Eigen::MatrixXcd hat(n, nz);
  std::vector<Complex> buf(nz);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < nz; ++l) buf[l] = u(i, l);
    fft::forward(buf);
    for (int k = 0; k < nz; ++k) hat(i, k) = buf[k];
  }
  Eigen::MatrixXcd out_hat(n, nz);
  const auto& w = geom_->weights();
  Eigen::VectorXcd col(n), wcol(n);
  for (int k = 0; k < nz; ++k) {
    col = hat.col(k);
    for (int i = 0; i < n; ++i) wcol[i] = w[i] * col[i];
    out_hat.col(k) = per_mode_[k].kernel() * wcol;
  }
  Eigen::MatrixXcd out(n, nz);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < nz; ++k) buf[k] = out_hat(i, k);
    fft::inverse(buf);
    for (int l = 0; l < nz; ++l) out(i, l) = buf[l];
  }
  return out;
}

SuspendedOperator SuspendedOperator::compose_with(
    const SuspendedOperator& other) const {
  if (geom_ != other.geom_ || n_z() != other.n_z() ||
      z_period_ != other.z_period_)
    throw std::invalid_argument("suspended operators are not compatible");
  std::vector<DenseOperator> modes;
  modes.reserve(per_mode_.size());
  for (int k = 0; k < n_z(); ++k)
    modes.push_back(compose(per_mode_[k], other.per_mode_[k]));
  return SuspendedOperator(geom_, z_period_, std::move(modes),
                           order_ + other.order_);
}

SuspendedOperator suspended_assemble(GeometryPtr geom,
                                     const SuspendedSymbol& symbol,
                                     const Cutoff& cutoff, double z_period,
                                     int n_z, const AssembleOptions& opts) {
  if (n_z < 2 || n_z % 2 != 0)
    throw std::invalid_argument("n_z must be even and at least 2");
  if (z_period <= 0.0)
    throw std::invalid_argument("z period must be positive");
  std::vector<DenseOperator> modes;
  modes.reserve(n_z);
  for (int k = 0; k < n_z; ++k) {
    const double mu = 2.0 * kPi * fft::mode_number(k, n_z) / z_period;
    modes.push_back(assemble_kernel(geom, symbol.at_mu(mu), cutoff, opts));
  }
  return SuspendedOperator(std::move(geom), z_period, std::move(modes),
                           symbol.order);
}

Eigen::MatrixXcd suspended_apply(GeometryPtr geom,
                                 const SuspendedSymbol& symbol,
                                 const Cutoff& cutoff, double z_period,
                                 const Eigen::MatrixXcd& u,
                                 const AssembleOptions& opts) {
  SuspendedOperator op = suspended_assemble(
      std::move(geom), symbol, cutoff, z_period, static_cast<int>(u.cols()),
      opts);
  return op.apply(u);
}

InvarianceReport check_invariance(
    const std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>& op,
    int n_x, int n_z, double tol, int n_trials, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  InvarianceReport rep;
  rep.per_shift.assign(n_z, 0.0);
  for (int trial = 0; trial < n_trials; ++trial) {
    Eigen::MatrixXcd u(n_x, n_z);
    for (int i = 0; i < n_x; ++i)
      for (int l = 0; l < n_z; ++l) u(i, l) = Complex(gauss(rng), gauss(rng));
    const Eigen::MatrixXcd base = op(u);
    for (int shift = 1; shift < n_z; ++shift) {
      Eigen::MatrixXcd shifted(n_x, n_z);
      for (int l = 0; l < n_z; ++l)
        shifted.col((l + shift) % n_z) = u.col(l);
      const Eigen::MatrixXcd moved = op(shifted);
      double viol = 0.0;
      for (int l = 0; l < n_z; ++l) {
        viol = std::max(
            viol, (moved.col((l + shift) % n_z) - base.col(l))
                      .lpNorm<Eigen::Infinity>());
      }
      rep.per_shift[shift] = std::max(rep.per_shift[shift], viol);
      rep.max_violation = std::max(rep.max_violation, viol);
    }
  }
  rep.pass = rep.max_violation <= tol;
  return rep;
}

SemiclassicalFamily::SemiclassicalFamily(
    GeometryPtr geom, std::function<Symbol(double t)> symbol_at, Cutoff cutoff,
    AssembleOptions opts)
    : geom_(std::move(geom)),
      symbol_at_(std::move(symbol_at)),
      cutoff_(std::move(cutoff)),
      opts_(opts) {}

SemiclassicalFamily SemiclassicalFamily::rescaling(GeometryPtr geom,
                                                   const Symbol& a,
                                                   Cutoff cutoff,
                                                   AssembleOptions opts) {
  return SemiclassicalFamily(
      std::move(geom), [a](double t) { return rescale_symbol(a, t); },
      std::move(cutoff), opts);
}

const DenseOperator& SemiclassicalFamily::at(double t) const {
  if (!(t > 0.0) || t > 1.0)
    throw std::invalid_argument("scale t must lie in (0, 1]");
  auto it = cache_.find(t);
  if (it == cache_.end()) {
    it = cache_
             .emplace(t, assemble_kernel(geom_, symbol_at_(t), cutoff_, opts_))
             .first;
  }
  return it->second;
}

GridFunction semiclassical_apply(const SemiclassicalFamily& family, double t,
                                 const GridFunction& u) {
  return family.at(t).apply(u);
}

Symbol rescale_symbol(const Symbol& a, double t) {
  if (a.is_polynomial()) {
    std::vector<CoeffFn> cs;
    const auto& orig = a.coeffs();
    double tk = 1.0;
    for (const auto& c : orig) {
      const double scale = tk;
      cs.push_back([c, scale](double x) { return scale * c(x); });
      tk *= t;
    }
    return Symbol::polynomial(std::move(cs),
                              a.name() + "@t=" + std::to_string(t));
  }
  Symbol out = Symbol::type10(
      a.order(), [a, t](double x, double xi) { return a.eval(x, t * xi); },
      a.name() + "@t=" + std::to_string(t));
  return out;
}

}  // namespace liek
