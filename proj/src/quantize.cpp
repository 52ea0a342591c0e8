#include "liek/quantize.hpp"

#include "liek/detail/neville.hpp"
#include "liek/fft.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <functional>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace liek {

namespace {

constexpr double kPi = std::numbers::pi;
using Complex = std::complex<double>;

void require_same_geometry(const DenseOperator& p, const DenseOperator& q) {
  if (p.geometry() != q.geometry())
    throw std::invalid_argument("operators live on different geometries");
}

// Signed node offset realizing tau_hat(x_i, x_j) = offset * h; on the circle
// the offset is wrapped into (-n/2, n/2].
int node_offset(const ModelGeometry& geom, int i, int j) {
  int m = i - j;
  if (geom.periodic()) {
    const int n = geom.size();
    m %= n;
    if (m <= -n / 2) m += n;
    if (m > n / 2) m -= n;
  }
  return m;
}

void parallel_rows(int n, int threads, const std::function<void(int)>& row) {
  int workers = threads > 0
                    ? threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) row(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int i = w; i < n; i += workers) row(i);
    });
  }
  for (auto& t : pool) t.join();
}

Eigen::MatrixXcd quadrature_kernel(const ModelGeometry& geom,
                                   const Symbol& symbol, const Cutoff& cutoff,
                                   const AssembleOptions& opts) {
  const int n = geom.size();
  const double h = geom.spacing();
  const int n_eta = std::max(2, opts.eta_oversample) * n;
  const double eta_max = kPi / h;
  const double d_eta = 2.0 * eta_max / n_eta;
  const auto& xs = geom.nodes_x();

  Eigen::MatrixXcd kernel(n, n);
  parallel_rows(n, opts.threads, [&](int i) {
    const double x = xs[i];
    std::vector<Complex> buf(n_eta);
    for (int k = 0; k < n_eta; ++k) {
      const double eta = -eta_max + k * d_eta;
      const double taper = quadrature_taper(std::abs(eta) / eta_max);
      buf[k] = taper == 0.0 ? Complex(0.0) : symbol.eval(x, eta) * taper;
    }
    // One backward DFT evaluates the eta integral at every lattice offset:
    //   I(m h) = d_eta (-1)^m sum_k buf_k exp(2 pi i m k / n_eta).
    fft::backward_raw(buf);
    for (int j = 0; j < n; ++j) {
      const int m = node_offset(geom, i, j);
      const double chi = cutoff(geom, x, m * h);
      if (chi == 0.0) {
        kernel(i, j) = 0.0;
        continue;
      }
      const int idx = ((m % n_eta) + n_eta) % n_eta;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      kernel(i, j) = (d_eta * sign / (2.0 * kPi)) * chi * buf[idx];
    }
  });
  return kernel;
}

Eigen::MatrixXcd differential_kernel(const ModelGeometry& geom,
                                     const Symbol& symbol) {
  const int n = geom.size();
  const double h = geom.spacing();
  const auto& coeffs = symbol.coeffs();
  const auto& xs = geom.nodes_x();
  Eigen::MatrixXcd action = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < static_cast<int>(coeffs.size()); ++k) {
    Eigen::VectorXcd diag(n);
    bool all_zero = true;
    for (int i = 0; i < n; ++i) {
      diag[i] = coeffs[k](xs[i]);
      all_zero = all_zero && diag[i] == Complex(0.0);
    }
    if (all_zero) continue;
    if (k == 0) {
      action.diagonal() += diag;
    } else {
      action += diag.asDiagonal() * spectral_derivative_matrix(geom, k);
    }
  }
  return action / h;  // kernel against the volume weights
}

}  // namespace

double quadrature_taper(double w) {
  static const Cutoff smooth{1.0, "smooth"};
  return smooth.profile_value(w);
}

Eigen::MatrixXcd spectral_derivative_matrix(const ModelGeometry& geom, int k) {
  if (k < 0) throw std::invalid_argument("derivative order must be >= 0");
  const int n = geom.size();
  if (k == 0) return Eigen::MatrixXcd::Identity(n, n);
  // (-i d/ds)^k is circulant on the periodic straightened grid; build its
  // first column from the multiplier (k0 * mode)^k and shift.
  const double k0 = kPi / geom.window();
  std::vector<Complex> col(n);
  for (int q = 0; q < n; ++q) {
    if (k % 2 == 1 && 2 * q == n) {
      col[q] = 0.0;
      continue;
    }
    col[q] = std::pow(k0 * fft::mode_number(q, n), static_cast<double>(k));
  }
  fft::inverse(col);
  Eigen::MatrixXcd mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mat(i, j) = col[((i - j) % n + n) % n];
  return mat;
}

std::string Provenance::describe() const {
  std::string out = "symbol=" + symbol;
  out += " cutoff=" + cutoff_profile + ":" + std::to_string(cutoff_radius);
  out += quadrature_path ? " path=quadrature" : " path=differential";
  out += density_correction ? " density=dvol" : " density=literal";
  for (const auto& g : generators) out += " flow=" + g;
  return out;
}

DenseOperator::DenseOperator(GeometryPtr geom, Eigen::MatrixXcd kernel,
                             double order, Provenance prov)
    : geom_(std::move(geom)),
      kernel_(std::move(kernel)),
      order_(order),
      prov_(std::move(prov)) {
  if (!geom_) throw std::invalid_argument("operator needs a geometry");
  if (kernel_.rows() != geom_->size() || kernel_.cols() != geom_->size())
    throw std::invalid_argument("kernel size does not match the grid");
}

GridFunction DenseOperator::apply(const GridFunction& u) const {
  if (u.geom != geom_)
    throw std::invalid_argument("grid function lives on another geometry");
  const auto& w = geom_->weights();
  Eigen::VectorXcd weighted(u.values.size());
  for (int j = 0; j < u.size(); ++j) weighted[j] = w[j] * u.values[j];
  return GridFunction{geom_, kernel_ * weighted};
}

Eigen::MatrixXcd DenseOperator::action_matrix() const {
  const auto& w = geom_->weights();
  Eigen::MatrixXcd act = kernel_;
  for (int j = 0; j < act.cols(); ++j) act.col(j) *= w[j];
  return act;
}

DenseOperator assemble_kernel(GeometryPtr geom, const Symbol& symbol,
                              const Cutoff& cutoff,
                              const AssembleOptions& opts) {
  if (!geom) throw std::invalid_argument("assemble_kernel needs a geometry");
  const bool differential = symbol.is_polynomial() && !opts.force_quadrature;
  Eigen::MatrixXcd kernel = differential
                                ? differential_kernel(*geom, symbol)
                                : quadrature_kernel(*geom, symbol, cutoff, opts);
  if (!opts.density_correction) {
    // Literal oscillatory-integral density: integrate u against the chart
    // Lebesgue measure instead of dvol = ds = dx / frame.
    const auto& xs = geom->nodes_x();
    for (int j = 0; j < kernel.cols(); ++j)
      kernel.col(j) *= geom->frame(xs[j]);
  }
  Provenance prov;
  prov.symbol = symbol.name();
  prov.cutoff_radius = cutoff.radius;
  prov.cutoff_profile = cutoff.profile;
  prov.density_correction = opts.density_correction;
  prov.quadrature_path = !differential;
  return DenseOperator(std::move(geom), std::move(kernel), symbol.order(),
                       std::move(prov));
}

DenseOperator generator_chain(GeometryPtr geom, const Symbol& b,
                              const Cutoff& cutoff,
                              const std::vector<FlowField>& fields,
                              double flow_tol, const AssembleOptions& opts) {
  // Flow factors are exact only against a smoothing base symbol; anything of
  // finite order would need the full composition calculus.
  if (b.klass() != SymbolClass::Smoothing)
    throw std::invalid_argument("generator_chain: base symbol must be smoothing");
  DenseOperator base = assemble_kernel(geom, b, cutoff, opts);
  Eigen::MatrixXcd act = base.action_matrix();
  Provenance prov = base.provenance();
  for (const auto& field : fields) {
    act *= flow_matrix(*geom, field, 1.0, flow_tol);
    prov.generators.push_back(field.name);
  }
  const double h = geom->spacing();
  return DenseOperator(std::move(geom), act / h, b.order(), std::move(prov));
}

DenseOperator compose(const DenseOperator& p, const DenseOperator& q) {
  require_same_geometry(p, q);
  Eigen::MatrixXcd kernel = p.action_matrix() * q.kernel();
  Provenance prov;
  prov.symbol = "(" + p.provenance().symbol + ")o(" + q.provenance().symbol + ")";
  prov.cutoff_radius = p.provenance().cutoff_radius;
  prov.cutoff_profile = p.provenance().cutoff_profile;
  prov.quadrature_path =
      p.provenance().quadrature_path || q.provenance().quadrature_path;
  return DenseOperator(p.geometry(), std::move(kernel),
                       p.order() + q.order(), std::move(prov));
}

DenseOperator adjoint(const DenseOperator& p) {
  Provenance prov = p.provenance();
  prov.symbol = "adj(" + prov.symbol + ")";
  return DenseOperator(p.geometry(), p.kernel().adjoint(), p.order(),
                       std::move(prov));
}

DenseOperator add(const DenseOperator& p, const DenseOperator& q) {
  require_same_geometry(p, q);
  Provenance prov = p.provenance();
  prov.symbol = "(" + p.provenance().symbol + ")+(" + q.provenance().symbol + ")";
  return DenseOperator(p.geometry(), p.kernel() + q.kernel(),
                       std::max(p.order(), q.order()), std::move(prov));
}

DenseOperator subtract(const DenseOperator& p, const DenseOperator& q) {
  return add(p, scale(-1.0, q));
}

DenseOperator scale(std::complex<double> c, const DenseOperator& p) {
  Provenance prov = p.provenance();
  return DenseOperator(p.geometry(), c * p.kernel(), p.order(),
                       std::move(prov));
}

DenseOperator commutator(const DenseOperator& p, const DenseOperator& q) {
  DenseOperator pq = compose(p, q);
  DenseOperator qp = compose(q, p);
  Provenance prov;
  prov.symbol =
      "[" + p.provenance().symbol + "," + q.provenance().symbol + "]";
  return DenseOperator(p.geometry(), pq.kernel() - qp.kernel(),
                       p.order() + q.order(), std::move(prov));
}

DenseOperator identity_operator(GeometryPtr geom) {
  const int n = geom->size();
  const double h = geom->spacing();
  Provenance prov;
  prov.symbol = "one";
  prov.quadrature_path = false;
  return DenseOperator(std::move(geom),
                       Eigen::MatrixXcd::Identity(n, n) / h, 0.0,
                       std::move(prov));
}

DenseOperator conjugate_by_power(const DenseOperator& p,
                                 std::complex<double> s, int face) {
  const auto& geom = *p.geometry();
  const auto& bdfs = geom.boundary_defining();
  if (bdfs.empty())
    throw std::domain_error("geometry has no boundary faces to conjugate by");
  if (face < 0 || face >= static_cast<int>(bdfs.size()))
    throw std::invalid_argument("no such boundary face");
  const auto& rho = bdfs[face];
  const auto& xs = geom.nodes_x();
  const int n = geom.size();
  Eigen::MatrixXcd kernel = p.kernel();
  for (int i = 0; i < n; ++i) {
    const Complex left = std::pow(Complex(rho(xs[i])), s);
    for (int j = 0; j < n; ++j) {
      const Complex right = std::pow(Complex(rho(xs[j])), -s);
      kernel(i, j) *= left * right;
    }
  }
  Provenance prov = p.provenance();
  prov.symbol = "conj(" + prov.symbol + ")";
  return DenseOperator(p.geometry(), std::move(kernel), p.order(),
                       std::move(prov));
}

SymbolRecovery recover_symbol(const DenseOperator& p, double x, double xi,
                              std::vector<double> ladder,
                              std::optional<double> order) {
  const auto& geom = *p.geometry();
  const double m = order.value_or(p.order());
  if (!std::isfinite(m))
    throw std::invalid_argument(
        "symbol recovery needs a finite order; pass an override for "
        "smoothing operators");

  const int n = geom.size();
  const double s_target = geom.straighten(x);
  const auto& ss = geom.nodes_s();
  int i0 = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double d = std::abs(ss[i] - s_target);
    if (geom.periodic()) d = std::abs(std::remainder(ss[i] - s_target, 2 * kPi));
    if (d < best) {
      best = d;
      i0 = i;
    }
  }
  const double s0 = ss[i0];

  if (ladder.empty()) {
    const double eta_max = kPi / geom.spacing();
    const double freq = std::max(std::abs(xi), 1.0);
    double top = 0.25 * eta_max / freq;
    if (geom.periodic()) {
      // Keep lambda * xi an exact integer mode when possible.
      top = std::max(8.0, std::floor(top));
    } else {
      top = std::max(8.0, top);
    }
    ladder = {top / 4.0, top / 2.0, top};
  }

  // Compactly supported plateau bump: identically 1 near s0, exactly 0 at
  // distance w. Hard zeros keep conjugated kernels with large off-diagonal
  // weights (bdf powers near the window edge) out of the reading.
  const double w =
      geom.periodic() ? 2.2 : std::min(3.5, geom.window() / 3.0);
  static const Cutoff kBump{1.0, "smooth"};

  std::vector<double> ts;
  std::vector<Complex> vs;
  const Eigen::MatrixXcd act = p.action_matrix();
  for (double lambda : ladder) {
    Eigen::VectorXcd u(n);
    for (int j = 0; j < n; ++j) {
      double d = ss[j] - s0;
      if (geom.periodic()) d = std::remainder(d, 2 * kPi);
      u[j] = std::exp(Complex(0.0, lambda * xi * d)) *
             kBump.profile_value(std::abs(d) / w);
    }
    const Complex v = (act.row(i0) * u).value();
    vs.push_back(v * std::pow(lambda, -m));
    ts.push_back(1.0 / lambda);
  }

  SymbolRecovery rec;
  rec.ladder = ladder;
  rec.raw = vs;
  rec.value = detail::neville_at_zero(ts, vs, &rec.error);
  return rec;
}

void write_kernel_csv(const DenseOperator& p, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  const auto& k = p.kernel();
  for (int i = 0; i < k.rows(); ++i) {
    for (int j = 0; j < k.cols(); ++j) {
      std::fprintf(f, "%s%.17g,%.17g", j == 0 ? "" : ",", k(i, j).real(),
                   k(i, j).imag());
    }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

void write_kernel_binary(const DenseOperator& p, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  const char magic[4] = {'L', 'I', 'E', 'K'};
  f.write(magic, 4);
  const uint32_t n = static_cast<uint32_t>(p.geometry()->size());
  f.write(reinterpret_cast<const char*>(&n), sizeof n);
  const double order = p.order();
  f.write(reinterpret_cast<const char*>(&order), sizeof order);
  const auto& k = p.kernel();
  for (int i = 0; i < k.rows(); ++i) {
    for (int j = 0; j < k.cols(); ++j) {
      const double re = k(i, j).real(), im = k(i, j).imag();
      f.write(reinterpret_cast<const char*>(&re), sizeof re);
      f.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
  }
  if (!f) throw std::runtime_error("failed writing " + path);
}

DenseOperator read_kernel_binary(GeometryPtr geom, const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, "LIEK", 4) != 0)
    throw std::runtime_error("not a kernel snapshot: " + path);
  uint32_t n = 0;
  f.read(reinterpret_cast<char*>(&n), sizeof n);
  double order = 0.0;
  f.read(reinterpret_cast<char*>(&order), sizeof order);
  if (!f || static_cast<int>(n) != geom->size())
    throw std::invalid_argument("snapshot size does not match the grid");
  Eigen::MatrixXcd kernel(n, n);
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t j = 0; j < n; ++j) {
      double re = 0.0, im = 0.0;
      f.read(reinterpret_cast<char*>(&re), sizeof re);
      f.read(reinterpret_cast<char*>(&im), sizeof im);
      kernel(i, j) = Complex(re, im);
    }
  }
  if (!f) throw std::runtime_error("truncated kernel snapshot: " + path);
  Provenance prov;
  prov.symbol = "snapshot:" + path;
  return DenseOperator(std::move(geom), std::move(kernel), order,
                       std::move(prov));
}

}  // namespace liek
