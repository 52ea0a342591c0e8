// liek: assemble quantized kernels, apply them to data, and run the
// verification suite from a config file. Exit codes: 0 pass, 1 check
// failure, 2 usage or config error.

#include "liek/config.hpp"
#include "liek/plot.hpp"
#include "liek/quantize.hpp"
#include "liek/verify.hpp"

#include <CLI11.hpp>

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

liek::RunConfig load_config(const std::string& path) {
  if (path.empty()) return liek::RunConfig{};
  return liek::parse_config_file(path);
}

liek::DenseOperator assemble_from(const liek::RunConfig& cfg,
                                  const std::string& symbol_override) {
  liek::GeometryPtr geom = cfg.make_geometry();
  const std::string name =
      symbol_override.empty() ? cfg.symbol : symbol_override;
  const liek::Symbol sym = liek::symbol_from_name(*geom, name);
  const liek::Cutoff chi =
      liek::make_cutoff(*geom, cfg.cutoff_r, cfg.cutoff_profile);
  liek::AssembleOptions opts;
  opts.density_correction = cfg.density_correction;
  return liek::assemble_kernel(geom, sym, chi, opts);
}

int cmd_check(const liek::RunConfig& cfg, bool quiet) {
  const auto reports = liek::run_suite(cfg);
  bool all = true;
  for (const auto& r : reports) {
    all = all && r.pass;
    if (!quiet)
      std::printf("[%s] %-22s measured=%-12.4g tol=%-10.4g (%s N=%d)\n",
                  r.pass ? "PASS" : "FAIL", r.name.c_str(), r.measured, r.tol,
                  r.geometry.c_str(), r.n);
    if (!quiet && !r.pass) std::printf("       %s\n", r.detail.c_str());
    if (r.series.empty()) continue;
    bool pos_x = true, pos_y = true;
    double x_lo = 1e300, x_hi = 0.0;
    for (const auto& s : r.series)
      for (const auto& [x, y] : s.points) {
        pos_x = pos_x && x > 0.0;
        pos_y = pos_y && y > 0.0;
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
      }
    liek::PlotOptions po;
    po.title = r.name + " (" + r.geometry + ", N=" + std::to_string(r.n) + ")";
    po.x_label = r.series.front().x_name;
    po.y_label = r.series.front().y_name;
    po.log_x = pos_x && x_hi >= 4.0 * x_lo;
    po.log_y = pos_y && po.log_x;
    const auto path =
        std::filesystem::path(cfg.out_dir) / (r.name + ".svg");
    liek::write_svg_chart(path.string(), r.series, po);
  }
  if (!quiet) {
    int passed = 0;
    for (const auto& r : reports) passed += r.pass ? 1 : 0;
    std::printf("%d/%zu checks passed; reports in %s\n", passed,
                reports.size(), cfg.out_dir.c_str());
  }
  return all ? 0 : 1;
}

int cmd_kernel(const liek::RunConfig& cfg, const std::string& symbol,
               std::string out, bool quiet) {
  const liek::DenseOperator p = assemble_from(cfg, symbol);
  if (out.empty()) out = "kernel";
  liek::write_kernel_csv(p, out + ".csv");
  liek::write_kernel_binary(p, out + ".bin");
  if (!quiet)
    std::printf("%s -> %s.csv %s.bin\n", p.provenance().describe().c_str(),
                out.c_str(), out.c_str());
  return 0;
}

int cmd_apply(const liek::RunConfig& cfg, const std::string& symbol,
              const std::string& input, std::string out) {
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot open input: " + input);
  std::vector<std::complex<double>> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double re = 0.0, im = 0.0;
    const int got = std::sscanf(line.c_str(), "%lf,%lf", &re, &im);
    if (got < 1)
      throw std::runtime_error("input is not numeric CSV: \"" + line + "\"");
    values.emplace_back(re, got > 1 ? im : 0.0);
  }
  if (values.empty()) throw std::runtime_error("empty input: " + input);

  const liek::DenseOperator p = assemble_from(cfg, symbol);
  const int n = p.geometry()->size();
  if (static_cast<int>(values.size()) != n)
    throw std::runtime_error("input length " + std::to_string(values.size()) +
                             " does not match grid size " + std::to_string(n));
  liek::GridFunction u{p.geometry(), Eigen::VectorXcd(n)};
  for (int j = 0; j < n; ++j) u.values[j] = values[j];
  const liek::GridFunction v = p.apply(u);

  if (out.empty()) out = "apply_out.csv";
  std::ofstream os(out);
  for (int j = 0; j < n; ++j) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v.values[j].real(),
                  v.values[j].imag());
    os << buf;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kohn-Nirenberg quantization on 1-D model geometries"};
  app.require_subcommand(1);

  std::string config_path, symbol, out, input;
  uint64_t seed = 0;
  bool have_seed = false, quiet = false;

  auto add_common = [&](CLI::App* sub, bool with_symbol) {
    sub->add_option("--config", config_path, "config file (text or JSON)");
    sub->add_option("--out", out, "output path");
    sub->add_option("--seed", seed, "override config seed")
        ->each([&](const std::string&) { have_seed = true; });
    sub->add_flag("--quiet", quiet, "suppress progress output");
    if (with_symbol)
      sub->add_option("--symbol", symbol, "symbol registry name override");
  };

  CLI::App* check = app.add_subcommand("check", "run the verification suite");
  add_common(check, false);
  CLI::App* kernel =
      app.add_subcommand("kernel", "assemble and export one kernel");
  add_common(kernel, true);
  CLI::App* apply =
      app.add_subcommand("apply", "apply a quantized symbol to CSV data");
  add_common(apply, true);
  apply->add_option("--input", input, "input values, one complex per line")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits clean, usage errors exit 2
  }

  try {
    liek::RunConfig cfg = load_config(config_path);
    if (have_seed) cfg.seed = seed;
    if (check->parsed()) {
      if (!out.empty()) cfg.out_dir = out;
      return cmd_check(cfg, quiet);
    }
    if (kernel->parsed()) return cmd_kernel(cfg, symbol, out, quiet);
    return cmd_apply(cfg, symbol, input, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
