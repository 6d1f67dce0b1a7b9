#include "fockbench/experiments.hpp"

#include <Eigen/Core>
#include <cblas.h>
#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "fockbench/acceptance.hpp"
#include "fockbench/csv.hpp"
#include "fockbench/dbar.hpp"
#include "fockbench/expr.hpp"
#include "fockbench/fockcore.hpp"
#include "fockbench/ida.hpp"
#include "fockbench/operators.hpp"
#include "fockbench/quantization.hpp"

#ifndef FOCKBENCH_VERSION
#define FOCKBENCH_VERSION "dev"
#endif

namespace fockbench {

void Manifest::set(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }
void Manifest::set(const std::string& key, double value) { set(key, format_double(value)); }

void Manifest::check(const std::string& name, bool pass, double value, const std::string& op, double bound) {
  pass = pass && !std::isnan(value);
  if (!pass) ++failures_;
  set("check." + name, std::string(pass ? "pass" : "fail") + " value=" + format_double(value) + " " + op + " " +
                           format_double(bound));
}

void Manifest::write(std::ostream& os) const {
  for (const auto& [k, v] : lines_) os << k << '=' << v << '\n';
}

namespace {

namespace fs = std::filesystem;

struct Context {
  const ExperimentConfig& cfg;
  Manifest& m;
  fs::path dir;

  // Buffers a CSV, writes it and records its row count in the manifest.
  void emit(const std::string& file, const std::function<void(std::ostream&)>& body) {
    std::ostringstream ss;
    body(ss);
    const std::string text = ss.str();
    std::ofstream out(dir / file, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + (dir / file).string());
    out << text;
    const auto lines = std::count(text.begin(), text.end(), '\n');
    m.set("artifact." + file + ".rows", std::to_string(lines > 0 ? lines - 1 : 0));
  }
  void grid(const QuadratureGrid& g) {
    m.set("grid.r_max", g.r_max());
    m.set("grid.radial_nodes", std::to_string(g.radii().size()));
    m.set("grid.angles", std::to_string(g.n_angles()));
  }
  void below(const std::string& name, double v, double bound) { m.check(name, v < bound, v, "<", bound); }
  void at_most(const std::string& name, double v, double bound) { m.check(name, v <= bound, v, "<=", bound); }
  void truth(const std::string& name, bool ok) { m.check(name, ok, ok ? 1.0 : 0.0, "==", 1.0); }
};

std::vector<double> rings_or(const ExperimentConfig& cfg, std::vector<double> fallback) {
  return cfg.rings.empty() ? fallback : cfg.rings;
}

void kernel_check(Context& c) {
  const double radius = c.cfg.extent_or(6.0), alpha = c.cfg.alpha;
  std::mt19937_64 rng(c.cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&] { return std::polar(radius * std::sqrt(u(rng)), 2.0 * kPi * u(rng)); };
  double worst = 0.0;
  c.m.set("grid.sampling_radius", radius);
  c.emit("kernel_check.csv", [&](std::ostream& os) {
    CsvWriter w(os, {"z_re", "z_im", "w_re", "w_im", "defect"});
    for (std::size_t i = 0; i < c.cfg.samples; ++i) {
      const cplx z = draw(), v = draw();
      const double d = kernel_modulus_defect(z, v, alpha);
      worst = std::max(worst, d);
      w.cell(z.real()).cell(z.imag()).cell(v.real()).cell(v.imag()).cell(d).end_row();
    }
  });
  c.below("kernel_modulus_identity", worst, c.cfg.tol("kernel"));
}

void g_field_experiment(Context& c) {
  const Symbol f = symbol_from_spec(c.cfg.symbol);
  LocalApproxConfig lc;
  lc.q = c.cfg.q;
  lc.r = c.cfg.r;
  lc.validate();
  const double spacing = 0.5;
  const auto centers = disk_grid(spacing, c.cfg.extent_or(8.0));
  c.m.set("grid.spacing", spacing);
  c.m.set("grid.centers", std::to_string(centers.size()));
  const GField field = g_field(f, lc, centers);
  c.emit("gfield.csv", [&](std::ostream& os) { write_gfield_csv(field, os); });
  double min_v = INFINITY, excess = -INFINITY;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    min_v = std::min(min_v, field.values[i]);
    excess = std::max(excess, field.values[i] - mean_M(f, lc.q, lc.r, centers[i]));
  }
  c.m.check("g_nonnegative", min_v >= 0.0, min_v, ">=", 0.0);
  c.at_most("g_below_mean", excess, 1e-12);
  c.m.check("local_solves_accepted", field.flagged == 0, static_cast<double>(field.flagged), "==", 0.0);
}

void decompose_experiment(Context& c) {
  const Symbol f = symbol_from_spec(c.cfg.symbol);
  const double t = c.cfg.t.empty() ? 1.0 : c.cfg.t.front(), extent = c.cfg.extent_or(4.0), q = c.cfg.q;
  const Decomposition d = decompose(f, q, t, extent, 0.5);
  c.m.set("grid.lattice_spacing", t / 2.0);
  c.m.set("grid.partition_members", std::to_string(d.partition().centers().size()));
  const auto& cert = d.certificates();
  c.emit("decompose_certificates.csv", [&](std::ostream& os) {
    CsvWriter w(os, {"metric", "value"});
    w.cell("sup_dbar_f1").cell(cert.sup_dbar_f1).end_row();
    w.cell("sup_mean_dbar_f1").cell(cert.sup_mean_dbar_f1).end_row();
    w.cell("sup_mean_f2").cell(cert.sup_mean_f2).end_row();
    w.cell("ratio_dbar_f1").cell(cert.ratio_dbar_f1).end_row();
    w.cell("ratio_mean_dbar_f1").cell(cert.ratio_mean_dbar_f1).end_row();
    w.cell("ratio_mean_f2").cell(cert.ratio_mean_f2).end_row();
    w.cell("probes").cell(cert.probes).end_row();
    w.cell("skipped").cell(cert.skipped).end_row();
  });
  std::optional<Decomposition> dp;
  if (q == 2.0) dp = decompose_proj(f, q, t, extent, 0.5);
  const auto probes = disk_grid(0.25, extent);
  double recon = 0.0, route = 0.0;
  c.emit("decompose_probes.csv", [&](std::ostream& os) {
    CsvWriter w(os, {"z_re", "z_im", "f1_re", "f1_im", "f2_re", "f2_im", "dbar_f1_re", "dbar_f1_im"});
    for (cplx z : probes) {
      const cplx a = d.f1(z), b = d.f2(z), db = d.dbar_f1(z);
      recon = std::max(recon, std::abs(a + b - f(z)));
      if (dp) route = std::max(route, std::abs(a - dp->f1(z)));
      w.cell(z.real()).cell(z.imag()).cell(a.real()).cell(a.imag()).cell(b.real()).cell(b.imag());
      w.cell(db.real()).cell(db.imag()).end_row();
    }
  });
  c.truth("certificate_ratios_finite", std::isfinite(cert.max_ratio()));
  c.at_most("certificate_ratio_bound", cert.max_ratio(), c.cfg.tol("decomposition_constant"));
  c.below("reconstruction", recon, c.cfg.tol("reconstruction"));
  if (dp) c.below("q2_route_coincidence", route, c.cfg.tol("route"));
}

void hankel_experiment(Context& c) {
  const Symbol f = symbol_from_spec(c.cfg.symbol);
  const int N = c.cfg.N_or(60);
  const FockBasis basis(c.cfg.alpha, N);
  const auto grid = QuadratureGrid::for_degree(c.cfg.alpha, N);
  c.m.set("grid.N", std::to_string(N));
  c.grid(grid);
  const GramPair gp = assemble(f, basis, grid);
  const double norm = hankel_norm(gp);
  const ProbeTable probe = compact_probe_auto(f, rings_or(c.cfg, {1.0, 2.0, 4.0, 6.0}), c.cfg.alpha, c.cfg.angles);
  c.emit("hankel.csv", [&](std::ostream& os) { write_operator_report(os, f.id, N, grid.r_max(), norm, probe); });
  c.m.set("result.hankel_norm", norm);
  c.m.set("result.probe_decaying", probe.decaying ? "true" : "false");
  c.at_most("hermitian_defect", gp.hermitian_defect, c.cfg.tol("hermitian"));
  const double min_eig = hankel_gram_min_eig(gp), floor = -c.cfg.tol("hermitian") * std::max(1.0, norm * norm);
  c.m.check("hankel_gram_psd", min_eig >= floor, min_eig, ">=", floor);
  c.truth("norm_finite", std::isfinite(norm));
}

void berger_coburn_experiment(Context& c) {
  const Symbol f = symbol_from_spec(c.cfg.symbol);
  if (!f.bounded) throw ConfigError("berger-coburn: symbol '" + f.id + "' is not bounded");
  const int N = c.cfg.N_or(60);
  const FockBasis basis(c.cfg.alpha, N);
  const auto grid = QuadratureGrid::for_degree(c.cfg.alpha, N);
  c.m.set("grid.N", std::to_string(N));
  c.grid(grid);
  const auto rep = berger_coburn_compare(f, basis, grid, rings_or(c.cfg, {1.0, 2.0, 4.0, 8.0, 16.0, 24.0}),
                                         c.cfg.angles);
  c.emit("berger_coburn.csv", [&](std::ostream& os) {
    CsvWriter w(os, {"side", "ring_radius", "probe_value"});
    for (std::size_t i = 0; i < rep.probe_f.radii.size(); ++i)
      w.cell("f").cell(rep.probe_f.radii[i]).cell(rep.probe_f.values[i]).end_row();
    for (std::size_t i = 0; i < rep.probe_fbar.radii.size(); ++i)
      w.cell("conj_f").cell(rep.probe_fbar.radii[i]).cell(rep.probe_fbar.values[i]).end_row();
  });
  c.m.set("result.norm_f", rep.norm_f);
  c.m.set("result.norm_conj_f", rep.norm_fbar);
  c.truth("decay_verdicts_agree", rep.verdicts_agree);
  const double k = c.cfg.tol("bc_ratio");
  c.m.check("norm_ratio_band", rep.norm_ratio >= 1.0 / k && rep.norm_ratio <= k, rep.norm_ratio, "within factor", k);
}

void dbar_experiment(Context& c) {
  const Symbol f = symbol_from_spec(c.cfg.symbol);
  const Calibration cal = calibrate_Aphi(c.cfg.alpha);
  const int N = c.cfg.N_or(40);
  const FockBasis basis(c.cfg.alpha, N);
  const auto grid = QuadratureGrid::for_degree(c.cfg.alpha, N);
  const double L = c.cfg.extent_or(7.0);
  const std::size_t n = 256;
  c.m.set("grid.N", std::to_string(N));
  c.grid(grid);
  c.m.set("grid.field_L", L);
  c.m.set("grid.field_n", std::to_string(n));
  const DbarHankel h = hankel_via_dbar(f, {1.0}, basis, grid, L, n);
  c.emit("dbar_check.csv", [&](std::ostream& os) {
    CsvWriter w(os, {"metric", "value"});
    w.cell("calibrated_c0").cell(cal.c0).end_row();
    w.cell("calibration_residual").cell(cal.residual).end_row();
    w.cell("norm_via_dbar").cell(h.norm_dbar).end_row();
    w.cell("norm_direct").cell(h.norm_direct).end_row();
    w.cell("relative_difference").cell(h.relative_difference).end_row();
    w.cell("solve_residual").cell(h.residual).end_row();
  });
  c.emit("dbar_field.csv", [&](std::ostream& os) { write_field_csv(os, h.value); });
  c.at_most("calibration_residual", cal.residual, c.cfg.tol("dbar_residual"));
  c.at_most("solve_residual", h.residual, c.cfg.tol("dbar_residual"));
  c.at_most("hankel_via_dbar_agreement", h.relative_difference, c.cfg.tol("dbar_hankel"));
}

void beurling_experiment(Context& c) {
  const Symbol f = symbol_from_spec(c.cfg.symbol);
  const double L = c.cfg.extent_or(8.0);
  c.m.set("grid.field_L", L);
  c.m.set("grid.field_n", "512");
  const double err = beurling_identity_error(f, L, 512);
  std::vector<double> exps{1.5, 2.0, 4.0};
  if (std::find(exps.begin(), exps.end(), c.cfg.s) == exps.end() && c.cfg.s > 1.0 && std::isfinite(c.cfg.s))
    exps.push_back(c.cfg.s);
  std::sort(exps.begin(), exps.end());
  std::vector<double> ratios;
  for (double s : exps) ratios.push_back(conjugate_gradient_bound_check(f, s));
  c.emit("beurling.csv", [&](std::ostream& os) {
    CsvWriter w(os, {"s", "conjugate_gradient_ratio"});
    for (std::size_t i = 0; i < exps.size(); ++i) w.cell(exps[i]).cell(ratios[i]).end_row();
  });
  c.m.set("result.identity_error", err);
  c.at_most("beurling_identity", err, c.cfg.tol("beurling"));
  c.truth("C_s_finite", std::all_of(ratios.begin(), ratios.end(), [](double v) { return std::isfinite(v); }));
}

void quantize_experiment(Context& c) {
  const Symbol f = symbol_from_spec(c.cfg.f.empty() ? c.cfg.symbol : c.cfg.f);
  const Symbol g = c.cfg.g.empty() ? f : symbol_from_spec(c.cfg.g);
  ScaleSchedule schedule = c.cfg.t.empty() ? ScaleSchedule::down_to(c.cfg.tmin) : ScaleSchedule{c.cfg.t};
  schedule.validate();
  const int N = c.cfg.N_or(200);
  const FockBasis basis(c.cfg.alpha, N);
  const auto grid = QuadratureGrid::for_degree(c.cfg.alpha, N);
  c.m.set("grid.N", std::to_string(N));
  c.grid(grid);
  const DefectTable tab = semiclassical_defect(f, g, schedule, basis, grid);
  c.emit("defect.csv", [&](std::ostream& os) { write_defect_csv(os, tab); });
  c.m.set("result.decay_ratio", tab.decay_ratio());
  c.m.set("result.verdict", to_string(defect_verdict(tab.decay_ratio())));
  double excess = -INFINITY;
  for (const auto& r : tab.rows) excess = std::max(excess, r.defect_norm - r.product_bound);
  c.at_most("factorization_bound_excess", excess, c.cfg.tol("factorization"));
}

void suite_experiment(Context& c, std::ostream& log) {
  AcceptanceOptions opts;
  opts.filter = c.cfg.filter;
  opts.fault = c.cfg.fault;
  opts.seed = c.cfg.seed;
  const auto results = run_acceptance(opts, &log);
  if (results.empty()) throw ConfigError("suite: filter '" + c.cfg.filter + "' selects no criterion");
  c.emit("suite.csv", [&](std::ostream& os) {
    CsvWriter w(os, {"criterion", "tag", "name", "passed", "seconds"});
    for (const auto& r : results)
      w.cell(r.criterion.id).cell(r.criterion.tag).cell(r.criterion.name).cell(r.passed() ? 1 : 0).cell(r.seconds)
          .end_row();
  });
  for (const auto& r : results) c.truth("criterion_" + std::to_string(r.criterion.id) + "_" + r.criterion.name, r.passed());
}

std::string eigen_version() {
  return std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION);
}

}  // namespace

int run(const ExperimentConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  Manifest m;
  m.set("fockbench.version", FOCKBENCH_VERSION);
  m.set("eigen.version", eigen_version());
  m.set("fftw.version", fftw_version);
  m.set("openblas.config", openblas_get_config());
  for (const auto& [k, v] : cfg.echo()) m.set("config." + k, v);

  int code = kExitOk;
  fs::path dir(cfg.output);
  try {
    cfg.validate();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
    Context c{cfg, m, dir};
    const std::string& e = cfg.experiment;
    if (e == "kernel-check") kernel_check(c);
    else if (e == "g-field") g_field_experiment(c);
    else if (e == "decompose") decompose_experiment(c);
    else if (e == "hankel") hankel_experiment(c);
    else if (e == "berger-coburn") berger_coburn_experiment(c);
    else if (e == "dbar-check") dbar_experiment(c);
    else if (e == "beurling") beurling_experiment(c);
    else if (e == "quantize") quantize_experiment(c);
    else suite_experiment(c, log);
    code = m.all_passed() ? kExitOk : kExitCheckFailed;
  } catch (const InvalidInput& ex) {
    m.set("error", ex.what());
    log << "configuration error: " << ex.what() << '\n';
    code = kExitConfig;
  } catch (const std::exception& ex) {
    m.set("error", ex.what());
    log << "check failed: " << ex.what() << '\n';
    code = kExitCheckFailed;
  }

  for (const auto& [k, v] : m.lines())
    if (k.rfind("check.", 0) == 0) log << k.substr(6) << ": " << v << '\n';
  m.set("wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  m.set("exit_code", std::to_string(code));
  if (fs::is_directory(dir)) {
    std::ofstream out(dir / "run.manifest");
    m.write(out);
  }
  return code;
}

}  // namespace fockbench
