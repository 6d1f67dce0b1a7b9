#include "fockbench/operators.hpp"

#include <algorithm>
#include <cmath>

#include "fockbench/csv.hpp"

namespace fockbench {

namespace {

std::vector<cplx> unit_directions(const QuadratureGrid& grid) {
  std::vector<cplx> d(grid.n_angles());
  for (std::size_t l = 0; l < d.size(); ++l) d[l] = std::polar(1.0, grid.angle(l));
  return d;
}

void check_growth(const CFunc& f, const FockBasis& basis, const QuadratureGrid& grid,
                  const std::vector<cplx>& dirs) {
  std::vector<double> b(basis.dim());
  auto envelope = [&](double r) {
    basis.radial_factors(r, b.data());
    return *std::max_element(b.begin(), b.end());
  };
  auto ring_max = [&](double r) {
    double m = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, dirs.size() / 32);
    for (std::size_t l = 0; l < dirs.size(); l += stride) m = std::max(m, std::abs(f(r * dirs[l])));
    return m;
  };
  const double R = grid.r_max();
  const double e = envelope(R);
  const double tail = std::pow(ring_max(R) * e * e, 1.0);
  double peak = 0.0;
  const auto& radii = grid.radii();
  for (std::size_t i = 0; i < radii.size(); i += 10) {
    const double en = envelope(radii[i]);
    peak = std::max(peak, ring_max(radii[i]) * en * en);
  }
  if (tail > 1e-8 * peak)
    throw InvalidInput("assemble: growth check failed (integrand at R_max is " + std::to_string(tail / peak) +
                       " of its peak)");
}

}  // namespace

Eigen::MatrixXcd toeplitz_matrix(const CFunc& f, const FockBasis& basis, const QuadratureGrid& grid) {
  if (grid.scheme() != Scheme::polar) throw InvalidInput("assemble: polar grid required");
  const int N = basis.N();
  const std::size_t na = grid.n_angles();
  if (na < static_cast<std::size_t>(2 * N + 2)) throw InvalidInput("assemble: grid has too few angles for N");
  const auto dirs = unit_directions(grid);
  check_growth(f, basis, grid, dirs);

  const int n = N + 1;
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(n, n);
  AngularFft fft(na);
  std::vector<cplx> s(na), modes(na);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < grid.radii().size(); ++i) {
    const double r = grid.radii()[i];
    for (std::size_t l = 0; l < na; ++l) {
      s[l] = f(r * dirs[l]);
      if (!finite(s[l])) throw InvalidInput("assemble: non-finite sample at node " + format_point(r * dirs[l]));
    }
    fft.forward(s.data(), modes.data());
    basis.radial_factors(r, b.data());
    const double w = grid.ring_weights()[i];
    for (int k = 0; k < n; ++k) {
      const double wk = w * b[k];
      if (wk == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        const int m = j - k;
        T(j, k) += (wk * b[j]) * modes[m >= 0 ? m : static_cast<int>(na) + m];
      }
    }
  }
  return T;
}

GramPair assemble(const Symbol& f, const FockBasis& basis, const QuadratureGrid& grid) {
  GramPair gp;
  gp.N = basis.N();
  gp.alpha = basis.alpha();
  gp.r_max = grid.r_max();
  gp.symbol_id = f.id;
  auto fn = f.f;
  gp.T = toeplitz_matrix(fn, basis, grid);
  gp.A = toeplitz_matrix([fn](cplx z) { return cplx(std::norm(fn(z))); }, basis, grid);
  gp.hermitian_defect = (gp.A - gp.A.adjoint()).cwiseAbs().maxCoeff();
  gp.A = 0.5 * (gp.A + gp.A.adjoint()).eval();
  return gp;
}

GramPair conjugate_pair(const GramPair& gp) {
  GramPair c = gp;
  c.T = gp.T.adjoint();
  c.symbol_id = "conj(" + gp.symbol_id + ")";
  return c;
}

Eigen::MatrixXcd hankel_gram(const GramPair& gp, int block) {
  block = std::clamp(block, 1, gp.N + 1);
  const auto Tb = gp.T.leftCols(block);
  Eigen::MatrixXcd H = gp.A.topLeftCorner(block, block) - Tb.adjoint() * Tb;
  return 0.5 * (H + H.adjoint());
}

double hankel_norm(const GramPair& gp, int block) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hankel_gram(gp, block), Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

double hankel_norm(const GramPair& gp) { return hankel_norm(gp, gp.guarded()); }

double hankel_gram_min_eig(const GramPair& gp) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hankel_gram(gp, gp.guarded()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

int probe_degree(double alpha, double R) {
  const double sa = std::sqrt(alpha);
  return static_cast<int>(std::ceil(alpha * R * R + 7.0 * sa * R + 20.0));
}

double hankel_on_kernel(const CFunc& f, cplx z, const FockBasis& basis, const QuadratureGrid& grid) {
  const double alpha = basis.alpha();
  const double R = std::abs(z);
  const double sa = std::sqrt(alpha);
  if (R > grid.r_max() - 3.0 || alpha * R * R + 7.0 * sa * R + 10.0 > basis.N())
    throw InvalidInput("compact_probe: ring radius " + std::to_string(R) + " too close to truncation (N = " +
                       std::to_string(basis.N()) + ")");
  const auto& radii = grid.radii();
  const double band = 9.0 / sa;
  const std::size_t i0 = std::lower_bound(radii.begin(), radii.end(), R - band) - radii.begin();
  const std::size_t i1 = std::upper_bound(radii.begin(), radii.end(), R + band) - radii.begin();
  const auto dirs = unit_directions(grid);
  const double lead = 0.5 * std::log(alpha / kPi) - 0.5 * alpha * R * R;
  const cplx zc = std::conj(z);
  auto sampler = [&](double r, std::vector<cplx>& s) {
    const double g = lead - 0.5 * alpha * r * r;
    for (std::size_t l = 0; l < dirs.size(); ++l) {
      const cplx xi = r * dirs[l];
      s[l] = f(xi) * std::exp(alpha * xi * zc + g);
    }
  };
  auto pr = project_weighted(sampler, basis, grid, i0, i1);
  double captured = 0.0;
  for (cplx c : pr.coeffs) captured += std::norm(c);
  return std::sqrt(std::max(pr.norm_sq - captured, 0.0));
}

double ProbeTable::variation() const {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
}

namespace {

ProbeTable ring_table(const std::vector<double>& radii, int angles, const std::function<double(cplx)>& value) {
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw InvalidInput("probe: ring radii must be increasing");
  ProbeTable t;
  t.radii = radii;
  for (double R : radii) {
    const int n = R > 0.0 ? std::max(1, angles) : 1;
    double m = 0.0;
    for (int l = 0; l < n; ++l) m = std::max(m, value(std::polar(R, 2.0 * kPi * (l + 0.5) / n)));
    t.values.push_back(m);
  }
  if (!t.values.empty()) t.decaying = t.values.back() < 0.2 * t.values.front();
  return t;
}

}  // namespace

ProbeTable compact_probe(const Symbol& f, const std::vector<double>& radii, const FockBasis& basis,
                         const QuadratureGrid& grid, int angles) {
  auto fn = f.f;
  return ring_table(radii, angles, [&](cplx z) { return hankel_on_kernel(fn, z, basis, grid); });
}

ProbeTable compact_probe_auto(const Symbol& f, const std::vector<double>& radii, double alpha, int angles) {
  const double Rm = radii.empty() ? 0.0 : *std::max_element(radii.begin(), radii.end());
  FockBasis basis(alpha, probe_degree(alpha, Rm));
  QuadratureGrid grid = QuadratureGrid::for_degree(alpha, basis.N());
  return compact_probe(f, radii, basis, grid, angles);
}

double stroethoff_value(const CFunc& f, cplx lambda, const FockBasis& basis, const QuadratureGrid& grid) {
  if (std::abs(lambda) > grid.r_max() - 3.0) throw InvalidInput("stroethoff_probe: |lambda| > R_max - 3");
  const double alpha = basis.alpha();
  const auto dirs = unit_directions(grid);
  auto sampler = [&](double r, std::vector<cplx>& s) {
    const double g = std::exp(-0.5 * alpha * r * r);
    for (std::size_t l = 0; l < dirs.size(); ++l) s[l] = f(r * dirs[l] + lambda) * g;
  };
  auto pr = project_weighted(sampler, basis, grid);
  double captured = 0.0;
  for (cplx c : pr.coeffs) captured += std::norm(c);
  return std::sqrt(std::max(pr.norm_sq - captured, 0.0));
}

StroethoffTable stroethoff_probe(const Symbol& f, const std::vector<double>& radii, const FockBasis& basis,
                                 const QuadratureGrid& grid, int angles) {
  StroethoffTable out;
  out.unbounded_warning = !f.bounded;
  auto fn = f.f;
  out.table = ring_table(radii, angles, [&](cplx l) { return stroethoff_value(fn, l, basis, grid); });
  return out;
}

LowerBoundReport hankel_lower_bound_check(const Symbol& f, const std::vector<cplx>& grid, double r0,
                                          double alpha) {
  if (!(r0 > 0.0) || r0 > 1.0) throw InvalidInput("hankel_lower_bound_check: r0 must lie in (0, 1]");
  FockBasis basis(alpha, 60);
  QuadratureGrid qg = QuadratureGrid::for_degree(alpha, basis.N());
  LocalApproxConfig cfg;
  cfg.r = r0;
  LowerBoundReport rep;
  const double scale = std::sqrt(alpha / kPi);
  for (cplx z : grid) {
    const double g = G(f, cfg, z);
    if (g < 1e-8) {
      ++rep.skipped;
      continue;
    }
    const double h = scale * stroethoff_value(f.f, z, basis, qg);
    rep.points.push_back(z);
    rep.ratios.push_back(h / g);
    rep.min_ratio = std::min(rep.min_ratio, h / g);
    rep.max_ratio = std::max(rep.max_ratio, h / g);
  }
  rep.vacuous = rep.points.empty();
  return rep;
}

BergerCoburnReport berger_coburn_compare(const Symbol& f, const FockBasis& basis, const QuadratureGrid& grid,
                                         const std::vector<double>& rings, int angles) {
  if (!f.bounded) throw InvalidInput("berger_coburn_compare: symbol '" + f.id + "' is not bounded");
  BergerCoburnReport rep;
  GramPair gp = assemble(f, basis, grid);
  rep.norm_f = hankel_norm(gp);
  rep.norm_fbar = hankel_norm(conjugate_pair(gp));
  rep.norm_ratio = rep.norm_f > 0.0 ? rep.norm_fbar / rep.norm_f : (rep.norm_fbar > 0.0 ? INFINITY : 1.0);
  const Symbol fc = conj(f);
  rep.probe_f = compact_probe_auto(f, rings, basis.alpha(), angles);
  rep.probe_fbar = compact_probe_auto(fc, rings, basis.alpha(), angles);
  rep.verdicts_agree = rep.probe_f.decaying == rep.probe_fbar.decaying;
  return rep;
}

SeminormRatio seminorm_vs_norm(const Symbol& f, const FockBasis& basis, const QuadratureGrid& grid, double extent) {
  SeminormRatio out;
  out.hankel_norm = hankel_norm(assemble(f, basis, grid));
  out.seminorm = seminorm_IDA(f, INFINITY, 2.0, 1.0, extent).value;
  if (out.seminorm < 1e-8) {
    if (out.hankel_norm > 1e-3)
      throw InvariantViolation("seminorm_vs_norm: zero BDA seminorm with Hankel norm " +
                               std::to_string(out.hankel_norm));
    out.vacuous = true;
    out.ratio = 0.0;
    return out;
  }
  out.ratio = out.hankel_norm / out.seminorm;
  return out;
}

void write_operator_report(std::ostream& os, const std::string& symbol_id, int N, double r_max, double norm,
                           const ProbeTable& table) {
  CsvWriter w(os, {"symbol_id", "N", "R_max", "hankel_norm", "ring_radius", "probe_value"});
  for (std::size_t i = 0; i < table.radii.size(); ++i)
    w.cell(symbol_id).cell(N).cell(r_max).cell(norm).cell(table.radii[i]).cell(table.values[i]).end_row();
}

}  // namespace fockbench
