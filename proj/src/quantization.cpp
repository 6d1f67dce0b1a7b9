#include "fockbench/quantization.hpp"

#include <algorithm>
#include <cmath>

#include "fockbench/csv.hpp"
#include "fockbench/ida.hpp"
#include "fockbench/operators.hpp"

namespace fockbench {

void ScaleSchedule::validate() const {
  if (t.empty()) throw InvalidInput("ScaleSchedule: empty");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0 && t[i] <= 1.0)) throw InvalidInput("ScaleSchedule: t = " + format_double(t[i]) + " outside (0, 1]");
    if (i > 0 && !(t[i] < t[i - 1])) throw InvalidInput("ScaleSchedule: not strictly decreasing");
  }
  if (t.back() < 0.01) throw InvalidInput("ScaleSchedule: min t below the 0.01 resolution guard");
}

ScaleSchedule ScaleSchedule::down_to(double tmin) {
  if (!(tmin > 0.0 && tmin <= 1.0)) throw InvalidInput("ScaleSchedule: tmin must lie in (0, 1]");
  ScaleSchedule s;
  for (double t = 1.0; t > tmin * (1.0 + 1e-12); t *= 0.5) s.t.push_back(t);
  s.t.push_back(tmin);
  s.validate();
  return s;
}

Symbol dilate_symbol(const Symbol& f, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw InvalidInput("dilate_symbol: t must lie in (0, 1]");
  if (t == 1.0) return f;
  const double s = std::sqrt(t);
  Symbol out = f;
  out.id = f.id + "@t=" + format_double(t);
  out.f = [g = f.f, s](cplx z) { return g(s * z); };
  if (f.d) out.d = [g = f.d, s](cplx z) { return s * g(s * z); };
  if (f.dbar) out.dbar = [g = f.dbar, s](cplx z) { return s * g(s * z); };
  return out;
}

double DefectTable::decay_ratio() const {
  if (rows.empty() || rows.front().defect_norm < 1e-12) return 0.0;
  return rows.back().defect_norm / rows.front().defect_norm;
}

namespace {

double spectral_norm(const Eigen::MatrixXcd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues()(0);
}

Eigen::MatrixXcd modulus_toeplitz(const CFunc& f, const FockBasis& basis, const QuadratureGrid& grid) {
  Eigen::MatrixXcd A = toeplitz_matrix([f](cplx z) { return cplx(std::norm(f(z))); }, basis, grid);
  return 0.5 * (A + A.adjoint());
}

}  // namespace

DefectTable semiclassical_defect(const Symbol& f, const Symbol& g, const ScaleSchedule& schedule,
                                 const FockBasis& basis, const QuadratureGrid& grid) {
  if (!f.bounded) throw InvalidInput("semiclassical_defect: symbol '" + f.id + "' is not bounded");
  if (!g.bounded) throw InvalidInput("semiclassical_defect: symbol '" + g.id + "' is not bounded");
  schedule.validate();
  const int m = basis.N() / 2 + 1;
  DefectTable table;
  table.f_id = f.id;
  table.g_id = g.id;
  for (double t : schedule.t) {
    const Symbol ft = dilate_symbol(f, t), gt = dilate_symbol(g, t);
    const auto Tf = toeplitz_matrix(ft.f, basis, grid);
    const auto Tg = toeplitz_matrix(gt.f, basis, grid);
    const auto Tfg = toeplitz_matrix([a = ft.f, b = gt.f](cplx z) { return a(z) * b(z); }, basis, grid);
    const Eigen::MatrixXcd D = (Tf * Tg - Tfg).topLeftCorner(m, m);

    GramPair hf;
    hf.N = basis.N();
    hf.T = Tf.adjoint();
    hf.A = modulus_toeplitz(ft.f, basis, grid);
    GramPair hg;
    hg.N = basis.N();
    hg.T = Tg;
    hg.A = modulus_toeplitz(gt.f, basis, grid);

    DefectRow row;
    row.t = t;
    row.defect_norm = spectral_norm(D);
    row.hankel_f_bar_norm = hankel_norm(hf);
    row.hankel_g_norm = hankel_norm(hg);
    row.product_bound = row.hankel_f_bar_norm * row.hankel_g_norm;
    table.rows.push_back(row);
  }
  return table;
}

void write_defect_csv(std::ostream& os, const DefectTable& table) {
  CsvWriter w(os, {"t", "defect_norm", "hankel_f_bar_norm", "hankel_g_norm", "product_bound"});
  for (const auto& r : table.rows)
    w.cell(r.t).cell(r.defect_norm).cell(r.hankel_f_bar_norm).cell(r.hankel_g_norm).cell(r.product_bound).end_row();
}

double hankel_scale_norm(const Symbol& f, double t, const FockBasis& basis, const QuadratureGrid& grid) {
  return hankel_norm(assemble(dilate_symbol(f, t), basis, grid));
}

double factorization_identity_error(const Symbol& f, const Symbol& g, const FockBasis& basis,
                                    const QuadratureGrid& grid) {
  if (grid.scheme() != Scheme::polar) throw InvalidInput("factorization_identity_error: polar grid required");
  const int n = basis.N() + 1, m = basis.N() / 2 + 1;
  const auto Tf = toeplitz_matrix(f.f, basis, grid);
  const auto Tg = toeplitz_matrix(g.f, basis, grid);
  const auto Tfg = toeplitz_matrix([a = f.f, b = g.f](cplx z) { return a(z) * b(z); }, basis, grid);
  const Eigen::MatrixXcd lhs = (Tf * Tg - Tfg).topLeftCorner(m, m);

  // Residual functions (I - P_N)(g e_k) and (I - P_N)(conj(f) e_j) in weighted form, ring by ring.
  const Eigen::MatrixXcd Tfbar = Tf.adjoint();
  const std::size_t na = grid.n_angles();
  Eigen::MatrixXcd E(na, n), Rg(na, m), Rf(na, m), HH = Eigen::MatrixXcd::Zero(m, m);
  Eigen::VectorXcd fv(na), gv(na);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < grid.radii().size(); ++i) {
    const double r = grid.radii()[i];
    basis.radial_factors(r, b.data());
    for (std::size_t l = 0; l < na; ++l) {
      const double th = grid.angle(l);
      const cplx z = std::polar(r, th);
      for (int k = 0; k < n; ++k) E(l, k) = b[k] * std::polar(1.0, k * th);
      fv(l) = std::conj(f.f(z));
      gv(l) = g.f(z);
    }
    Rg = gv.asDiagonal() * E.leftCols(m);
    Rg.noalias() -= E * Tg.leftCols(m);
    Rf = fv.asDiagonal() * E.leftCols(m);
    Rf.noalias() -= E * Tfbar.leftCols(m);
    HH.noalias() += (grid.ring_weights()[i] / static_cast<double>(na)) * (Rf.adjoint() * Rg);
  }
  return (lhs + HH).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd scaled_toeplitz_direct(const CFunc& f, double t, const FockBasis& basis, std::size_t n_per_axis) {
  if (!(t > 0.0 && t <= 1.0)) throw InvalidInput("scaled_toeplitz_direct: t must lie in (0, 1]");
  const double alpha = basis.alpha(), st = std::sqrt(t);
  const double R = st * (std::sqrt(2.0 * (basis.N() + 1) / alpha) + 6.0 / std::sqrt(alpha));
  std::vector<double> x, w;
  gauss_legendre(static_cast<int>(n_per_axis), -R, R, x, w);
  const int n = basis.N() + 1;
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd e(n);
  std::vector<double> b(n);
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t c = 0; c < x.size(); ++c) {
      const cplx z(x[a], x[c]);
      const cplx zs = z / st;
      // e^{(t)}_k(z) e^{-alpha |z|^2 / (2t)} = b_k(|z / sqrt t|) e^{i k arg z}.
      basis.radial_factors(std::abs(zs), b.data());
      const double th = std::arg(zs);
      for (int k = 0; k < n; ++k) e(k) = b[k] * std::polar(1.0, k * th);
      const cplx c0 = w[a] * w[c] / t * f(z);
      T.noalias() += c0 * (e.conjugate() * e.transpose());
    }
  }
  return T;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::positive: return "positive";
    case Verdict::negative: return "negative";
    case Verdict::indeterminate: break;
  }
  return "indeterminate";
}

Verdict defect_verdict(double decay_ratio) {
  if (decay_ratio < 0.25) return Verdict::positive;
  if (decay_ratio >= 0.5) return Verdict::negative;
  return Verdict::indeterminate;
}

ClassifyReport quantization_classify(const Symbol& f, double extent, int N) {
  ClassifyReport rep;
  const ScanTable scan = small_scale_scan(f, {1.0, 0.5, 0.25, 0.1}, disk_grid(1.0, extent));
  rep.vmo = scan.vmo_consistent ? Verdict::positive : Verdict::negative;
  rep.vda_conj = scan.vda_star_conj_consistent ? Verdict::positive : Verdict::negative;

  const FockBasis basis(1.0, N);
  const auto grid = QuadratureGrid::for_degree(1.0, N);
  const ScaleSchedule schedule{{1.0, 0.5, 0.25, 0.1}};
  double worst = 0.0;
  bool all_trivial = true;
  for (const Symbol& g : {conj(f), builtin("phase"), builtin("sinre")}) {
    rep.panel.push_back(semiclassical_defect(f, g, schedule, basis, grid));
    const auto& tab = rep.panel.back();
    if (tab.rows.front().defect_norm >= 1e-12) all_trivial = false;
    worst = std::max(worst, tab.decay_ratio());
  }
  rep.trivial = all_trivial;
  rep.defect = all_trivial ? Verdict::positive : defect_verdict(worst);
  rep.consistent = rep.vmo == rep.vda_conj && rep.vda_conj == rep.defect;
  return rep;
}

}  // namespace fockbench
