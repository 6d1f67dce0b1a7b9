#include "fockbench/ida.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "fockbench/csv.hpp"

namespace fockbench {

namespace {

constexpr int kMaxBasisDegree = 24;

// Unit-disk orthonormal basis sqrt((k+1)/pi) xi^k sampled on the standard rule.
const Eigen::MatrixXcd& unit_basis() {
  static const Eigen::MatrixXcd phi = [] {
    const DiskRule& rule = DiskRule::standard();
    Eigen::MatrixXcd m(rule.size(), kMaxBasisDegree + 1);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      cplx p = 1.0;
      for (int k = 0; k <= kMaxBasisDegree; ++k) {
        m(i, k) = std::sqrt((k + 1) / kPi) * p;
        p *= rule.nodes()[i];
      }
    }
    return m;
  }();
  return phi;
}

const DiskRule& certificate_rule() {
  static const DiskRule rule(12, 48);
  return rule;
}

Eigen::VectorXcd sample_disk(const CFunc& f, cplx z, double r) {
  const DiskRule& rule = DiskRule::standard();
  Eigen::VectorXcd v(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const cplx w = z + r * rule.nodes()[i];
    const cplx s = f(w);
    if (!finite(s)) throw InvalidInput("non-finite symbol sample at " + format_point(w));
    v(i) = s;
  }
  return v;
}

double mean_power(const Eigen::VectorXcd& v, const std::vector<double>& w, double q) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v(i));
    if (m > 0.0) s += w[i] * std::pow(m, q);
  }
  return std::pow(s / kPi, 1.0 / q);
}

double mean_over(const DiskRule& rule, const CFunc& f, double q, double r, cplx z) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const cplx w = z + r * rule.nodes()[i];
    const cplx v = f(w);
    if (!finite(v)) throw InvalidInput("non-finite symbol sample at " + format_point(w));
    const double m = std::abs(v);
    if (m > 0.0) s += rule.weights()[i] * std::pow(m, q);
  }
  return std::pow(s / kPi, 1.0 / q);
}

struct DegreeSolve {
  Eigen::VectorXcd coef;
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
  std::vector<double> history;
};

Eigen::VectorXcd weighted_lsq(const Eigen::MatrixXcd& phi, const Eigen::VectorXcd& f,
                              const Eigen::VectorXd& sqrt_w) {
  Eigen::MatrixXcd A = sqrt_w.asDiagonal() * phi;
  Eigen::VectorXcd b = sqrt_w.asDiagonal() * f;
  return A.colPivHouseholderQr().solve(b);
}

DegreeSolve solve_degree(const Eigen::VectorXcd& f, int d, const LocalApproxConfig& cfg) {
  const DiskRule& rule = DiskRule::standard();
  const auto& w = rule.weights();
  const Eigen::MatrixXcd phi = unit_basis().leftCols(d + 1);
  Eigen::VectorXd sqrt_w(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) sqrt_w(i) = std::sqrt(w[i]);

  DegreeSolve out;
  if (cfg.q == 2.0 && cfg.least_squares_route) {
    out.coef = weighted_lsq(phi, f, sqrt_w);
  } else {
    // Orthogonal projection: the discrete Gram matrix of the basis is the identity.
    Eigen::VectorXcd wf(f.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) wf(i) = w[i] * f(i);
    out.coef = phi.adjoint() * wf;
  }
  Eigen::VectorXcd res = f - phi * out.coef;
  out.value = mean_power(res, w, cfg.q);
  if (cfg.q == 2.0) return out;

  // IRLS for q != 2 started from the q = 2 solution.
  const double mf = mean_power(f, w, cfg.q);
  if (mf == 0.0) return out;
  const double eps = cfg.eps_rel * mf;
  Eigen::VectorXcd best = out.coef;
  double best_val = out.value, prev = out.value;
  out.history.push_back(out.value);
  out.converged = false;
  for (int it = 1; it <= cfg.irls_max_iter; ++it) {
    Eigen::VectorXd sw(f.size());
    for (Eigen::Index i = 0; i < f.size(); ++i)
      sw(i) = std::sqrt(w[i] * std::pow(std::norm(res(i)) + eps * eps, 0.5 * (cfg.q - 2.0)));
    Eigen::VectorXcd coef = weighted_lsq(phi, f, sw);
    res = f - phi * coef;
    const double val = mean_power(res, w, cfg.q);
    out.history.push_back(val);
    out.iterations = it;
    if (val < best_val) {
      best_val = val;
      best = coef;
    }
    if (std::abs(prev - val) <= cfg.irls_tol * std::max(val, 1e-300) || val <= 1e-14 * mf) {
      out.converged = true;
      break;
    }
    prev = val;
  }
  out.coef = best;
  out.value = best_val;
  return out;
}

LocalPoly to_poly(const Eigen::VectorXcd& coef, cplx z, double r) {
  LocalPoly h;
  h.center = z;
  h.radius = r;
  h.a.resize(coef.size());
  for (Eigen::Index k = 0; k < coef.size(); ++k) h.a[k] = coef(k) * std::sqrt((k + 1) / kPi);
  return h;
}

}  // namespace

void LocalApproxConfig::validate() const {
  if (!(q > 0.0) || !std::isfinite(q)) throw InvalidInput("LocalApproxConfig: q must be > 0");
  if (!(r > 0.0)) throw InvalidInput("LocalApproxConfig: r must be > 0");
  if (degree < 0) throw InvalidInput("LocalApproxConfig: degree must be >= 0");
  if (max_degree + 2 > kMaxBasisDegree || degree > max_degree)
    throw InvalidInput("LocalApproxConfig: degree out of supported range");
  if (!(eps_rel > 0.0)) throw InvalidInput("LocalApproxConfig: eps_w must be > 0");
  if (irls_max_iter < 1 || !(irls_tol > 0.0)) throw InvalidInput("LocalApproxConfig: IRLS cap/tolerance invalid");
}

cplx LocalPoly::operator()(cplx w) const {
  const cplx xi = (w - center) / radius;
  cplx v = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) v = v * xi + *it;
  return v;
}

cplx LocalPoly::derivative(cplx w) const {
  const cplx xi = (w - center) / radius;
  cplx v = 0.0;
  for (std::size_t k = a.size(); k-- > 1;) v = v * xi + static_cast<double>(k) * a[k];
  return v / radius;
}

double mean_M(const CFunc& f, double q, double r, cplx z) {
  if (!(q > 0.0) || !(r > 0.0)) throw InvalidInput("mean_M: need q, r > 0");
  return mean_over(DiskRule::standard(), f, q, r, z);
}

double mean_M(const Symbol& f, double q, double r, cplx z) { return mean_M(f.f, q, r, z); }

LocalApproxResult local_best_holo(const CFunc& f, const LocalApproxConfig& cfg, cplx z) {
  cfg.validate();
  const Eigen::VectorXcd fs = sample_disk(f, z, cfg.r);
  const auto& w = DiskRule::standard().weights();
  LocalApproxResult out;
  out.upper_bound_only = cfg.q < 1.0;
  out.mean_f = mean_power(fs, w, cfg.q);

  int d = cfg.degree;
  DegreeSolve cur = solve_degree(fs, d, cfg);
  if (cfg.adaptive_degree) {
    out.degree_stable = false;
    while (d + 2 <= cfg.max_degree + 2) {
      DegreeSolve next = solve_degree(fs, d + 2, cfg);
      out.sweep_delta = std::abs(cur.value - next.value);
      if (out.sweep_delta < cfg.sweep_tol) {
        out.degree_stable = true;
        break;
      }
      if (d + 2 > cfg.max_degree) break;
      d += 2;
      cur = std::move(next);
    }
  }
  out.degree = d;
  out.value = cur.value;
  out.converged = cur.converged;
  out.iterations = cur.iterations;
  out.residual_history = std::move(cur.history);
  out.h = to_poly(cur.coef, z, cfg.r);

  double sup_h = 0.0;
  for (int l = 0; l < 64; ++l)
    sup_h = std::max(sup_h, std::abs(out.h(z + 0.5 * cfg.r * std::polar(1.0, 2 * kPi * l / 64))));
  out.boundedness_ratio = out.mean_f > 0.0 ? sup_h / out.mean_f : 0.0;
  return out;
}

LocalApproxResult local_best_holo(const Symbol& f, const LocalApproxConfig& cfg, cplx z) {
  return local_best_holo(f.f, cfg, z);
}

double G(const CFunc& f, const LocalApproxConfig& cfg, cplx z) { return local_best_holo(f, cfg, z).value; }
double G(const Symbol& f, const LocalApproxConfig& cfg, cplx z) { return G(f.f, cfg, z); }

LocalPoly local_projection(const CFunc& f, cplx z, double r, int d) {
  if (d < 0 || d > kMaxBasisDegree) throw InvalidInput("local_projection: degree out of range");
  if (!(r > 0.0)) throw InvalidInput("local_projection: r must be > 0");
  LocalApproxConfig cfg;
  cfg.q = 2.0;
  cfg.r = r;
  cfg.adaptive_degree = false;
  const Eigen::VectorXcd fs = sample_disk(f, z, r);
  return to_poly(solve_degree(fs, d, cfg).coef, z, r);
}

LocalPoly local_projection(const Symbol& f, cplx z, double r, int d) { return local_projection(f.f, z, r, d); }

double projection_chain_ratio(const Symbol& f, cplx z, double r, double s, cplx w, int d) {
  if (!(s < r) || std::abs(w - z) > 0.5 * (r - s) + 1e-12)
    throw InvalidInput("projection_chain_ratio: need s < r and w in B(z,(r-s)/2)");
  LocalPoly P = local_projection(f, z, r, d);
  auto fn = f.f;
  const double num = mean_M([&](cplx x) { return fn(x) - P(x); }, 2.0, s, w);
  LocalApproxConfig cfg;
  cfg.r = r;
  cfg.degree = d;
  cfg.adaptive_degree = false;
  const double den = G(f, cfg, z);
  return den > 1e-12 ? num / den : (num < 1e-10 ? 0.0 : INFINITY);
}

GField g_field(const Symbol& f, const LocalApproxConfig& cfg, const std::vector<cplx>& centers) {
  GField g;
  g.cfg = cfg;
  g.centers = centers;
  g.values.reserve(centers.size());
  for (cplx z : centers) {
    auto res = local_best_holo(f, cfg, z);
    if (!res.converged || !res.degree_stable) ++g.flagged;
    g.values.push_back(std::max(res.value, 0.0));
  }
  return g;
}

void write_gfield_csv(const GField& g, std::ostream& os) {
  CsvWriter w(os, {"center_re", "center_im", "q", "r", "degree", "value"});
  for (std::size_t i = 0; i < g.centers.size(); ++i)
    w.cell(g.centers[i].real()).cell(g.centers[i].imag()).cell(g.cfg.q).cell(g.cfg.r).cell(g.cfg.degree)
        .cell(g.values[i])
        .end_row();
}

std::vector<cplx> disk_grid(double spacing, double extent) {
  if (!(spacing > 0.0) || !(extent > 0.0)) throw InvalidInput("disk_grid: spacing and extent must be > 0");
  std::vector<cplx> out;
  const int n = static_cast<int>(std::floor(extent / spacing + 1e-12));
  for (int j = -n; j <= n; ++j)
    for (int i = -n; i <= n; ++i) {
      const cplx z(i * spacing, j * spacing);
      if (std::abs(z) <= extent * (1.0 + 1e-12)) out.push_back(z);
    }
  return out;
}

ExponentTriple make_exponents(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw InvalidInput("make_exponents: p, q must be > 0");
  ExponentTriple e{p, q, INFINITY};
  if (p > q) e.s = p * q / (p - q);
  return e;
}

SeminormResult seminorm_IDA(const Symbol& f, double s, double q, double r, double extent) {
  if (!(s > 0.0)) throw InvalidInput("seminorm_IDA: s must be > 0");
  LocalApproxConfig cfg;
  cfg.q = q;
  cfg.r = r;
  SeminormResult out;
  out.field = g_field(f, cfg, disk_grid(0.5, extent));
  const auto& c = out.field.centers;
  const auto& v = out.field.values;
  const double band = extent - 1.0;
  if (std::isinf(s)) {
    double inner_max = 0.0, outer_max = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (std::abs(c[i]) > band) outer_max = std::max(outer_max, v[i]);
      else inner_max = std::max(inner_max, v[i]);
    }
    out.value = std::max(inner_max, outer_max);
    if (outer_max > 1.01 * inner_max + 1e-12) {
      out.extent_sufficient = false;
      out.flag = "extent insufficient";
    }
  } else {
    // Cell quadrature with cell area spacing^2.
    double total = 0.0, outer = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double term = 0.25 * std::pow(v[i], s);
      total += term;
      if (std::abs(c[i]) > band) outer += term;
    }
    out.value = std::pow(total, 1.0 / s);
    if (total > 0.0 && outer > 0.01 * total) {
      out.extent_sufficient = false;
      out.flag = "extent insufficient";
    }
  }
  return out;
}

RingTable ring_maxima(const CFunc& field, double r, const std::vector<double>& radii) {
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw InvalidInput("ring radii must be increasing");
  RingTable t;
  t.r = r;
  t.radii = radii;
  for (double R : radii) {
    const int n = R <= 0.0 ? 1 : std::max(8, static_cast<int>(std::ceil(2 * kPi * R / 0.5)));
    double m = 0.0;
    for (int l = 0; l < n; ++l) m = std::max(m, std::abs(field(std::polar(R, 2 * kPi * l / n))));
    t.maxima.push_back(m);
  }
  if (!t.maxima.empty()) t.decaying = t.maxima.back() < 0.2 * t.maxima.front();
  return t;
}

VdaReport vda_probe(const Symbol& f, double q, double r, const std::vector<double>& radii) {
  VdaReport rep;
  for (int pass = 0; pass < 2; ++pass) {
    LocalApproxConfig cfg;
    cfg.q = q;
    cfg.r = pass == 0 ? r : 0.5 * r;
    auto t = ring_maxima([&](cplx z) { return cplx(G(f, cfg, z)); }, cfg.r, radii);
    (pass == 0 ? rep.first : rep.second) = t;
  }
  rep.verdicts_agree = rep.first.decaying == rep.second.decaying;
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Decompositions

double Decomposition::Certificates::max_ratio() const {
  return std::max({ratio_dbar_f1, ratio_mean_dbar_f1, ratio_mean_f2});
}

const LocalPoly& Decomposition::piece(std::size_t j) const {
  auto& slot = cache_[j];
  if (!slot) {
    const cplx a = pou_->centers()[j];
    if (projection_) {
      slot = local_projection(f_, a, local_radius_, degree_);
    } else {
      LocalApproxConfig cfg;
      cfg.q = q_;
      cfg.r = local_radius_;
      cfg.degree = degree_;
      cfg.adaptive_degree = false;
      auto res = local_best_holo(f_, cfg, a);
      if (!res.converged) ++flagged_;
      slot = std::move(res.h);
    }
  }
  return *slot;
}

cplx Decomposition::f1(cplx z) const {
  cplx s = 0.0;
  for (auto& m : pou_->members(z)) s += m.psi * piece(m.j)(z);
  return s;
}

cplx Decomposition::dbar_f1(cplx z) const {
  cplx s = 0.0;
  for (auto& m : pou_->members(z)) s += m.dbar_psi * piece(m.j)(z);
  return s;
}

Decomposition build_decomposition(const Symbol& f, double q, double partition_R, double local_r,
                                  double extent, bool projection, double probe_spacing) {
  if (!(partition_R > 0.0) || !(local_r > 0.0)) throw InvalidInput("decompose: scales must be > 0");
  if (!(q > 0.0)) throw InvalidInput("decompose: q must be > 0");
  Decomposition D;
  D.f_ = f;
  D.q_ = q;
  D.t_ = partition_R;
  D.projection_ = projection;
  D.degree_ = 10;
  D.local_radius_ = local_r;
  D.pou_ = std::make_shared<PartitionOfUnity>(make_lattice(0.5 * partition_R, extent + partition_R), partition_R);
  D.cache_.assign(D.pou_->size(), std::nullopt);

  if (probe_spacing > 0.0) {
    const double t = partition_R;
    auto& c = D.cert_;
    LocalApproxConfig gcfg;
    gcfg.q = q;
    gcfg.r = 2.0 * t;
    const DiskRule& rule = certificate_rule();
    auto f2 = [&D](cplx z) { return D.f2(z); };
    auto df1 = [&D](cplx z) { return D.dbar_f1(z); };
    for (cplx z : disk_grid(probe_spacing, extent)) {
      auto gres = local_best_holo(f, gcfg, z);
      if (!gres.converged) ++c.flagged_solves;
      const double g = gres.value;
      const double a = std::abs(D.dbar_f1(z));
      const double b = mean_over(rule, df1, q, 0.5 * t, z);
      const double e = mean_over(rule, f2, q, 0.5 * t, z);
      ++c.probes;
      c.sup_dbar_f1 = std::max(c.sup_dbar_f1, a);
      c.sup_mean_dbar_f1 = std::max(c.sup_mean_dbar_f1, b);
      c.sup_mean_f2 = std::max(c.sup_mean_f2, e);
      if (g < 1e-8) {
        ++c.skipped;
        if (std::max({a, b, e}) > 1e-6) c.ratio_dbar_f1 = c.ratio_mean_dbar_f1 = c.ratio_mean_f2 = INFINITY;
        continue;
      }
      c.ratio_dbar_f1 = std::max(c.ratio_dbar_f1, a / g);
      c.ratio_mean_dbar_f1 = std::max(c.ratio_mean_dbar_f1, b / g);
      c.ratio_mean_f2 = std::max(c.ratio_mean_f2, e / g);
    }
    c.flagged_solves += D.flagged_;
  }
  return D;
}

Decomposition decompose(const Symbol& f, double q, double t, double extent, double probe_spacing) {
  if (!(t > 0.0)) throw InvalidInput("decompose: t must be > 0");
  return build_decomposition(f, q, t, t, extent, false, probe_spacing);
}

Decomposition decompose_proj(const Symbol& f, double q, double t, double extent, double probe_spacing) {
  if (!(q >= 1.0)) throw InvalidInput("decompose_proj: q must be >= 1");
  if (!(t > 0.0)) throw InvalidInput("decompose_proj: t must be > 0");
  return build_decomposition(f, q, t, t, extent, true, probe_spacing);
}

// ---------------------------------------------------------------------------------------------

double MO(const CFunc& f, double r, cplx z) {
  if (!(r > 0.0)) throw InvalidInput("MO: r must be > 0");
  const Eigen::VectorXcd fs = sample_disk(f, z, r);
  const auto& w = DiskRule::standard().weights();
  cplx avg = 0.0;
  for (Eigen::Index i = 0; i < fs.size(); ++i) avg += w[i] * fs(i);
  avg /= kPi;
  Eigen::VectorXcd dev = fs.array() - avg;
  return mean_power(dev, w, 2.0);
}

double MO(const Symbol& f, double r, cplx z) { return MO(f.f, r, z); }

BmoBdaReport bmo_bda_check(const Symbol& f, const std::vector<double>& radii, const std::vector<cplx>& grid) {
  BmoBdaReport rep;
  const Symbol fc = conj(f);
  for (double r : radii) {
    LocalApproxConfig cfg;
    cfg.r = r;
    for (cplx z : grid) {
      const double g1 = G(f, cfg, z), g2 = G(fc, cfg, z);
      rep.max_conjugation_asymmetry = std::max(rep.max_conjugation_asymmetry, std::abs(g1 - g2));
      const double mo = MO(f, r, z);
      const double den = g1 + g2;
      if (den < 1e-8) {
        ++rep.skipped;
        continue;
      }
      ++rep.points;
      rep.C1 = std::min(rep.C1, mo / den);
      rep.C2 = std::max(rep.C2, mo / den);
    }
  }
  return rep;
}

ScanTable small_scale_scan(const Symbol& f, const std::vector<double>& schedule, const std::vector<cplx>& grid) {
  if (schedule.empty()) throw InvalidInput("small_scale_scan: empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i] < schedule[i - 1])) throw InvalidInput("small_scale_scan: schedule must be decreasing");
  if (schedule.back() < 2.0 * kScanResolution)
    throw InvalidInput("small_scale_scan: resolution guard violated (min r < 2 x quadrature resolution)");
  ScanTable t;
  t.radii = schedule;
  const Symbol fc = conj(f);
  for (double r : schedule) {
    LocalApproxConfig cfg;
    cfg.r = r;
    double mo = 0.0, g = 0.0, gc = 0.0;
    for (cplx z : grid) {
      mo = std::max(mo, MO(f, r, z));
      g = std::max(g, G(f, cfg, z));
      gc = std::max(gc, G(fc, cfg, z));
    }
    t.sup_mo.push_back(mo);
    t.sup_g.push_back(g);
    t.sup_g_conj.push_back(gc);
  }
  auto decays = [](const std::vector<double>& v) { return v.back() < 0.2 * v.front() || v.front() < 1e-12; };
  t.vmo_consistent = decays(t.sup_mo);
  t.vda_star_consistent = decays(t.sup_g);
  t.vda_star_conj_consistent = decays(t.sup_g_conj);
  return t;
}

double averaging_function(const Measure& mu, double r, cplx z) {
  if (!(r > 0.0)) throw InvalidInput("averaging_function: r must be > 0");
  double s = 0.0;
  for (auto& [a, m] : mu.atoms) {
    if (m < 0.0) throw InvalidInput("averaging_function: negative point mass");
    if (std::abs(a - z) < r) s += m;
  }
  if (mu.density) {
    const DiskRule& rule = DiskRule::standard();
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double d = mu.density(z + r * rule.nodes()[i]);
      if (d < 0.0) throw InvalidInput("averaging_function: negative density");
      s += r * r * rule.weights()[i] * d;
    }
  }
  return s;
}

ImoReport imo_check(const Symbol& f, double s, double q, double extent) {
  ImoReport rep;
  rep.f = seminorm_IDA(f, s, q, 1.0, extent);
  const Symbol fc = conj(f);
  rep.f_conj = seminorm_IDA(fc, s, q, 1.0, extent);
  rep.both_finite = std::isfinite(rep.f.value) && std::isfinite(rep.f_conj.value);
  std::vector<double> radii;
  for (double R = 1.0; R <= extent - 1.0 + 1e-12; R *= 2.0) radii.push_back(R);
  if (radii.size() < 2) radii = {0.0, std::max(extent - 1.0, 0.5)};
  LocalApproxConfig cfg;
  cfg.q = q;
  auto d1 = ring_maxima([&](cplx z) { return cplx(G(f, cfg, z)); }, 1.0, radii);
  auto d2 = ring_maxima([&](cplx z) { return cplx(G(fc, cfg, z)); }, 1.0, radii);
  auto dec = [](const RingTable& t) { return t.decaying || t.maxima.front() < 1e-12; };
  rep.both_decaying = dec(d1) && dec(d2);
  return rep;
}

}  // namespace fockbench
