#include "fockbench/fockcore.hpp"

#include <algorithm>
#include <cmath>

namespace fockbench {

Weight Weight::standard(double alpha) {
  if (!(alpha > 0.0)) throw InvalidInput("Weight::standard: alpha must be > 0");
  Weight w;
  w.kind_ = WeightKind::standard;
  w.name_ = "standard";
  w.alpha_ = alpha;
  w.phi_ = [alpha](cplx z) { return 0.5 * alpha * std::norm(z); };
  w.dphi_ = [alpha](cplx z) { return 0.5 * alpha * std::conj(z); };
  w.bounds_ = {alpha, alpha};
  return w;
}

Weight Weight::fock_sobolev() {
  Weight w;
  w.kind_ = WeightKind::fock_sobolev;
  w.name_ = "fock-sobolev";
  w.phi_ = [](cplx z) { return std::norm(z) - 0.5 * std::log1p(std::norm(z)); };
  w.dphi_ = [](cplx z) { return std::conj(z) * (1.0 - 0.5 / (1.0 + std::norm(z))); };
  w.bounds_ = {1.0, 17.0 / 8.0};
  return w;
}

Weight Weight::custom(std::string name, std::function<double(cplx)> phi, CFunc dphi,
                      HessianBounds bounds) {
  if (!(bounds.m > 0.0) || bounds.m > bounds.M)
    throw InvalidInput("Weight::custom: need 0 < m <= M");
  Weight w;
  w.kind_ = WeightKind::custom;
  w.name_ = std::move(name);
  w.phi_ = std::move(phi);
  w.dphi_ = std::move(dphi);
  w.bounds_ = bounds;
  return w;
}

void Weight::require_standard(const std::string& op) const {
  if (kind_ != WeightKind::standard)
    throw InvalidInput(op + ": requires the standard weight (no closed-form kernel for '" +
                       name_ + "')");
}

std::pair<double, double> differenced_hessian_eigs(const Weight& w, cplx z, double step) {
  auto f = [&](double dx, double dy) { return w.evaluate(z + cplx(dx, dy)); };
  const double f0 = f(0, 0);
  const double fxx = (f(step, 0) - 2 * f0 + f(-step, 0)) / (step * step);
  const double fyy = (f(0, step) - 2 * f0 + f(0, -step)) / (step * step);
  const double fxy =
      (f(step, step) - f(step, -step) - f(-step, step) + f(-step, -step)) / (4 * step * step);
  const double mean = 0.5 * (fxx + fyy);
  const double rad = std::hypot(0.5 * (fxx - fyy), fxy);
  return {mean - rad, mean + rad};
}

void check_weight_invariants(const Weight& w, const std::vector<cplx>& samples) {
  const auto [m, M] = w.hessian_bounds();
  if (!(m > 0.0) || m > M) throw InvariantViolation("Weight: hessian bounds need 0 < m <= M");
  const double eps = 1e-4 * M;
  for (cplx z : samples) {
    auto [lo, hi] = differenced_hessian_eigs(w, z);
    if (lo < m - eps || hi > M + eps)
      throw InvariantViolation("Weight '" + w.name() + "': differenced Hessian eigenvalues [" +
                               std::to_string(lo) + ", " + std::to_string(hi) +
                               "] outside hessian_bounds at " + format_point(z));
  }
}

FockBasis::FockBasis(double alpha, int N) : alpha_(alpha), N_(N) {
  if (!(alpha > 0.0)) throw InvalidInput("FockBasis: alpha must be > 0");
  if (N < 0) throw InvalidInput("FockBasis: N must be >= 0");
  log_c_.resize(N + 1);
  for (int k = 0; k <= N; ++k)
    log_c_[k] = 0.5 * ((k + 1) * std::log(alpha) - std::log(kPi) - std::lgamma(k + 1.0));
}

cplx FockBasis::eval(int k, cplx z) const {
  if (k == 0) return c(0);
  if (z == 0.0) return 0.0;
  return std::exp(cplx(log_c_[k] + k * std::log(std::abs(z)), k * std::arg(z)));
}

void FockBasis::radial_factors(double r, double* out) const {
  if (r == 0.0) {
    for (int k = 0; k <= N_; ++k) out[k] = k == 0 ? std::exp(log_c_[0]) : 0.0;
    return;
  }
  const double lr = std::log(r), g = -0.5 * alpha_ * r * r;
  for (int k = 0; k <= N_; ++k) out[k] = std::exp(log_c_[k] + k * lr + g);
}

void FockBasis::override_constants(const std::vector<double>& c) {
  if (c.size() != log_c_.size()) throw InvalidInput("FockBasis::override_constants: size mismatch");
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (!(c[k] > 0.0)) throw InvalidInput("FockBasis::override_constants: constants must be > 0");
    log_c_[k] = std::log(c[k]);
  }
}

cplx kernel(cplx w, cplx z, double alpha) {
  if (!(alpha > 0.0)) throw InvalidInput("kernel: alpha must be > 0");
  return alpha / kPi * std::exp(alpha * z * std::conj(w));
}

double kernel_modulus_defect(cplx z, cplx w, double alpha) {
  const double lhs = std::abs(kernel(w, z, alpha)) * std::exp(-0.5 * alpha * (std::norm(z) + std::norm(w)));
  return std::abs(lhs - alpha / kPi * std::exp(-0.5 * alpha * std::norm(z - w)));
}

CFunc normalized_kernel(cplx z, double alpha) {
  if (!(alpha > 0.0)) throw InvalidInput("normalized_kernel: alpha must be > 0");
  const double lead = 0.5 * std::log(alpha / kPi) - 0.5 * alpha * std::norm(z);
  const cplx zc = std::conj(z);
  return [=](cplx xi) { return std::exp(alpha * xi * zc + lead); };
}

namespace {

void reject_nonfinite(cplx v, cplx node, const char* what) {
  if (!finite(v))
    throw InvalidInput(std::string(what) + ": non-finite sample at node " + format_point(node));
}

}  // namespace

cplx inner(const CFunc& f, const CFunc& g, const QuadratureGrid& grid, const Weight& phi) {
  const std::size_t n = grid.size();
  std::vector<double> re(n), im(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx z = grid.node(i);
    const cplx a = f(z), b = g(z);
    reject_nonfinite(a, z, "inner");
    reject_nonfinite(b, z, "inner");
    const double w = grid.weight(i) * std::exp(-2.0 * phi.evaluate(z));
    // f conj(g) with explicit real arithmetic: swapping f and g negates im exactly.
    re[i] = (a.real() * b.real() + a.imag() * b.imag()) * w;
    im[i] = (a.imag() * b.real() - a.real() * b.imag()) * w;
  }
  return {pairwise_sum(re), pairwise_sum(im)};
}

double norm_p(const CFunc& f, double p, const QuadratureGrid& grid, const Weight& phi) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InvalidInput("norm_p: need 0 < p < infinity");
  const std::size_t n = grid.size();
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx z = grid.node(i);
    const cplx a = f(z);
    reject_nonfinite(a, z, "norm_p");
    const double m = std::abs(a);
    t[i] = m == 0.0 ? 0.0 : std::exp(p * (std::log(m) - phi.evaluate(z))) * grid.weight(i);
  }
  return std::pow(pairwise_sum(t), 1.0 / p);
}

WeightedProjection project_weighted(const RingSampler& sampler, const FockBasis& basis,
                                    const QuadratureGrid& grid, std::size_t ring_begin,
                                    std::size_t ring_end) {
  if (grid.scheme() != Scheme::polar) throw InvalidInput("project_weighted: polar grid required");
  const std::size_t na = grid.n_angles();
  const int N = basis.N();
  if (static_cast<std::size_t>(2 * N + 2) > na)
    throw InvalidInput("project_weighted: too few angles for degree cutoff");
  ring_end = std::min(ring_end, grid.radii().size());
  AngularFft fft(na);
  std::vector<cplx> samples(na), modes(na);
  std::vector<double> b(basis.dim());
  std::vector<std::vector<cplx>> terms(basis.dim());
  std::vector<double> mass;
  for (std::size_t i = ring_begin; i < ring_end; ++i) {
    const double r = grid.radii()[i];
    sampler(r, samples);
    double m2 = 0.0;
    for (std::size_t l = 0; l < na; ++l) {
      if (!finite(samples[l]))
        throw InvalidInput("project: non-finite sample at node " +
                           format_point(std::polar(r, grid.angle(l))));
      m2 += std::norm(samples[l]);
    }
    mass.push_back(grid.ring_weights()[i] * m2 / static_cast<double>(na));
    fft.forward(samples.data(), modes.data());
    basis.radial_factors(r, b.data());
    const double w = grid.ring_weights()[i];
    for (int k = 0; k <= N; ++k) terms[k].push_back(w * b[k] * modes[k]);
  }
  WeightedProjection out;
  out.coeffs.resize(basis.dim());
  for (int k = 0; k <= N; ++k) out.coeffs[k] = pairwise_sum(terms[k]);
  out.norm_sq = pairwise_sum(mass);
  return out;
}

std::vector<cplx> project(const CFunc& f, const FockBasis& basis, const QuadratureGrid& grid,
                          const Weight& phi) {
  phi.require_standard("project");
  if (std::abs(phi.alpha() - basis.alpha()) > 1e-14 * basis.alpha())
    throw InvalidInput("project: basis and weight disagree on alpha");
  if (grid.scheme() == Scheme::polar) {
    const std::size_t na = grid.n_angles();
    const double alpha = basis.alpha();
    std::vector<cplx> dirs(na);
    for (std::size_t l = 0; l < na; ++l) dirs[l] = std::polar(1.0, grid.angle(l));
    auto sampler = [&](double r, std::vector<cplx>& s) {
      const double g = std::exp(-0.5 * alpha * r * r);
      for (std::size_t l = 0; l < na; ++l) s[l] = f(r * dirs[l]) * g;
    };
    return project_weighted(sampler, basis, grid).coeffs;
  }
  std::vector<cplx> out(basis.dim());
  for (int k = 0; k <= basis.N(); ++k)
    out[k] = inner(f, [&](cplx z) { return basis.eval(k, z); }, grid, phi);
  return out;
}

Eigen::MatrixXcd gram_matrix(const FockBasis& basis, const QuadratureGrid& grid, const Weight& phi) {
  const int n = static_cast<int>(basis.dim());
  constexpr std::size_t kChunk = 4096;
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd E(kChunk, n);
  for (std::size_t start = 0; start < grid.size(); start += kChunk) {
    const std::size_t len = std::min(kChunk, grid.size() - start);
    for (std::size_t i = 0; i < len; ++i) {
      const cplx z = grid.node(start + i);
      const double w = std::sqrt(grid.weight(start + i)) * std::exp(-phi.evaluate(z));
      for (int k = 0; k < n; ++k) E(i, k) = w * basis.eval(k, z);
    }
    const auto Ec = E.topRows(static_cast<Eigen::Index>(len));
    G.noalias() += Ec.adjoint() * Ec;
  }
  return G;
}

double reproducing_error(const FockBasis& basis, const QuadratureGrid& grid, const std::vector<cplx>& points) {
  const Weight phi = Weight::standard(basis.alpha());
  double worst = 0.0;
  for (cplx z : points) {
    const double a = basis.alpha();
    const auto c = project([z, a](cplx xi) { return kernel(z, xi, a); }, basis, grid, phi);
    const double damp = std::exp(-phi.evaluate(z));
    for (int k = 0; k <= basis.N(); ++k)
      worst = std::max(worst, std::abs(std::conj(c[k]) - basis.eval(k, z)) * damp);
  }
  return worst;
}

CFunc basis_combination(const FockBasis& basis, const std::vector<cplx>& coeffs) {
  return [&basis, coeffs](cplx z) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      if (coeffs[k] != 0.0) s += coeffs[k] * basis.eval(static_cast<int>(k), z);
    return s;
  };
}

std::vector<double> bergman_ratios(const CFunc& f, double p, double r,
                                   const std::vector<cplx>& centers, const Weight& phi) {
  if (!(r > 0.0) || !(p > 0.0)) throw InvalidInput("bergman_inequality_check: need p, r > 0");
  const DiskRule& rule = DiskRule::standard();
  std::vector<double> out;
  std::vector<double> t(rule.size());
  for (cplx z : centers) {
    // Work relative to e^{-p phi(z)} to keep both sides in range.
    const double phz = phi.evaluate(z);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const cplx w = z + r * rule.nodes()[i];
      const double m = std::abs(f(w));
      t[i] = m == 0.0 ? 0.0
                      : std::exp(p * (std::log(m) - phi.evaluate(w) + phz)) * r * r *
                            rule.weights()[i];
    }
    const double denom = pairwise_sum(t);
    const double num = std::pow(std::abs(f(z)), p);
    out.push_back(denom > 0.0 ? num / denom : (num == 0.0 ? 0.0 : INFINITY));
  }
  return out;
}

double bergman_inequality_check(const CFunc& f, double p, double r,
                                const std::vector<cplx>& centers, const Weight& phi) {
  auto v = bergman_ratios(f, p, r, centers, phi);
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, x);
  return worst;
}

}  // namespace fockbench
