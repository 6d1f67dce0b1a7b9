#include "fockbench/dbar.hpp"

#include <cblas.h>
#include <fftw3.h>

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <mutex>

#include "fockbench/csv.hpp"
#include "fockbench/ida.hpp"

namespace fockbench {

static_assert(std::endian::native == std::endian::little, "FieldGrid I/O assumes a little-endian host");

FieldGrid FieldGrid::zeros(double L, std::size_t n) {
  if (!(L > 0.0) || n < 8) throw InvalidInput("FieldGrid: need L > 0 and n >= 8");
  FieldGrid g;
  g.L = L;
  g.n = n;
  g.h = 2.0 * L / static_cast<double>(n);
  g.v.assign(n * n, cplx(0.0));
  return g;
}

FieldGrid FieldGrid::sample(const CFunc& f, double L, std::size_t n) {
  FieldGrid g = zeros(L, n);
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) g.at(ix, iy) = f(g.point(ix, iy));
  return g;
}

void FieldGrid::check_resolution() const {
  if (v.size() != n * n) throw InvalidInput("FieldGrid: sample count does not match dimensions");
  if (h > L / 128.0 * (1.0 + 1e-12))
    throw InvalidInput("FieldGrid: spacing h = " + format_double(h) + " exceeds L/128");
}

void FieldGrid::check_padding(double rel) const {
  check_resolution();
  const double inner = 0.75 * L;
  double peak = 0.0, band = 0.0;
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double a = std::abs(at(ix, iy));
      peak = std::max(peak, a);
      if (std::abs(coord(ix)) > inner || std::abs(coord(iy)) > inner) band = std::max(band, a);
    }
  }
  if (band > rel * peak)
    throw InvalidInput("FieldGrid: padding violated, outer band carries " + format_double(band / peak) +
                       " of the peak");
}

void write_field_binary(std::ostream& os, const FieldGrid& g) {
  const std::uint64_t dims[2] = {g.n, g.n};
  os.write(reinterpret_cast<const char*>(&g.L), 8);
  os.write(reinterpret_cast<const char*>(&g.h), 8);
  os.write(reinterpret_cast<const char*>(dims), 16);
  os.write(reinterpret_cast<const char*>(g.v.data()), static_cast<std::streamsize>(g.v.size() * 16));
  if (!os) throw std::runtime_error("write_field_binary: stream failure");
}

FieldGrid read_field_binary(std::istream& is) {
  double L = 0.0, h = 0.0;
  std::uint64_t dims[2] = {0, 0};
  is.read(reinterpret_cast<char*>(&L), 8);
  is.read(reinterpret_cast<char*>(&h), 8);
  is.read(reinterpret_cast<char*>(dims), 16);
  if (!is) throw InvalidInput("read_field_binary: truncated header");
  if (dims[0] != dims[1] || dims[0] < 8 || dims[0] > (1u << 15))
    throw InvalidInput("read_field_binary: unsupported dimensions");
  FieldGrid g = FieldGrid::zeros(L, dims[0]);
  if (std::abs(g.h - h) > 1e-12 * h) throw InvalidInput("read_field_binary: spacing does not match 2L/n");
  is.read(reinterpret_cast<char*>(g.v.data()), static_cast<std::streamsize>(g.v.size() * 16));
  if (!is) throw InvalidInput("read_field_binary: truncated data");
  return g;
}

void write_field_csv(std::ostream& os, const FieldGrid& g) {
  CsvWriter w(os, {"x", "y", "re", "im"});
  for (std::size_t iy = 0; iy < g.n; ++iy) {
    for (std::size_t ix = 0; ix < g.n; ++ix) {
      const cplx v = g.at(ix, iy);
      w.cell(g.coord(ix)).cell(g.coord(iy)).cell(v.real()).cell(v.imag()).end_row();
    }
  }
}

double grid_norm(const FieldGrid& g, double alpha, std::size_t margin) {
  std::vector<double> terms;
  terms.reserve(g.v.size());
  for (std::size_t iy = margin; iy + margin < g.n; ++iy) {
    for (std::size_t ix = margin; ix + margin < g.n; ++ix) {
      const cplx z = g.point(ix, iy);
      const double w = alpha == 0.0 ? 1.0 : std::exp(-alpha * std::norm(z));
      terms.push_back(std::norm(g.at(ix, iy)) * w);
    }
  }
  return std::sqrt(g.h * g.h * pairwise_sum(terms));
}

FieldGrid dbar_fd(const FieldGrid& u) {
  FieldGrid d = FieldGrid::zeros(u.L, u.n);
  const double s = 1.0 / (12.0 * u.h);
  const std::size_t n = u.n;
  for (std::size_t iy = 2; iy + 2 < n; ++iy) {
    for (std::size_t ix = 2; ix + 2 < n; ++ix) {
      const cplx dx = (-u.at(ix + 2, iy) + 8.0 * u.at(ix + 1, iy) - 8.0 * u.at(ix - 1, iy) + u.at(ix - 2, iy)) * s;
      const cplx dy = (-u.at(ix, iy + 2) + 8.0 * u.at(ix, iy + 1) - 8.0 * u.at(ix, iy - 1) + u.at(ix, iy - 2)) * s;
      d.at(ix, iy) = 0.5 * (dx + cplx(0.0, 1.0) * dy);
    }
  }
  return d;
}

namespace {

// Quadrature node of the singular patch, relative to the target node.
struct PatchNode {
  cplx delta;   // xi - z
  cplx factor;  // -w e^{-i theta} e^{-alpha rho^2}
  int bx, by;   // stencil origin in cells
  double wx[4], wy[4];
};

void cubic_weights(double t, double* w) {
  w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
  w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
  w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
}

constexpr int kNear = 2;  // the patch covers the (2 kNear + 1)^2 cells around the target

std::vector<PatchNode> patch_nodes(double h, double alpha) {
  constexpr int kTheta = 6, kRho = 6;
  const double eps = (kNear + 0.5) * h;
  std::vector<double> tn, tw, rn, rw;
  std::vector<PatchNode> out;
  for (int oct = 0; oct < 8; ++oct) {
    gauss_legendre(kTheta, oct * kPi / 4.0, (oct + 1) * kPi / 4.0, tn, tw);
    for (int a = 0; a < kTheta; ++a) {
      const double th = tn[a];
      const double rmax = eps / std::max(std::abs(std::cos(th)), std::abs(std::sin(th)));
      gauss_legendre(kRho, 0.0, rmax, rn, rw);
      for (int b = 0; b < kRho; ++b) {
        PatchNode p;
        const double rho = rn[b];
        p.delta = std::polar(rho, th);
        p.factor = -tw[a] * rw[b] * std::polar(std::exp(-alpha * rho * rho), -th);
        const double gx = p.delta.real() / h, gy = p.delta.imag() / h;
        const double fx = std::floor(gx), fy = std::floor(gy);
        p.bx = static_cast<int>(fx) - 1;
        p.by = static_cast<int>(fy) - 1;
        cubic_weights(gx - fx, p.wx);
        cubic_weights(gy - fy, p.wy);
        out.push_back(p);
      }
    }
  }
  return out;
}

}  // namespace

FieldGrid solve_Aphi(const FieldGrid& S, double alpha, double c0) {
  S.check_resolution();
  if (!(alpha > 0.0)) throw InvalidInput("solve_Aphi: alpha must be > 0");
  const std::size_t n = S.n;
  const double h = S.h;

  double peak = 0.0, edge = 0.0;
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double w = std::abs(S.at(ix, iy)) * std::exp(-0.5 * alpha * std::norm(S.point(ix, iy)));
      if (!std::isfinite(w)) throw InvalidInput("solve_Aphi: non-finite source at " + format_point(S.point(ix, iy)));
      peak = std::max(peak, w);
      if (ix == 0 || iy == 0 || ix + 1 == n || iy + 1 == n) edge = std::max(edge, w);
    }
  }
  FieldGrid u = FieldGrid::zeros(S.L, n);
  if (peak == 0.0) return u;
  if (edge > 1e-8 * peak)
    throw InvalidInput("solve_Aphi: weighted source is " + format_double(edge / peak) +
                       " of its peak on the grid edge (needs <= 1e-8)");

  static std::once_flag blas_once;
  std::call_once(blas_once, [] { openblas_set_num_threads(1); });

  using Eigen::MatrixXcd;
  const long N = static_cast<long>(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = S.coord(i);

  // e^{alpha conj(xi) z} = e^{alpha a x} e^{i alpha a y} e^{-i alpha b x} e^{alpha b y}, xi = a + ib.
  MatrixXcd E(N, N), Ey(N, N), Qx(N, N), W(N, N);
  Eigen::MatrixXd Qy(N, N);
  for (long j = 0; j < N; ++j) {
    for (long i = 0; i < N; ++i) {
      E(i, j) = std::exp(alpha * x[j] * x[i]);
      Ey(j, i) = std::polar(1.0, alpha * x[j] * x[i]);
      Qx(i, j) = std::polar(1.0, -alpha * x[j] * x[i]);
      Qy(j, i) = std::exp(alpha * x[j] * x[i]);
      W(i, j) = h * h * std::exp(-alpha * (x[i] * x[i] + x[j] * x[j])) * S.at(i, j);
    }
  }
  const long M = 2 * N - 1;
  std::vector<cplx> Dtab(static_cast<std::size_t>(M * M));
  for (long dy = -(N - 1); dy < N; ++dy)
    for (long dx = -(N - 1); dx < N; ++dx)
      Dtab[(dy + N - 1) * M + dx + N - 1] =
          (dx == 0 && dy == 0) ? cplx(0.0) : 1.0 / (h * cplx(static_cast<double>(dx), static_cast<double>(dy)));

  MatrixXcd U = MatrixXcd::Zero(N, N);  // U(ix, iy)
  MatrixXcd K(N, N), V(N, N), P(N, N);
  for (long dy = -(N - 1); dy < N; ++dy) {
    const cplx* drow = &Dtab[(dy + N - 1) * M];
    for (long ia = 0; ia < N; ++ia)
      for (long ix = 0; ix < N; ++ix) K(ix, ia) = E(ix, ia) * drow[ix - ia + N - 1];
    const long iy0 = std::max(0L, dy), iy1 = std::min(N - 1, N - 1 + dy);
    const long cnt = iy1 - iy0 + 1;
    for (long c = 0; c < cnt; ++c) V.col(c) = Ey.col(iy0 + c).cwiseProduct(W.col(iy0 + c - dy));
    const cplx one(1.0), zero(0.0);
    cblas_zgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(N), static_cast<int>(cnt),
                static_cast<int>(N), &one, K.data(), static_cast<int>(N), V.data(), static_cast<int>(N), &zero,
                P.data(), static_cast<int>(N));
    for (long c = 0; c < cnt; ++c) {
      const long iy = iy0 + c, ib = iy - dy;
      for (long ix = 0; ix < N; ++ix) U(ix, iy) += Qx(ix, ib) * Qy(ib, iy) * P(ix, c);
    }
  }

  // Replace the midpoint terms near the pole by the polar patch.
  const auto nodes = patch_nodes(h, alpha);
  auto Sat = [&](long ix, long iy) -> cplx {
    if (ix < 0 || iy < 0 || ix >= N || iy >= N) return 0.0;
    return S.at(static_cast<std::size_t>(ix), static_cast<std::size_t>(iy));
  };
  for (long iy = 0; iy < N; ++iy) {
    for (long ix = 0; ix < N; ++ix) {
      const cplx z(x[ix], x[iy]);
      cplx near = 0.0;
      for (long oy = -kNear; oy <= kNear; ++oy) {
        for (long ox = -kNear; ox <= kNear; ++ox) {
          if (ox == 0 && oy == 0) continue;
          const cplx s = Sat(ix + ox, iy + oy);
          if (s == 0.0) continue;
          const cplx xi = z + h * cplx(static_cast<double>(ox), static_cast<double>(oy));
          near += h * h * std::exp(alpha * std::conj(xi) * (z - xi)) * s / (z - xi);
        }
      }
      cplx patch = 0.0;
      for (const auto& p : nodes) {
        cplx sv = 0.0;
        for (int jy = 0; jy < 4; ++jy) {
          cplx row = 0.0;
          for (int jx = 0; jx < 4; ++jx) row += p.wx[jx] * Sat(ix + p.bx + jx, iy + p.by + jy);
          sv += p.wy[jy] * row;
        }
        if (sv == 0.0) continue;
        patch += p.factor * std::exp(-alpha * std::conj(z) * p.delta) * sv;
      }
      U(ix, iy) += patch - near;
    }
  }

  for (long iy = 0; iy < N; ++iy)
    for (long ix = 0; ix < N; ++ix) u.at(ix, iy) = c0 * U(ix, iy);
  return u;
}

double dbar_residual(const FieldGrid& u, const FieldGrid& S, double alpha) {
  FieldGrid diff = dbar_fd(u);
  for (std::size_t i = 0; i < diff.v.size(); ++i) diff.v[i] -= S.v[i];
  const double den = grid_norm(S, alpha, 3);
  if (den == 0.0) return grid_norm(diff, alpha, 3);
  return grid_norm(diff, alpha, 3) / den;
}

Calibration calibrate_Aphi(double alpha, double L, std::size_t n) {
  const FieldGrid S = FieldGrid::sample([](cplx z) { return -z * std::exp(-std::norm(z)); }, L, n);
  const FieldGrid u1 = solve_Aphi(S, alpha, 1.0);
  const FieldGrid d1 = dbar_fd(u1);
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t iy = 3; iy + 3 < n; ++iy) {
    for (std::size_t ix = 3; ix + 3 < n; ++ix) {
      const double w = std::exp(-alpha * std::norm(S.point(ix, iy)));
      num += w * std::conj(d1.at(ix, iy)) * S.at(ix, iy);
      den += w * std::norm(d1.at(ix, iy));
    }
  }
  Calibration c;
  c.c0 = (num / den).real();
  FieldGrid u = u1;
  for (auto& v : u.v) v *= c.c0;
  c.residual = dbar_residual(u, S, alpha);
  return c;
}

namespace {

// Weighted coefficients <u, e_k> on the field grid and the weighted values u e^{-phi} - sum c_k e_k e^{-phi}.
std::vector<cplx> grid_projection(const FieldGrid& u, const FockBasis& basis) {
  const std::size_t dim = basis.dim();
  const double alpha = basis.alpha();
  std::vector<std::vector<cplx>> terms(dim, std::vector<cplx>(u.v.size()));
  std::vector<double> b(dim);
  for (std::size_t iy = 0; iy < u.n; ++iy) {
    for (std::size_t ix = 0; ix < u.n; ++ix) {
      const cplx z = u.point(ix, iy);
      const double r = std::abs(z), th = std::arg(z);
      basis.radial_factors(r, b.data());
      const cplx uw = u.at(ix, iy) * std::exp(-0.5 * alpha * r * r) * (u.h * u.h);
      for (std::size_t k = 0; k < dim; ++k)
        terms[k][iy * u.n + ix] = uw * b[k] * std::polar(1.0, -static_cast<double>(k) * th);
    }
  }
  std::vector<cplx> c(dim);
  for (std::size_t k = 0; k < dim; ++k) c[k] = pairwise_sum(terms[k]);
  return c;
}

void subtract_combination(FieldGrid& u, const FockBasis& basis, const std::vector<cplx>& c) {
  for (std::size_t iy = 0; iy < u.n; ++iy) {
    for (std::size_t ix = 0; ix < u.n; ++ix) {
      const cplx z = u.point(ix, iy);
      cplx s = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * basis.eval(static_cast<int>(k), z);
      u.at(ix, iy) -= s;
    }
  }
}

}  // namespace

DbarHankel hankel_via_dbar(const Symbol& f, const std::vector<cplx>& g_coeffs, const FockBasis& basis,
                           const QuadratureGrid& grid, double L, std::size_t n) {
  if (!f.dbar) throw InvalidInput("hankel_via_dbar: symbol '" + f.id + "' has no closed-form dbar derivative");
  if (g_coeffs.size() > basis.dim()) throw InvalidInput("hankel_via_dbar: g is not in the basis span");
  const double alpha = basis.alpha();
  const CFunc g = basis_combination(basis, g_coeffs);

  DbarHankel out;
  const FieldGrid S = FieldGrid::sample([&](cplx z) { return g(z) * f.dbar(z); }, L, n);
  out.value = solve_Aphi(S, alpha);
  out.residual = dbar_residual(out.value, S, alpha);
  subtract_combination(out.value, basis, grid_projection(out.value, basis));

  const CFunc fg = [&](cplx z) { return f.f(z) * g(z); };
  const auto d = project(fg, basis, grid, Weight::standard(alpha));
  out.direct = FieldGrid::sample(fg, L, n);
  subtract_combination(out.direct, basis, d);

  out.norm_dbar = grid_norm(out.value, alpha);
  out.norm_direct = grid_norm(out.direct, alpha);
  FieldGrid diff = out.value;
  for (std::size_t i = 0; i < diff.v.size(); ++i) diff.v[i] -= out.direct.v[i];
  const double dn = grid_norm(diff, alpha);
  out.relative_difference = out.norm_direct > 1e-14 ? dn / out.norm_direct : dn;
  return out;
}

CFunc local_dbar_solve(const CFunc& S, cplx center, double r, int n_radial, int n_angular) {
  if (!(r > 0.0)) throw InvalidInput("local_dbar_solve: radius must be > 0");
  std::vector<double> rn, rw;
  gauss_legendre(n_radial, 0.0, 1.0, rn, rw);
  return [S, center, r, rn, rw, n_angular](cplx w) -> cplx {
    const cplx c = w - center;
    if (!(std::abs(c) < r)) throw InvalidInput("local_dbar_solve: evaluation point " + format_point(w) + " outside the disk");
    cplx total = 0.0;
    for (int l = 0; l < n_angular; ++l) {
      const double th = 2.0 * kPi * (l + 0.5) / n_angular;
      const cplx e = std::polar(1.0, th);
      const double t = (c * std::conj(e)).real();
      const double rmax = -t + std::sqrt(t * t + r * r - std::norm(c));
      cplx inner = 0.0;
      for (std::size_t i = 0; i < rn.size(); ++i) inner += rw[i] * S(w + rmax * rn[i] * e);
      total += std::conj(e) * rmax * inner;
    }
    return -total * (2.0 / n_angular);
  };
}

double local_solve_ratio(const CFunc& S, cplx center, double r, double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw InvalidInput("local_solve_ratio: q must be finite and >= 1");
  const CFunc u = local_dbar_solve(S, center, r);
  const DiskRule& rule = DiskRule::standard();
  std::vector<double> nu, ns;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const cplx w = center + r * rule.nodes()[i];
    nu.push_back(rule.weights()[i] * std::pow(std::abs(u(w)), q));
    ns.push_back(rule.weights()[i] * std::pow(std::abs(S(w)), q));
  }
  const double den = pairwise_sum(ns);
  if (den == 0.0) return 0.0;
  return std::pow(pairwise_sum(nu) / den, 1.0 / q);
}

FieldGrid beurling(const FieldGrid& S) {
  S.check_padding();
  const std::size_t n = S.n, M = 2 * n;
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * M * M));
  if (!buf) throw std::bad_alloc();
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fwd = fftw_plan_dft_2d(static_cast<int>(M), static_cast<int>(M), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_2d(static_cast<int>(M), static_cast<int>(M), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  std::memset(buf, 0, sizeof(fftw_complex) * M * M);
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      buf[iy * M + ix][0] = S.at(ix, iy).real();
      buf[iy * M + ix][1] = S.at(ix, iy).imag();
    }
  }
  fftw_execute(fwd);
  const long half = static_cast<long>(M / 2);
  for (std::size_t jy = 0; jy < M; ++jy) {
    for (std::size_t jx = 0; jx < M; ++jx) {
      const long kx = static_cast<long>(jx) < half ? static_cast<long>(jx) : static_cast<long>(jx) - static_cast<long>(M);
      const long ky = static_cast<long>(jy) < half ? static_cast<long>(jy) : static_cast<long>(jy) - static_cast<long>(M);
      const cplx k(static_cast<double>(kx), static_cast<double>(ky));
      const cplx m = (kx == 0 && ky == 0) ? cplx(0.0) : std::conj(k) / k;
      const cplx v = cplx(buf[jy * M + jx][0], buf[jy * M + jx][1]) * m;
      buf[jy * M + jx][0] = v.real();
      buf[jy * M + jx][1] = v.imag();
    }
  }
  fftw_execute(bwd);
  FieldGrid out = FieldGrid::zeros(S.L, n);
  const double scale = 1.0 / static_cast<double>(M * M);
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix)
      out.at(ix, iy) = cplx(buf[iy * M + ix][0], buf[iy * M + ix][1]) * scale;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  fftw_free(buf);
  return out;
}

double beurling_identity_error(const Symbol& f, double L, std::size_t n) {
  if (!f.has_derivatives()) throw InvalidInput("beurling_identity_error: symbol '" + f.id + "' lacks derivatives");
  const FieldGrid S = FieldGrid::sample(f.dbar, L, n);
  const FieldGrid D = FieldGrid::sample(f.d, L, n);
  FieldGrid T = beurling(S);
  for (std::size_t i = 0; i < T.v.size(); ++i) T.v[i] -= D.v[i];
  const double den = grid_norm(D, 0.0);
  return den > 0.0 ? grid_norm(T, 0.0) / den : grid_norm(T, 0.0);
}

double conjugate_gradient_bound_check(const Symbol& f, double s, double L, std::size_t n) {
  if (!(s > 1.0) || !std::isfinite(s)) throw InvalidInput("conjugate_gradient_bound_check: need 1 < s < inf");
  if (!f.has_derivatives()) throw InvalidInput("conjugate_gradient_bound_check: symbol '" + f.id + "' lacks derivatives");
  const FieldGrid g = FieldGrid::zeros(L, n);
  std::vector<double> a, b;
  a.reserve(n * n);
  b.reserve(n * n);
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const cplx z = g.point(ix, iy);
      a.push_back(std::pow(std::abs(f.d(z)), s));
      b.push_back(std::pow(std::abs(f.dbar(z)), s));
    }
  }
  const double area = g.h * g.h;
  const double num = std::pow(area * pairwise_sum(a), 1.0 / s);
  const double den = std::pow(area * pairwise_sum(b), 1.0 / s);
  if (den < 1e-10) {
    if (num >= 1e-10)
      throw InvariantViolation("conjugate_gradient_bound_check: ||dbar f||_s vanishes while ||d f||_s = " +
                               format_double(num));
    return std::numeric_limits<double>::quiet_NaN();
  }
  return num / den;
}

ConjugateDecompositionReport conjugate_decomposition_check(const Symbol& f, double q,
                                                           const std::vector<double>& schedule, double extent,
                                                           double spacing) {
  if (!f.bounded || !std::isfinite(f.sup_bound))
    throw InvalidInput("conjugate_decomposition_check: symbol '" + f.id + "' is not bounded");
  if (schedule.empty()) throw InvalidInput("conjugate_decomposition_check: empty R schedule");
  const double fsup = std::max(f.sup_bound, 1e-300);
  const auto probes = disk_grid(spacing, extent);
  ConjugateDecompositionReport rep;
  double lo = INFINITY;
  for (double R : schedule) {
    const Decomposition D = build_decomposition(f, q, R, 2.0 * R, extent, false, 0.0);
    const PartitionOfUnity& pou = D.partition();
    ConjugateScaleRow row;
    row.R = R;
    for (cplx z : probes) {
      cplx a = 0.0, b = 0.0;
      for (const auto& m : pou.members(z)) {
        const LocalPoly& h = D.piece(m.j);
        const cplx hv = h(z), hd = h.derivative(z);
        a += m.dbar_psi * std::conj(hv) + m.psi * std::conj(hd);
        b += std::conj(m.dbar_psi) * hv + m.psi * hd;
      }
      row.sup_dbar_conj_f1 = std::max(row.sup_dbar_conj_f1, std::abs(a));
      row.sup_d_f1 = std::max(row.sup_d_f1, std::abs(b));
    }
    row.product = R * row.sup_dbar_conj_f1 / fsup;
    rep.C = std::max(rep.C, row.product);
    lo = std::min(lo, row.product);
    rep.rows.push_back(row);
  }
  rep.spread = rep.C == 0.0 ? 1.0 : (lo > 0.0 ? rep.C / lo : INFINITY);
  return rep;
}

}  // namespace fockbench
