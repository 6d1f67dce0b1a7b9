#include "doctest.h"

#include <cmath>
#include <random>

#include "fockbench/fockcore.hpp"

using namespace fockbench;

namespace {

const Weight kStd = Weight::standard(1.0);

cplx random_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(radius * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}

// int_0^1 I0(2 a rho) e^{-rho^2} rho drho via the series I0(x) = sum (x/2)^{2m} / (m!)^2 and
// int_0^1 rho^{2m+1} e^{-rho^2} drho = gamma(m+1, 1) / 2 (lower incomplete gamma).
double unit_disk_gaussian_mass(double a) {
  double total = 0.0, term = 1.0;  // (a^2)^m / (m!)^2
  for (int m = 0; m < 80; ++m) {
    // lower gamma(m+1, 1) = m! (1 - e^{-1} sum_{j<=m} 1/j!)
    double partial = 0.0, fact_j = 1.0;
    for (int j = 0; j <= m; ++j) {
      if (j > 0) fact_j *= j;
      partial += 1.0 / fact_j;
    }
    const double lower = std::tgamma(m + 1.0) * (1.0 - std::exp(-1.0) * partial);
    total += term * 0.5 * lower;
    term *= a * a / ((m + 1.0) * (m + 1.0));
  }
  return 2.0 * kPi * total;
}

}  // namespace

TEST_CASE("weight invariants") {
  CHECK(kStd.evaluate(cplx(1, 2)) == doctest::Approx(2.5));
  CHECK(std::abs(kStd.wirtinger_gradient(cplx(1, 2)) - 0.5 * cplx(1, -2)) < 1e-15);
  std::mt19937_64 rng(3);
  std::vector<cplx> s;
  for (int i = 0; i < 50; ++i) s.push_back(random_point(rng, 5.0));
  CHECK_NOTHROW(check_weight_invariants(kStd, s));
  CHECK_NOTHROW(check_weight_invariants(Weight::fock_sobolev(), s));
  const auto b = Weight::fock_sobolev().hessian_bounds();
  CHECK(b.m > 0.0);
  CHECK(b.m <= b.M);
}

TEST_CASE("quadrature mass and node containment") {
  const auto grid = QuadratureGrid::for_degree(1.0, 60);
  CHECK(std::abs(norm_p([](cplx) { return cplx(1.0); }, 2.0, grid, kStd) - std::sqrt(kPi)) < 1e-8);
  for (std::size_t i = 0; i < grid.size(); i += 97) CHECK(std::abs(grid.node(i)) <= grid.r_max() * (1 + 1e-15));
  // R_max = sqrt(2(N+1)/alpha) + 6/sqrt(alpha).
  CHECK(grid.r_max() == doctest::Approx(std::sqrt(122.0) + 6.0).epsilon(1e-14));
  CHECK(grid.n_angles() == 4 * 60 + 16);
}

TEST_CASE("kernel examples") {
  CHECK(std::abs(kernel(0.0, 0.0, 1.0) - 1.0 / kPi) < 1e-16);
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) worst = std::max(worst, kernel_modulus_defect(random_point(rng, 6), random_point(rng, 6), 1.0));
  CHECK(worst < 1e-12);

  const cplx z(1.0, 1.0);
  const auto grid = QuadratureGrid::for_degree(1.0, 60);
  const CFunc Kz = [z](cplx xi) { return kernel(z, xi, 1.0); };
  CHECK(std::abs(inner(Kz, Kz, grid, kStd) - std::exp(2.0) / kPi) < 1e-10);
  CHECK_THROWS_AS(kernel(0.0, 0.0, -1.0), InvalidInput);
}

TEST_CASE("normalized kernel") {
  const auto grid = QuadratureGrid::for_degree(1.0, 60);
  CHECK(norm_p(normalized_kernel(3.0, 1.0), 2.0, grid, kStd) == doctest::Approx(1.0).epsilon(1e-6));
  const FockBasis basis(1.0, 4);
  const CFunc k0 = normalized_kernel(0.0, 1.0);
  for (cplx xi : {cplx(0.3, 0.0), cplx(-1.0, 2.0)}) CHECK(std::abs(k0(xi) - basis.eval(0, xi)) < 1e-15);

  // |k_z(xi)| e^{-phi(xi)} = pi^{-1/2} e^{-|xi - z|^2 / 2}; on |xi| <= 2 the sup sits at xi = 2.
  double prev = INFINITY;
  for (double zr : {4.0, 8.0, 12.0}) {
    const CFunc kz = normalized_kernel(zr, 1.0);
    double sup = 0.0;
    for (int l = 0; l < 64; ++l)
      for (double rho : {0.5, 1.0, 1.5, 2.0}) {
        const cplx xi = std::polar(rho, 2 * kPi * l / 64);
        sup = std::max(sup, std::abs(kz(xi)) * std::exp(-0.5 * std::norm(xi)));
      }
    CHECK(sup == doctest::Approx(std::exp(-0.5 * (zr - 2) * (zr - 2)) / std::sqrt(kPi)).epsilon(1e-12));
    CHECK(sup < prev);
    prev = sup;
  }
}

TEST_CASE("inner products and norms") {
  const FockBasis basis(1.0, 30);
  const auto grid = QuadratureGrid::for_degree(1.0, 30);
  const CFunc e1 = [&](cplx z) { return basis.eval(1, z); };
  const CFunc e2 = [&](cplx z) { return basis.eval(2, z); };
  const CFunc e3 = [&](cplx z) { return basis.eval(3, z); };
  CHECK(std::abs(inner(e2, e2, grid, kStd) - 1.0) < 1e-6);
  CHECK(std::abs(inner(e1, e3, grid, kStd)) < 1e-6);
  const CFunc zb = [](cplx z) { return std::conj(z); };
  const CFunc id = [](cplx z) { return z; };
  CHECK(std::abs(inner(zb, id, grid, kStd)) < 1e-6);

  CHECK(norm_p(id, 2.0, grid, kStd) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-6));
  const cplx c(2.0, 1.0);
  for (double p : {1.0, 2.0, 3.5}) {
    const double a = norm_p([&](cplx z) { return c * std::sin(z.real()) * z; }, p, grid, kStd);
    const double b = norm_p([&](cplx z) { return std::sin(z.real()) * z; }, p, grid, kStd);
    CHECK(a == doctest::Approx(std::abs(c) * b).epsilon(1e-12));
  }
  // Conjugate symmetry is exact under the fixed reduction order.
  const CFunc f = [](cplx z) { return std::exp(cplx(0, 1) * z.real()) * z; };
  const CFunc g = [](cplx z) { return std::conj(z) * z + 1.0; };
  CHECK(inner(f, g, grid, kStd) == std::conj(inner(g, f, grid, kStd)));

  const CFunc bad = [](cplx z) { return std::abs(z) < 1.0 ? cplx(NAN, 0) : cplx(0); };
  CHECK_THROWS_AS(inner(bad, g, grid, kStd), InvalidInput);
}

TEST_CASE("quadrature convergence under refinement") {
  const auto grid = QuadratureGrid::for_degree(1.0, 30);
  const auto fine = grid.refined();
  for (const CFunc& f : {CFunc([](cplx z) { return std::sin(z.real()); }), CFunc([](cplx z) { return std::conj(z); }),
                         CFunc([](cplx z) { return std::exp(cplx(0, 1) * z.real()); })})
    CHECK(std::abs(norm_p(f, 2.0, grid, kStd) - norm_p(f, 2.0, fine, kStd)) < 1e-6);
}

TEST_CASE("projection examples") {
  const FockBasis basis(1.0, 20);
  const auto grid = QuadratureGrid::for_degree(1.0, 20);
  auto c = project([&](cplx z) { return basis.eval(3, z); }, basis, grid, kStd);
  for (int k = 0; k <= 20; ++k) CHECK(std::abs(c[k] - (k == 3 ? 1.0 : 0.0)) < 1e-6);

  for (int k : {1, 4, 9}) {
    c = project([&](cplx z) { return std::conj(z) * basis.eval(k, z); }, basis, grid, kStd);
    for (int j = 0; j <= 20; ++j) CHECK(std::abs(c[j] - (j == k - 1 ? std::sqrt(double(k)) : 0.0)) < 1e-6);
  }
  c = project([](cplx z) { return std::conj(z); }, basis, grid, kStd);
  for (const auto& v : c) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("projection is idempotent on sampled functions") {
  const FockBasis basis(1.0, 24);
  const auto grid = QuadratureGrid::for_degree(1.0, 24);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const cplx a(u(rng), u(rng)), b(u(rng), u(rng));
    const CFunc f = [a, b](cplx z) { return a * std::sin(z.real()) + b * std::conj(z) * z / (1.0 + std::norm(z)); };
    const auto c1 = project(f, basis, grid, kStd);
    const auto c2 = project(basis_combination(basis, c1), basis, grid, kStd);
    for (int k = 0; k <= 24; ++k) CHECK(std::abs(c1[k] - c2[k]) < 1e-6);
  }
}

TEST_CASE("basis constants") {
  const FockBasis basis(1.0, 40);
  CHECK(basis.c(0) == doctest::Approx(1.0 / std::sqrt(kPi)));
  CHECK(basis.c(5) == doctest::Approx(std::sqrt(1.0 / (kPi * 120.0))));
  for (int k = 3; k < 40; ++k) CHECK(basis.c(k + 1) < basis.c(k));  // k >= alpha e
  const FockBasis b2(2.0, 3);
  CHECK(b2.c(2) == doctest::Approx(std::sqrt(8.0 / (kPi * 2.0))));
}

TEST_CASE("gram matrix and reproducing property") {
  const FockBasis basis(1.0, 60);
  const auto grid = QuadratureGrid::for_degree(1.0, 60);
  const Eigen::MatrixXcd G = gram_matrix(basis, grid, kStd);
  CHECK((G - Eigen::MatrixXcd::Identity(61, 61)).cwiseAbs().maxCoeff() < 1e-6);
  std::mt19937_64 rng(9);
  std::vector<cplx> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(random_point(rng, grid.r_max() / 2));
  CHECK(reproducing_error(basis, grid, pts) < 1e-5);

  FockBasis broken = basis;
  std::vector<double> c(61);
  for (int k = 0; k <= 60; ++k) c[k] = basis.c(k) * (k == 7 ? 1.01 : 1.0);
  broken.override_constants(c);
  CHECK((gram_matrix(broken, grid, kStd) - Eigen::MatrixXcd::Identity(61, 61)).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("bergman inequality") {
  std::vector<cplx> centers{0.0, 1.0, cplx(0, 2), cplx(-3, 1), cplx(2.5, -2.5)};
  const auto ratios = bergman_ratios([](cplx) { return cplx(1.0); }, 2.0, 1.0, centers, kStd);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double oracle = 1.0 / unit_disk_gaussian_mass(std::abs(centers[i]));
    CHECK(ratios[i] == doctest::Approx(oracle).epsilon(1e-6));
  }
  const FockBasis basis(1.0, 5);
  const CFunc e5 = [&](cplx z) { return basis.eval(5, z); };
  std::vector<cplx> grid4;
  for (double x = -4.0; x <= 4.0; x += 0.5)
    for (double y = -4.0; y <= 4.0; y += 0.5)
      if (std::hypot(x, y) <= 4.0) grid4.emplace_back(x, y);
  const double worst = bergman_inequality_check(e5, 2.0, 1.0, grid4, kStd);
  CHECK(std::isfinite(worst));
  CHECK(worst <= 10.0);
  const auto r1 = bergman_ratios(e5, 2.0, 1.0, grid4, kStd);
  const auto r2 = bergman_ratios(e5, 2.0, 2.0, grid4, kStd);
  for (std::size_t i = 0; i < r1.size(); ++i) CHECK(r2[i] <= r1[i]);
}
