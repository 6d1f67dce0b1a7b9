#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fockbench/operators.hpp"

using namespace fockbench;

namespace {

struct Setup {
  FockBasis basis;
  QuadratureGrid grid;
  explicit Setup(int N) : basis(1.0, N), grid(QuadratureGrid::for_degree(1.0, N)) {}
};

const Setup& n60() {
  static const Setup s(60);
  return s;
}

}  // namespace

TEST_CASE("Toeplitz matrix of zbar is the weighted backward shift") {
  const auto& s = n60();
  const GramPair gp = assemble(builtin("zbar"), s.basis, s.grid);
  // <zbar e_k, e_j> = <e_k, z e_j> = sqrt(j+1) delta_{k,j+1}; <|z|^2 e_k, e_k> = k+1.
  double t_err = 0.0, a_err = 0.0;
  for (int j = 0; j <= 60; ++j)
    for (int k = 0; k <= 60; ++k) {
      t_err = std::max(t_err, std::abs(gp.T(j, k) - (k == j + 1 ? std::sqrt(j + 1.0) : 0.0)));
      if (k < 58) a_err = std::max(a_err, std::abs(gp.A(j, k) - (j == k ? k + 1.0 : 0.0)));
    }
  CHECK(t_err < 1e-9);
  CHECK(a_err < 1e-9);
  CHECK(gp.hermitian_defect < 1e-8);
  CHECK(gp.guarded() == 31);
  const Eigen::MatrixXcd H = hankel_gram(gp, gp.guarded());
  CHECK((H - Eigen::MatrixXcd::Identity(31, 31)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(hankel_norm(gp) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(hankel_gram_min_eig(gp) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("holomorphic symbols are annihilated") {
  const auto& s = n60();
  const Symbol p = polynomial({cplx(1.0, 0.5), cplx(-0.3, 0.0), cplx(0.0, 0.2), cplx(0.05, 0.0)});
  const GramPair gp = assemble(p, s.basis, s.grid);
  CHECK(hankel_norm(gp) < 1e-5);
  CHECK(hankel_gram_min_eig(gp) > -1e-8);
  // Norm invariance under a holomorphic shift.
  const double a = hankel_norm(assemble(builtin("sinre"), s.basis, s.grid));
  const double b = hankel_norm(assemble(builtin("sinre") + p, s.basis, s.grid));
  CHECK(std::abs(a - b) < 1e-6);
}

TEST_CASE("assembly invariants over random coefficient mixes") {
  const auto& s = n60();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const GramPair p1 = assemble(builtin("phase"), s.basis, s.grid);
  const GramPair p2 = assemble(builtin("sinabs2"), s.basis, s.grid);
  for (int trial = 0; trial < 3; ++trial) {
    const cplx a(u(rng), u(rng)), b(u(rng), u(rng));
    const Symbol f = a * builtin("phase") + b * builtin("sinabs2");
    const GramPair gp = assemble(f, s.basis, s.grid);
    CHECK((gp.T - (a * p1.T + b * p2.T)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(gp.hermitian_defect < 1e-8);
    CHECK(hankel_gram_min_eig(gp) > -1e-8);
    const GramPair cj = conjugate_pair(gp);
    const GramPair direct = assemble(conj(f), s.basis, s.grid);
    CHECK((cj.T - direct.T).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((cj.A - direct.A).cwiseAbs().maxCoeff() < 1e-10);
  }
  // Real symbol: Hermitian Toeplitz matrix and equal conjugate norms.
  const GramPair r = assemble(builtin("sinre"), s.basis, s.grid);
  CHECK((r.T - r.T.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(hankel_norm(r) - hankel_norm(conjugate_pair(r))) < 1e-12);
}

TEST_CASE("assembly rejects symbols that outgrow the weight") {
  const auto& s = n60();
  Symbol grow = builtin("zbar");
  grow.f = [](cplx z) { return std::exp(std::norm(z)); };
  CHECK_THROWS_AS(assemble(grow, s.basis, s.grid), InvalidInput);
}

TEST_CASE("probe degree") {
  CHECK(probe_degree(1.0, 6.0) == 98);
  CHECK(probe_degree(1.0, 0.0) == 20);
  CHECK(probe_degree(2.0, 1.0) == static_cast<int>(std::ceil(2.0 + 7.0 * std::sqrt(2.0) + 20.0)));
}

TEST_CASE("Hankel operator on normalized kernels") {
  const Setup s(probe_degree(1.0, 4.0));
  // (zbar - conj z) k_z has norm 1 / sqrt(alpha) and is orthogonal to F^2.
  for (cplx z : {cplx(0), cplx(1, 2), cplx(-3, 0.5), cplx(0, 4)})
    CHECK(hankel_on_kernel(builtin("zbar"), z, s.basis, s.grid) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(hankel_on_kernel(polynomial({1.0, 2.0}), cplx(1, 1), s.basis, s.grid) < 1e-6);
}

TEST_CASE("compactness probes") {
  const std::vector<double> rings{1, 2, 4, 6};
  const ProbeTable d = compact_probe_auto(builtin("decaybar"), rings);
  CHECK(d.decaying);
  const double expect[] = {0.5069, 0.3014, 0.1329, 0.0856};
  for (int i = 0; i < 4; ++i) CHECK(d.values[i] == doctest::Approx(expect[i]).epsilon(1e-3));
  const ProbeTable p = compact_probe_auto(builtin("phase"), rings);
  CHECK_FALSE(p.decaying);
  CHECK(p.variation() < 0.01);
  CHECK(p.values[0] == doctest::Approx(0.4703).epsilon(1e-3));

  const Setup s(20);
  CHECK_THROWS_AS(compact_probe(builtin("phase"), rings, s.basis, s.grid), InvalidInput);
}

TEST_CASE("translation-based probe") {
  const Setup s(probe_degree(1.0, 4.0));
  const auto d = stroethoff_probe(builtin("decaybar"), {1, 2, 4}, s.basis, s.grid, 4);
  CHECK(d.table.values.back() < d.table.values.front());
  CHECK_FALSE(d.unbounded_warning);
  const auto z = stroethoff_probe(builtin("zbar"), {1, 2}, s.basis, s.grid, 4);
  CHECK(z.unbounded_warning);
  // For zbar the residual of the translate does not depend on lambda.
  const double a = stroethoff_value(builtin("zbar").f, 0.0, s.basis, s.grid);
  CHECK(stroethoff_value(builtin("zbar").f, cplx(2, -1), s.basis, s.grid) == doctest::Approx(a).epsilon(1e-6));
}

TEST_CASE("Hankel lower bound against G") {
  const auto z = hankel_lower_bound_check(builtin("zbar"), disk_grid(1.0, 3.0), 1.0);
  CHECK_FALSE(z.vacuous);
  CHECK(z.min_ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  CHECK(z.max_ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  const auto p = hankel_lower_bound_check(builtin("sinre"), disk_grid(1.0, 3.0), 1.0);
  CHECK(p.min_ratio > 0.2);
  const auto h = hankel_lower_bound_check(polynomial({0.0, 1.0}), disk_grid(1.0, 2.0), 1.0);
  CHECK(h.vacuous);
}

TEST_CASE("Berger-Coburn comparison on real symbols") {
  const auto& s = n60();
  const auto r = berger_coburn_compare(builtin("sinre"), s.basis, s.grid, {1, 2, 4}, 4);
  CHECK(r.norm_ratio == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.verdicts_agree);
}

TEST_CASE("seminorm versus norm") {
  const auto& s = n60();
  const SeminormRatio z = seminorm_vs_norm(builtin("zbar"), s.basis, s.grid);
  CHECK(z.ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
  CHECK_FALSE(z.vacuous);
  CHECK(seminorm_vs_norm(polynomial({1.0, 1.0}), s.basis, s.grid).vacuous);
}

TEST_CASE("operator report CSV") {
  ProbeTable t;
  t.radii = {1, 2};
  t.values = {0.5, 0.25};
  std::ostringstream os;
  write_operator_report(os, "decaybar", 60, 14.0, 0.75, t);
  const std::string text = os.str();
  CHECK(text.rfind("symbol_id,N,R_max,hankel_norm,ring_radius,probe_value\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  CHECK(text.find("decaybar,60,") != std::string::npos);
}
