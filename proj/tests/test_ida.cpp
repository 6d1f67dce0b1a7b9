#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fockbench/ida.hpp"

using namespace fockbench;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

cplx random_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(radius * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}

// Random smooth symbol from the corpus with complex weights.
Symbol random_symbol(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Symbol f = constant(cplx(u(rng), u(rng)));
  for (const char* id : {"zbar", "phase", "sinre", "sinabs2", "decaybar"})
    if (u(rng) > 0.0) f = f + cplx(u(rng), u(rng)) * builtin(id);
  return f;
}

}  // namespace

TEST_CASE("mean_M examples") {
  const Symbol one = constant(1.0), zbar = builtin("zbar");
  for (cplx z : {cplx(0), cplx(3, -1)}) CHECK(mean_M(one, 2.0, 1.0, z) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(mean_M(zbar, 2.0, 1.0, 0.0) - kInvSqrt2) < 1e-4);
  CHECK(std::abs(mean_M(zbar, 2.0, 1.0, 2.0) - std::sqrt(4.5)) < 1e-4);
  CHECK_THROWS_AS(mean_M(zbar, 0.0, 1.0, 0.0), InvalidInput);
  CHECK_THROWS_AS(mean_M(zbar, 2.0, -1.0, 0.0), InvalidInput);
}

TEST_CASE("local_best_holo examples") {
  LocalApproxConfig cfg;
  const Symbol f = builtin("zbar") + polynomial({0.0, 0.0, 1.0});
  const auto r = local_best_holo(f, cfg, 0.0);
  CHECK(std::abs(r.value - kInvSqrt2) < 1e-10);
  for (cplx w : {cplx(0.3, 0.1), cplx(-0.5, 0.4)}) CHECK(std::abs(r.h(w) - w * w) < 1e-10);

  const Symbol p = polynomial({1.0, cplx(0, 2), -0.5, 0.25});
  for (double q : {1.0, 1.5, 2.0, 3.0}) {
    cfg.q = q;
    CHECK(G(p, cfg, cplx(1, -1)) < 1e-8);
  }
}

TEST_CASE("G of zbar for q != 2 against the radial oracle") {
  // Rotation equivariance makes h = 0 the minimizer at z = 0, so G_q(zbar)(0) = (2/(q+2))^{1/q}.
  for (double q : {1.0, 1.5, 3.0}) {
    LocalApproxConfig cfg;
    cfg.q = q;
    const double v = G(builtin("zbar"), cfg, 0.0);
    CHECK(v == doctest::Approx(std::pow(2.0 / (q + 2.0), 1.0 / q)).epsilon(1e-4));
    CHECK(v <= mean_M(builtin("zbar"), q, 1.0, 0.0) + 1e-12);
  }
  // Grid search over degree-1 candidates a + b w never beats the IRLS value.
  LocalApproxConfig cfg;
  cfg.q = 1.5;
  const double v = G(builtin("zbar"), cfg, 0.0);
  double best = INFINITY;
  for (double ar = -0.2; ar <= 0.2001; ar += 0.1)
    for (double ai = -0.2; ai <= 0.2001; ai += 0.1)
      for (double br = -0.2; br <= 0.2001; br += 0.1) {
        const cplx a(ar, ai), b(br, 0.0);
        best = std::min(best, mean_M([a, b](cplx w) { return std::conj(w) - a - b * w; }, 1.5, 1.0, 0.0));
      }
  CHECK(v <= best + 1e-9);
  CHECK(v >= 0.5 * std::pow(2.0 / 3.5, 1.0 / 1.5));

  cfg.q = 0.5;
  const auto r = local_best_holo(builtin("zbar"), cfg, 0.0);
  CHECK(r.upper_bound_only);
  CHECK(r.value <= mean_M(builtin("zbar"), 0.5, 1.0, 0.0) + 1e-12);
}

TEST_CASE("G oracle examples") {
  LocalApproxConfig cfg;
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const cplx z = random_point(rng, 6.0);
    CHECK(std::abs(G(builtin("zbar"), cfg, z) - kInvSqrt2) < 1e-4);
  }
  // The adaptive sweep stops once raising the degree changes G by less than sweep_tol.
  CHECK(G(exp_z(), cfg, cplx(0.5, 0.5)) < cfg.sweep_tol);
  const Symbol two = 2.0 * builtin("zbar");
  CHECK(G(two, cfg, 1.0) == doctest::Approx(2.0 * G(builtin("zbar"), cfg, 1.0)).epsilon(1e-12));
  LocalApproxConfig bad;
  bad.degree = -1;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("degree convergence") {
  const Symbol f = builtin("sinre") + builtin("decaybar");
  LocalApproxConfig cfg;
  cfg.adaptive_degree = false;
  double prev = INFINITY;
  for (int d = 0; d <= 12; d += 2) {
    cfg.degree = d;
    const double v = G(f, cfg, cplx(1.0, 0.5));
    CHECK(v <= prev + 1e-12);
    if (d >= 8) CHECK(std::abs(prev - v) < 1e-4);
    prev = v;
  }
  cfg.adaptive_degree = true;
  const auto r = local_best_holo(f, cfg, cplx(1.0, 0.5));
  CHECK(r.degree_stable);
  CHECK(r.sweep_delta < 1e-4);
}

TEST_CASE("local projection") {
  const LocalPoly P = local_projection(builtin("zbar"), 0.0, 1.0, 6);
  for (const auto& a : P.a) CHECK(std::abs(a) < 1e-12);
  const Symbol p = polynomial({0.5, 1.0, cplx(0, 1)});
  const LocalPoly Q = local_projection(p, cplx(1, 1), 1.0, 4);
  for (cplx w : {cplx(1.2, 0.9), cplx(0.5, 1.5)}) CHECK(std::abs(Q(w) - p(w)) < 1e-10);
  // Coincides with the q = 2 minimizer.
  LocalApproxConfig cfg;
  cfg.adaptive_degree = false;
  const Symbol f = builtin("sinre");
  const auto r = local_best_holo(f, cfg, cplx(0.3, -0.7));
  const LocalPoly L = local_projection(f, cplx(0.3, -0.7), 1.0, cfg.degree);
  for (cplx w : {cplx(0.3, -0.7), cplx(0.6, -0.4)}) CHECK(std::abs(L(w) - r.h(w)) < 1e-8);
}

TEST_CASE("projection chain constant") {
  double worst = 0.0;
  for (const char* id : {"zbar", "phase", "sinre", "sinabs2", "decaybar"})
    for (cplx z : {cplx(0), cplx(1, 1), cplx(-2, 0.5)})
      worst = std::max(worst, projection_chain_ratio(builtin(id), z, 1.0, 0.5, z + cplx(0.1, 0.1), 8));
  // Largest over this corpus is sinabs2 at 1.337.
  CHECK(worst == doctest::Approx(1.3372).epsilon(1e-3));
  CHECK(worst <= 5.0);
  CHECK_THROWS_AS(projection_chain_ratio(builtin("zbar"), 0.0, 1.0, 0.5, 0.5, 8), InvalidInput);
}

TEST_CASE("g-field CSV") {
  LocalApproxConfig cfg;
  const auto field = g_field(builtin("zbar"), cfg, disk_grid(1.0, 2.0));
  CHECK(field.values.size() == 13);
  for (double v : field.values) {
    CHECK(v >= 0.0);
    CHECK(std::abs(v - kInvSqrt2) < 1e-4);
  }
  std::ostringstream os;
  write_gfield_csv(field, os);
  const std::string text = os.str();
  CHECK(text.rfind("center_re,center_im,q,r,degree,value\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 14);
}

TEST_CASE("holomorphic-shift invariance and radius comparison") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const Symbol f = random_symbol(rng);
    LocalApproxConfig cfg;
    cfg.q = 1.0 + 2.0 * u(rng);
    cfg.adaptive_degree = false;
    const cplx z = random_point(rng, 4.0);
    const double Gf = G(f, cfg, z);
    const Symbol p = polynomial({cplx(u(rng), u(rng)), cplx(u(rng), 0), cplx(0, u(rng))});
    CHECK(std::abs(G(f + p, cfg, z) - Gf) < 1e-6);

    LocalApproxConfig small = cfg;
    small.r = cfg.r * (0.2 + 0.7 * u(rng));
    const cplx w = z + random_point(rng, cfg.r - small.r);
    CHECK(G(f, small, w) <= std::pow(cfg.r / small.r, 2.0 / cfg.q) * Gf + 1e-6);
  }
}

TEST_CASE("subadditivity and q-monotonicity") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const Symbol f = random_symbol(rng), g = random_symbol(rng);
    LocalApproxConfig cfg;
    cfg.q = 1.0 + 2.0 * u(rng);
    const cplx z = random_point(rng, 4.0);
    CHECK(G(f + g, cfg, z) <= G(f, cfg, z) + G(g, cfg, z) + 1e-6);

    // M_{q1} <= M_{q2} on |f - h*| with h* the q2 minimizer.
    LocalApproxConfig c2 = cfg;
    c2.q = cfg.q + 1.0;
    const auto r2 = local_best_holo(f, c2, z);
    const LocalPoly h = r2.h;
    const CFunc res = [fn = f.f, h](cplx w) { return fn(w) - h(w); };
    CHECK(mean_M(res, cfg.q, cfg.r, z) <= mean_M(res, c2.q, cfg.r, z) + 1e-12);
    CHECK(G(f, cfg, z) <= r2.value + 2.0 * cfg.sweep_tol);
  }
}

TEST_CASE("exponent triple") {
  const auto a = make_exponents(4.0, 2.0);
  CHECK(a.s == doctest::Approx(4.0));
  CHECK(std::isinf(make_exponents(2.0, 2.0).s));
  CHECK(std::isinf(make_exponents(1.0, 3.0).s));
  CHECK(make_exponents(3.0, 1.0).s == doctest::Approx(1.5));
}

TEST_CASE("seminorms") {
  const auto sz = seminorm_IDA(builtin("zbar"), INFINITY, 2.0);
  CHECK(std::abs(sz.value - kInvSqrt2) < 1e-3);
  CHECK(sz.extent_sufficient);
  CHECK(seminorm_IDA(polynomial({1.0, 2.0, 3.0}), INFINITY, 2.0).value < 1e-8);

  const auto sd = seminorm_IDA(builtin("decaybar"), INFINITY, 2.0);
  CHECK(sd.extent_sufficient);
  CHECK(sd.value == doctest::Approx(0.5539).epsilon(1e-3));
  std::size_t arg = 0;
  for (std::size_t i = 0; i < sd.field.values.size(); ++i)
    if (sd.field.values[i] > sd.field.values[arg]) arg = i;
  CHECK(std::abs(sd.field.centers[arg]) < 7.5);  // not on the outermost ring
  const RingTable rings = ring_maxima([&](cplx z) { return cplx(G(builtin("decaybar"), LocalApproxConfig{}, z)); },
                                      1.0, {1.0, 2.0, 4.0, 8.0});
  for (std::size_t i = 1; i < rings.maxima.size(); ++i) CHECK(rings.maxima[i] < rings.maxima[i - 1]);

  // Finite s: L^2 norm of a compactly supported field is finite and the tail check passes.
  const auto s2 = seminorm_IDA(builtin("decaybar_chi"), 2.0, 2.0);
  CHECK(std::isfinite(s2.value));
  CHECK(s2.extent_sufficient);
}

TEST_CASE("vda probe") {
  const auto z = vda_probe(builtin("zbar"), 2.0, 1.0, {1, 2, 4, 8});
  CHECK_FALSE(z.first.decaying);
  for (double m : z.first.maxima) CHECK(std::abs(m - kInvSqrt2) < 1e-4);
  const auto d = vda_probe(builtin("decaybar"), 2.0, 1.0, {1, 2, 4, 8});
  CHECK(d.first.decaying);
  CHECK(d.second.decaying);
  CHECK(d.verdicts_agree);
  CHECK(d.first.maxima.front() == doctest::Approx(0.379550).epsilon(1e-5));
  CHECK(d.first.maxima.back() == doctest::Approx(0.044619).epsilon(1e-4));
  // Compactly supported symbol: zero once the rings clear the support.
  const auto c = vda_probe(builtin("decaybar_chi"), 2.0, 1.0, {1, 2, 8, 12});
  CHECK(c.first.maxima.back() < 1e-12);
}

TEST_CASE("decompositions") {
  const auto probes = disk_grid(0.2, 3.5);
  {
    const Symbol p = polynomial({1.0, cplx(0, 1), 0.5});
    const auto d = decompose(p, 2.0, 1.0, 3.0, 0.5);
    for (cplx z : disk_grid(0.3, 3.0)) {
      CHECK(std::abs(d.f2(z)) < 1e-8);
      CHECK(std::abs(d.dbar_f1(z)) < 1e-8);
    }
  }
  const Symbol zbar = builtin("zbar");
  const auto d = decompose(zbar, 2.0, 1.0, 4.0, 0.5);
  const auto dp = decompose_proj(zbar, 2.0, 1.0, 4.0, 0.5);
  for (cplx z : probes) {
    CHECK(std::abs(d.f1(z) + d.f2(z) - zbar(z)) < 1e-10);
    CHECK(std::abs(d.f1(z) - dp.f1(z)) < 1e-8);
  }
  CHECK(d.certificates().max_ratio() <= kDecompositionConstant);

  for (double q : {1.0, 2.0}) {
    const auto s = decompose(builtin("sinre"), q, 1.0, 4.0, 0.5);
    CHECK(std::isfinite(s.certificates().max_ratio()));
    CHECK(s.certificates().max_ratio() <= kDecompositionConstant);
    CHECK(s.flagged_solves() == 0);
  }
  const auto sp = decompose_proj(builtin("sinre"), 1.0, 1.0, 4.0, 0.5);
  CHECK(std::isfinite(sp.certificates().max_ratio()));
  CHECK_THROWS_AS(decompose_proj(builtin("sinre"), 0.5, 1.0), InvalidInput);
}

TEST_CASE("mean oscillation") {
  CHECK(MO(constant(cplx(2, 1)), 1.0, cplx(3, 3)) < 1e-12);
  CHECK(std::abs(MO(builtin("zbar"), 1.0, 0.0) - kInvSqrt2) < 1e-4);
  LocalApproxConfig cfg;
  std::mt19937_64 rng(6);
  for (int i = 0; i < 10; ++i) {
    const Symbol f = random_symbol(rng);
    const cplx z = random_point(rng, 4.0);
    CHECK(MO(f, 1.0, z) >= G(f, cfg, z) - 1e-10);
  }
}

TEST_CASE("BMO/BDA two-sided check") {
  const auto grid = disk_grid(1.0, 4.0);
  const auto z = bmo_bda_check(builtin("zbar"), {1.0, 0.5}, grid);
  CHECK(z.C1 >= 0.5);
  CHECK(z.C2 <= 1.0 + 1e-6);
  CHECK(z.C1 == doctest::Approx(z.C2).epsilon(1e-6));
  const auto s = bmo_bda_check(builtin("sinre"), {1.0, 0.5}, grid);
  CHECK(s.max_conjugation_asymmetry < 1e-8);
  CHECK(std::isfinite(s.C1));
  CHECK(std::isfinite(s.C2));
  CHECK(s.C1 == doctest::Approx(0.680476).epsilon(1e-5));
  CHECK(s.C2 == doctest::Approx(0.707087).epsilon(1e-5));
}

TEST_CASE("small-scale scan") {
  const std::vector<double> schedule{1.0, 0.5, 0.25, 0.1};
  const auto grid = disk_grid(1.0, 8.0);
  const auto z = small_scale_scan(builtin("zbar"), schedule, grid);
  for (std::size_t i = 0; i < schedule.size(); ++i) CHECK(std::abs(z.sup_g[i] - schedule[i] * kInvSqrt2) < 1e-6);
  CHECK(z.vda_star_consistent);
  // Taylor: MO_{2,r}(sin Re z) = r |cos x| / 2 + O(r^2); sup over the grid reaches |cos x| = 1.
  const auto s = small_scale_scan(builtin("sinre"), schedule, grid);
  CHECK(s.vmo_consistent);
  CHECK(std::abs(s.sup_mo.back() - 0.05) < 1e-3);
  const auto a = small_scale_scan(builtin("sinabs2"), schedule, grid);
  CHECK_FALSE(a.vmo_consistent);
  CHECK_FALSE(a.vda_star_conj_consistent);
  CHECK_THROWS_AS(small_scale_scan(builtin("sinre"), {1.0, 0.01}, grid), InvalidInput);
  CHECK_THROWS_AS(small_scale_scan(builtin("sinre"), {0.5, 1.0}, grid), InvalidInput);
}

TEST_CASE("averaging function") {
  Measure leb;
  leb.density = [](cplx) { return 1.0; };
  CHECK(averaging_function(leb, 1.5, cplx(2, 2)) == doctest::Approx(kPi * 2.25).epsilon(1e-10));
  Measure dirac;
  dirac.atoms = {{0.0, 1.0}};
  CHECK(averaging_function(dirac, 1.0, 0.0) == 1.0);
  CHECK(averaging_function(dirac, 1.0, 3.0) == 0.0);

  const auto d = decompose(builtin("zbar"), 2.0, 1.0, 4.0, 0.5);
  Measure mu;
  mu.density = [&d](cplx z) { return std::norm(d.f2(z)); };
  double sup = 0.0;
  for (cplx z : disk_grid(1.0, 3.0)) sup = std::max(sup, averaging_function(mu, 1.0, z));
  CHECK(std::isfinite(sup));
  CHECK(sup < kPi * std::pow(kInvSqrt2 * kDecompositionConstant * 4.0, 2.0));
}

TEST_CASE("IMO check") {
  const auto z = imo_check(builtin("zbar"), INFINITY, 2.0);
  CHECK(std::abs(z.f.value - kInvSqrt2) < 1e-3);
  CHECK(z.f_conj.value < 1e-8);
  const auto p = imo_check(builtin("phase"), INFINITY, 2.0);
  CHECK(p.both_finite);
  CHECK(p.f.value == doctest::Approx(p.f_conj.value).epsilon(1e-10));
  CHECK(p.f.value == doctest::Approx(0.3392747343).epsilon(1e-8));
  const auto s = imo_check(builtin("sinre"), INFINITY, 2.0);
  CHECK(s.f.value == doctest::Approx(s.f_conj.value).epsilon(1e-10));
}
