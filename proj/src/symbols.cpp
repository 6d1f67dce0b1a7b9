#include "fockbench/symbols.hpp"

#include <cmath>
#include <random>

namespace fockbench {

namespace {

CFunc conj_of(const CFunc& g) {
  if (!g) return {};
  return [g](cplx z) { return std::conj(g(z)); };
}

double smooth_e(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double smooth_e_prime(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

}  // namespace

double plateau(double t, double a, double b) {
  const double s = (b - t) / (b - a);
  if (s >= 1.0) return 1.0;
  if (s <= 0.0) return 0.0;
  const double p = smooth_e(s), q = smooth_e(1.0 - s);
  return p / (p + q);
}

double plateau_derivative(double t, double a, double b) {
  const double s = (b - t) / (b - a);
  if (s >= 1.0 || s <= 0.0) return 0.0;
  const double p = smooth_e(s), q = smooth_e(1.0 - s);
  const double dp = smooth_e_prime(s), dq = -smooth_e_prime(1.0 - s);
  const double dstep = (dp * (p + q) - p * (dp + dq)) / ((p + q) * (p + q));
  return -dstep / (b - a);
}

Symbol conj(const Symbol& s) {
  Symbol out;
  out.id = "conj(" + s.id + ")";
  auto f = s.f;
  out.f = [f](cplx z) { return std::conj(f(z)); };
  out.d = conj_of(s.dbar);
  out.dbar = conj_of(s.d);
  out.bounded = s.bounded;
  out.sup_bound = s.sup_bound;
  if (s.poly_degree == 0) {
    out.holomorphic = true;
    out.poly_degree = 0;
  }
  return out;
}

Symbol operator+(const Symbol& a, const Symbol& b) {
  Symbol out;
  out.id = "(" + a.id + "+" + b.id + ")";
  auto fa = a.f, fb = b.f;
  out.f = [fa, fb](cplx z) { return fa(z) + fb(z); };
  if (a.has_derivatives() && b.has_derivatives()) {
    auto da = a.d, db = b.d, ea = a.dbar, eb = b.dbar;
    out.d = [da, db](cplx z) { return da(z) + db(z); };
    out.dbar = [ea, eb](cplx z) { return ea(z) + eb(z); };
  }
  out.bounded = a.bounded && b.bounded;
  out.sup_bound = out.bounded ? a.sup_bound + b.sup_bound : INFINITY;
  out.holomorphic = a.holomorphic && b.holomorphic;
  if (a.poly_degree >= 0 && b.poly_degree >= 0) out.poly_degree = std::max(a.poly_degree, b.poly_degree);
  return out;
}

Symbol operator*(cplx c, const Symbol& s) {
  Symbol out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%g%+gi)*", c.real(), c.imag());
  out.id = buf + s.id;
  auto f = s.f;
  out.f = [f, c](cplx z) { return c * f(z); };
  if (s.has_derivatives()) {
    auto d = s.d, e = s.dbar;
    out.d = [d, c](cplx z) { return c * d(z); };
    out.dbar = [e, c](cplx z) { return c * e(z); };
  }
  out.bounded = s.bounded;
  out.sup_bound = s.bounded ? std::abs(c) * s.sup_bound : INFINITY;
  out.holomorphic = s.holomorphic;
  out.poly_degree = s.poly_degree;
  return out;
}

Symbol operator-(const Symbol& a, const Symbol& b) {
  Symbol out = a + cplx(-1.0) * b;
  out.id = "(" + a.id + "-" + b.id + ")";
  return out;
}

Symbol operator*(const Symbol& a, const Symbol& b) {
  Symbol out;
  out.id = "(" + a.id + "*" + b.id + ")";
  auto fa = a.f, fb = b.f;
  out.f = [fa, fb](cplx z) { return fa(z) * fb(z); };
  if (a.has_derivatives() && b.has_derivatives()) {
    auto da = a.d, db = b.d, ea = a.dbar, eb = b.dbar;
    out.d = [=](cplx z) { return da(z) * fb(z) + fa(z) * db(z); };
    out.dbar = [=](cplx z) { return ea(z) * fb(z) + fa(z) * eb(z); };
  }
  out.bounded = a.bounded && b.bounded;
  out.sup_bound = out.bounded ? a.sup_bound * b.sup_bound : INFINITY;
  out.holomorphic = a.holomorphic && b.holomorphic;
  if (a.poly_degree >= 0 && b.poly_degree >= 0) out.poly_degree = a.poly_degree + b.poly_degree;
  return out;
}

Symbol constant(cplx c) {
  Symbol s;
  char buf[64];
  std::snprintf(buf, sizeof buf, "const(%g%+gi)", c.real(), c.imag());
  s.id = buf;
  s.f = [c](cplx) { return c; };
  s.d = [](cplx) { return cplx(0.0); };
  s.dbar = s.d;
  s.bounded = true;
  s.sup_bound = std::abs(c);
  s.holomorphic = true;
  s.poly_degree = 0;
  return s;
}

Symbol polynomial(const std::vector<cplx>& coeffs) {
  if (coeffs.empty()) return constant(0.0);
  Symbol s;
  s.id = "poly" + std::to_string(coeffs.size() - 1);
  s.f = [coeffs](cplx z) {
    cplx v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * z + *it;
    return v;
  };
  s.d = [coeffs](cplx z) {
    cplx v = 0.0;
    for (std::size_t k = coeffs.size() - 1; k >= 1; --k) v = v * z + static_cast<double>(k) * coeffs[k];
    return v;
  };
  s.dbar = [](cplx) { return cplx(0.0); };
  s.holomorphic = true;
  s.poly_degree = static_cast<int>(coeffs.size()) - 1;
  if (s.poly_degree == 0) {
    s.bounded = true;
    s.sup_bound = std::abs(coeffs[0]);
  }
  return s;
}

Symbol exp_z() {
  Symbol s;
  s.id = "expz";
  s.f = [](cplx z) { return std::exp(z); };
  s.d = s.f;
  s.dbar = [](cplx) { return cplx(0.0); };
  s.holomorphic = true;
  return s;
}

namespace {

Symbol make_zbar() {
  Symbol s;
  s.id = "zbar";
  s.f = [](cplx z) { return std::conj(z); };
  s.d = [](cplx) { return cplx(0.0); };
  s.dbar = [](cplx) { return cplx(1.0); };
  return s;
}

Symbol make_phase() {
  Symbol s;
  s.id = "phase";
  s.f = [](cplx z) { return std::polar(1.0, z.real()); };
  s.d = [](cplx z) { return cplx(0.0, 0.5) * std::polar(1.0, z.real()); };
  s.dbar = s.d;
  s.bounded = true;
  s.sup_bound = 1.0;
  return s;
}

Symbol make_sinre() {
  Symbol s;
  s.id = "sinre";
  s.f = [](cplx z) { return cplx(std::sin(z.real())); };
  s.d = [](cplx z) { return cplx(0.5 * std::cos(z.real())); };
  s.dbar = s.d;
  s.bounded = true;
  s.sup_bound = 1.0;
  return s;
}

Symbol make_sinabs2() {
  Symbol s;
  s.id = "sinabs2";
  s.f = [](cplx z) { return cplx(std::sin(std::norm(z))); };
  s.d = [](cplx z) { return std::cos(std::norm(z)) * std::conj(z); };
  s.dbar = [](cplx z) { return std::cos(std::norm(z)) * z; };
  s.bounded = true;
  s.sup_bound = 1.0;
  return s;
}

Symbol make_decaybar() {
  Symbol s;
  s.id = "decaybar";
  s.f = [](cplx z) { return std::conj(z) / std::sqrt(1.0 + std::norm(z)); };
  s.d = [](cplx z) {
    const double q = 1.0 + std::norm(z);
    return -0.5 * std::conj(z) * std::conj(z) / (q * std::sqrt(q));
  };
  s.dbar = [](cplx z) {
    const double q = 1.0 + std::norm(z);
    return cplx((1.0 + 0.5 * std::norm(z)) / (q * std::sqrt(q)));
  };
  s.bounded = true;
  s.sup_bound = 1.0;
  return s;
}

Symbol make_decaybar_chi() {
  Symbol base = make_decaybar();
  Symbol s;
  s.id = "decaybar_chi";
  auto f = base.f, d = base.d, e = base.dbar;
  s.f = [f](cplx z) { return f(z) * plateau(std::abs(z), 2.0, 4.0); };
  s.d = [f, d](cplx z) {
    const double r = std::abs(z);
    const cplx dchi = r > 0.0 ? plateau_derivative(r, 2.0, 4.0) * std::conj(z) / (2.0 * r) : 0.0;
    return d(z) * plateau(r, 2.0, 4.0) + f(z) * dchi;
  };
  s.dbar = [f, e](cplx z) {
    const double r = std::abs(z);
    const cplx dchi = r > 0.0 ? plateau_derivative(r, 2.0, 4.0) * z / (2.0 * r) : 0.0;
    return e(z) * plateau(r, 2.0, 4.0) + f(z) * dchi;
  };
  s.bounded = true;
  s.sup_bound = 1.0;
  return s;
}

}  // namespace

std::vector<std::string> builtin_ids() {
  return {"zbar", "phase", "sinre", "sinabs2", "decaybar", "decaybar_chi"};
}

bool is_builtin(const std::string& id) {
  for (auto& b : builtin_ids())
    if (b == id) return true;
  return false;
}

Symbol builtin(const std::string& id) {
  if (id == "zbar") return make_zbar();
  if (id == "phase") return make_phase();
  if (id == "sinre") return make_sinre();
  if (id == "sinabs2") return make_sinabs2();
  if (id == "decaybar") return make_decaybar();
  if (id == "decaybar_chi") return make_decaybar_chi();
  throw InvalidInput("unknown built-in symbol '" + id + "'");
}

void check_symbol(const Symbol& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(0.0, 1.0), ang(0.0, 2.0 * kPi);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const cplx z = std::polar(5.0 * std::sqrt(rad(rng)), ang(rng));
    const cplx v = s.f(z);
    if (s.bounded && std::abs(v) > s.sup_bound * (1.0 + 1e-12))
      throw InvariantViolation("Symbol '" + s.id + "': |f| exceeds sup bound at " + format_point(z));
    if (!s.has_derivatives()) continue;
    const cplx fx = (s.f(z + h) - s.f(z - h)) / (2 * h);
    const cplx fy = (s.f(z + cplx(0, h)) - s.f(z - cplx(0, h))) / (2 * h);
    const cplx d_fd = 0.5 * (fx - cplx(0, 1) * fy);
    const cplx e_fd = 0.5 * (fx + cplx(0, 1) * fy);
    const cplx d = s.d(z), e = s.dbar(z);
    const double scale = std::max({std::abs(d), std::abs(e), 1e-3});
    if (std::abs(d - d_fd) > 1e-3 * scale || std::abs(e - e_fd) > 1e-3 * scale)
      throw InvariantViolation("Symbol '" + s.id + "': Wirtinger derivative mismatch with finite differences at " +
                               format_point(z));
  }
}

}  // namespace fockbench
