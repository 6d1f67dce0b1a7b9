#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fockbench/common.hpp"

namespace fockbench {

/// Complex symbol f with optional Wirtinger derivatives d = df/dz, dbar = df/dzbar.
struct Symbol {
  std::string id;
  CFunc f;
  CFunc d;
  CFunc dbar;
  bool bounded = false;
  double sup_bound = INFINITY;
  /// Known to satisfy dbar f = 0 identically.
  bool holomorphic = false;
  /// Degree when f is a known holomorphic polynomial, otherwise -1.
  int poly_degree = -1;

  cplx operator()(cplx z) const { return f(z); }
  bool has_derivatives() const { return static_cast<bool>(d) && static_cast<bool>(dbar); }
};

Symbol conj(const Symbol& s);
Symbol operator+(const Symbol& a, const Symbol& b);
Symbol operator-(const Symbol& a, const Symbol& b);
Symbol operator*(const Symbol& a, const Symbol& b);
Symbol operator*(cplx c, const Symbol& s);

Symbol constant(cplx c);
/// sum_k coeffs[k] z^k.
Symbol polynomial(const std::vector<cplx>& coeffs);
Symbol exp_z();

/// Built-in corpus: zbar, phase, sinre, sinabs2, decaybar, decaybar_chi.
Symbol builtin(const std::string& id);
bool is_builtin(const std::string& id);
std::vector<std::string> builtin_ids();

/// Smooth plateau: 1 for t <= a, 0 for t >= b, C-infinity in between (e^{-1/x} smoothstep).
double plateau(double t, double a, double b);
double plateau_derivative(double t, double a, double b);

/// Finite-difference derivative check at 100 random points of |z| <= 5 and sup-bound check.
/// Throws InvariantViolation naming the failed check.
void check_symbol(const Symbol& s, std::uint64_t seed = 1);

}  // namespace fockbench
