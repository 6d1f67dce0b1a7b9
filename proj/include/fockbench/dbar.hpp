#pragma once

#include <istream>
#include <ostream>
#include <vector>

#include "fockbench/fockcore.hpp"
#include "fockbench/symbols.hpp"

namespace fockbench {

/// Square tensor grid over [-L, L)^2: node (ix, iy) at (-L + ix h, -L + iy h), h = 2L/n.
/// Row-major storage, v[iy * n + ix].
struct FieldGrid {
  double L = 0.0;
  double h = 0.0;
  std::size_t n = 0;
  std::vector<cplx> v;

  static FieldGrid zeros(double L, std::size_t n);
  static FieldGrid sample(const CFunc& f, double L, std::size_t n);

  double coord(std::size_t i) const { return -L + static_cast<double>(i) * h; }
  cplx point(std::size_t ix, std::size_t iy) const { return {coord(ix), coord(iy)}; }
  cplx& at(std::size_t ix, std::size_t iy) { return v[iy * n + ix]; }
  const cplx& at(std::size_t ix, std::size_t iy) const { return v[iy * n + ix]; }

  /// Throws InvalidInput unless h <= L/128.
  void check_resolution() const;
  /// Throws InvalidInput if the outer band of width L/4 carries more than rel * max |v|.
  void check_padding(double rel = 1e-8) const;
};

/// 32-byte little-endian header (L, h as f64; nx, ny as u64) then interleaved re/im f64.
void write_field_binary(std::ostream& os, const FieldGrid& g);
FieldGrid read_field_binary(std::istream& is);
/// Columns x, y, re, im.
void write_field_csv(std::ostream& os, const FieldGrid& g);

/// (h^2 sum |v|^2 e^{-alpha |z|^2})^{1/2} over nodes at least `margin` cells from the edge.
/// alpha = 0 gives the plain L^2 norm.
double grid_norm(const FieldGrid& g, double alpha, std::size_t margin = 0);

/// Fourth-order central-difference dbar derivative; zero within two cells of the edge.
FieldGrid dbar_fd(const FieldGrid& u);

/// dbar(1/(pi z)) = delta fixes the constant of the kernel e^{alpha conj(xi)(z - xi)} / (z - xi).
inline constexpr double kAphiC0 = 1.0 / kPi;

/// u = c0 int e^{alpha conj(xi)(z - xi)} S(xi) / (z - xi) dv(xi) over the grid. Midpoint rule away
/// from the target, polar quadrature on the 5x5-cell square around it.
/// Rejects S whose weighted size |S| e^{-alpha|z|^2/2} on the edge exceeds 1e-8 of its peak.
FieldGrid solve_Aphi(const FieldGrid& S, double alpha, double c0 = kAphiC0);

/// Weighted relative residual ||(dbar_fd u - S) e^{-phi}|| / ||S e^{-phi}|| with a 3-cell margin.
double dbar_residual(const FieldGrid& u, const FieldGrid& S, double alpha);

struct Calibration {
  double c0 = 0.0;
  double residual = 0.0;
};

/// Least-squares c0 from S = dbar(e^{-|z|^2}), and the residual of the solve at that c0.
Calibration calibrate_Aphi(double alpha = 1.0, double L = 6.0, std::size_t n = 256);

struct DbarHankel {
  /// A_phi(g dbar f) - P(A_phi(g dbar f)) on the grid.
  FieldGrid value;
  /// f g - P(f g) on the same grid, from the Fock-space projection.
  FieldGrid direct;
  double norm_dbar = 0.0;
  double norm_direct = 0.0;
  /// ||value - direct||_{2 phi} / ||direct||_{2 phi}.
  double relative_difference = 0.0;
  double residual = 0.0;
};

/// H_f g through the dbar solver, compared with the projection route. g = sum g_coeffs[k] e_k.
DbarHankel hankel_via_dbar(const Symbol& f, const std::vector<cplx>& g_coeffs, const FockBasis& basis,
                           const QuadratureGrid& grid, double L = 7.0, std::size_t n = 256);

/// Cauchy transform u(w) = (1/pi) int_{B(center, r)} S(xi) / (w - xi) dv(xi), evaluated for w in
/// the open disk by polar quadrature centered at w.
CFunc local_dbar_solve(const CFunc& S, cplx center, double r, int n_radial = 24, int n_angular = 96);

/// ||u||_{L^q(B)} / ||S||_{L^q(B)} for the Cauchy-transform solution.
double local_solve_ratio(const CFunc& S, cplx center, double r, double q);

/// Ahlfors-Beurling transform by the FFT multiplier conj(k)/k on a 2x zero-padded grid.
FieldGrid beurling(const FieldGrid& S);

/// Relative L^2 difference between the transform of dbar f and d f for a closed-form symbol.
double beurling_identity_error(const Symbol& f, double L = 8.0, std::size_t n = 512);

/// ||df/dz||_{L^s} / ||df/dzbar||_{L^s} on a grid over [-L, L)^2; 1 < s < inf.
double conjugate_gradient_bound_check(const Symbol& f, double s, double L = 6.0, std::size_t n = 256);

struct ConjugateScaleRow {
  double R = 0.0;
  double sup_dbar_conj_f1 = 0.0;
  double sup_d_f1 = 0.0;
  /// R sup|dbar conj(f_{1,R})| / ||f||_inf.
  double product = 0.0;
};

struct ConjugateDecompositionReport {
  std::vector<ConjugateScaleRow> rows;
  /// Largest product: the recorded constant.
  double C = 0.0;
  /// max product / min product over the schedule.
  double spread = 1.0;
};

/// f_{1,R} = sum psi_{j,R} h_{j,R} with pieces fitted on B(a_j, 2R); sup |dbar conj f_{1,R}| over
/// probes of |z| <= extent.
ConjugateDecompositionReport conjugate_decomposition_check(const Symbol& f, double q,
                                                           const std::vector<double>& schedule,
                                                           double extent = 4.0, double spacing = 0.25);

}  // namespace fockbench
