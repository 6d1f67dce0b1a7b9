#pragma once

#include <Eigen/Dense>

#include <ostream>
#include <string>
#include <vector>

#include "fockbench/fockcore.hpp"
#include "fockbench/ida.hpp"
#include "fockbench/symbols.hpp"

namespace fockbench {

/// T_{jk} = <f e_k, e_j>, A_{jk} = <|f|^2 e_k, e_j> on the truncated basis.
struct GramPair {
  Eigen::MatrixXcd T;
  Eigen::MatrixXcd A;
  int N = 0;
  double alpha = 1.0;
  double r_max = 0.0;
  std::string symbol_id;
  /// max |A - A^*| before symmetrization.
  double hermitian_defect = 0.0;

  /// Leading block size N/2 + 1 on which truncation-free identities are asserted.
  int guarded() const { return N / 2 + 1; }
};

/// Truncated Toeplitz matrix of f (angular FFT per ring). Rejects symbols whose weighted
/// integrand at R_max exceeds 1e-8 of its peak.
Eigen::MatrixXcd toeplitz_matrix(const CFunc& f, const FockBasis& basis, const QuadratureGrid& grid);

GramPair assemble(const Symbol& f, const FockBasis& basis, const QuadratureGrid& grid);

/// Gram pair of conj(f) from that of f: T_{conj f} = T_f^*, A unchanged.
GramPair conjugate_pair(const GramPair& gp);

/// A - T^*T on the leading block (all N+1 rows of T enter T^*T).
Eigen::MatrixXcd hankel_gram(const GramPair& gp, int block);

/// sqrt(lambda_max(clip+(A - T^*T))) on the guarded block.
double hankel_norm(const GramPair& gp);
double hankel_norm(const GramPair& gp, int block);

/// Smallest eigenvalue of A - T^*T on the guarded block (PSD check).
double hankel_gram_min_eig(const GramPair& gp);

/// Smallest N whose basis captures k_z for |z| <= R: ceil(alpha R^2 + 7 sqrt(alpha) R + 20).
int probe_degree(double alpha, double R);

/// ||H_f k_z||_{2,phi} via ||f k_z||^2 - ||P_N(f k_z)||^2 over the annulus carrying k_z.
double hankel_on_kernel(const CFunc& f, cplx z, const FockBasis& basis, const QuadratureGrid& grid);

struct ProbeTable {
  std::vector<double> radii;
  std::vector<double> values;  // sup over the ring
  bool decaying = false;       // last < 0.2 * first (heuristic)
  double variation() const;    // (max - min) / max
};

/// sup_{|z| = R} ||H_f k_z|| over `angles` equispaced probes per ring.
ProbeTable compact_probe(const Symbol& f, const std::vector<double>& radii, const FockBasis& basis,
                         const QuadratureGrid& grid, int angles = 8);

/// compact_probe with a basis of degree probe_degree(alpha, max radius).
ProbeTable compact_probe_auto(const Symbol& f, const std::vector<double>& radii, double alpha = 1.0,
                              int angles = 8);

/// ||(I - P)(f o phi_lambda)||_{2,phi}, phi_lambda(z) = z + lambda.
double stroethoff_value(const CFunc& f, cplx lambda, const FockBasis& basis, const QuadratureGrid& grid);

struct StroethoffTable {
  ProbeTable table;
  bool unbounded_warning = false;
};

/// Ring suprema of the translate-then-project residual.
StroethoffTable stroethoff_probe(const Symbol& f, const std::vector<double>& radii, const FockBasis& basis,
                                 const QuadratureGrid& grid, int angles = 8);

struct LowerBoundReport {
  std::vector<cplx> points;
  std::vector<double> ratios;
  double min_ratio = INFINITY, max_ratio = 0.0;
  std::size_t skipped = 0;
  bool vacuous = false;
};

/// ||H_f k_z|| / G_{2,r0}(f)(z) over the grid; ||H_f k_z|| via the translation identity
/// ||H_f k_z|| = sqrt(alpha/pi) ||(I-P) f(. + z)||.
LowerBoundReport hankel_lower_bound_check(const Symbol& f, const std::vector<cplx>& grid, double r0,
                                          double alpha = 1.0);

struct BergerCoburnReport {
  double norm_f = 0.0, norm_fbar = 0.0;
  double norm_ratio = 1.0;
  ProbeTable probe_f, probe_fbar;
  bool verdicts_agree = false;
};

/// Norms on the given basis; probe tables on a capture-compliant basis for the rings.
BergerCoburnReport berger_coburn_compare(const Symbol& f, const FockBasis& basis, const QuadratureGrid& grid,
                                         const std::vector<double>& rings, int angles = 8);

struct SeminormRatio {
  double ratio = 0.0;
  double hankel_norm = 0.0;
  double seminorm = 0.0;
  bool vacuous = false;
};

/// hankel_norm(f) / seminorm_IDA(f, inf, 2).
SeminormRatio seminorm_vs_norm(const Symbol& f, const FockBasis& basis, const QuadratureGrid& grid,
                               double extent = 6.0);

/// Report CSV with one row per ring.
void write_operator_report(std::ostream& os, const std::string& symbol_id, int N, double r_max,
                           double norm, const ProbeTable& table);

}  // namespace fockbench
