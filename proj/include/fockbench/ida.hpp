#pragma once

#include <memory>
#include <ostream>
#include <optional>
#include <vector>

#include "fockbench/common.hpp"
#include "fockbench/geometry.hpp"
#include "fockbench/quadrature.hpp"
#include "fockbench/symbols.hpp"

namespace fockbench {

struct LocalApproxConfig {
  double q = 2.0;
  double r = 1.0;
  int degree = 8;
  int irls_max_iter = 50;
  double irls_tol = 1e-8;
  /// IRLS smoothing is eps_rel * M_{q,r}(f)(z).
  double eps_rel = 1e-6;
  /// Raise the degree by 2 until the d -> d+2 change is below sweep_tol.
  bool adaptive_degree = true;
  int max_degree = 16;
  double sweep_tol = 1e-4;
  /// Solve q = 2 by weighted least squares (QR) instead of projection.
  bool least_squares_route = false;

  void validate() const;
};

/// h(w) = sum_k a[k] ((w - center) / radius)^k.
struct LocalPoly {
  cplx center = 0.0;
  double radius = 1.0;
  std::vector<cplx> a;

  cplx operator()(cplx w) const;
  cplx derivative(cplx w) const;
  int degree() const { return static_cast<int>(a.size()) - 1; }
};

struct LocalApproxResult {
  LocalPoly h;
  /// Achieved M_{q,r}(f - h)(z).
  double value = 0.0;
  int degree = 0;
  /// q < 1: value is an IRLS fixed point, an upper bound for the infimum only.
  bool upper_bound_only = false;
  bool converged = true;
  int iterations = 0;
  std::vector<double> residual_history;
  /// d -> d+2 change below sweep_tol.
  bool degree_stable = true;
  double sweep_delta = 0.0;
  /// sup_{B(z,r/2)} |h| / M_{q,r}(f)(z).
  double boundedness_ratio = 0.0;
  double mean_f = 0.0;
};

/// ((1/|B|) int_{B(z,r)} |f|^q dv)^{1/q}.
double mean_M(const CFunc& f, double q, double r, cplx z);
double mean_M(const Symbol& f, double q, double r, cplx z);

LocalApproxResult local_best_holo(const CFunc& f, const LocalApproxConfig& cfg, cplx z);
LocalApproxResult local_best_holo(const Symbol& f, const LocalApproxConfig& cfg, cplx z);

/// G_{q,r}(f)(z), the achieved minimum.
double G(const CFunc& f, const LocalApproxConfig& cfg, cplx z);
double G(const Symbol& f, const LocalApproxConfig& cfg, cplx z);

/// Local Bergman projection P_{z,r}(f) truncated at degree d.
LocalPoly local_projection(const CFunc& f, cplx z, double r, int d);
LocalPoly local_projection(const Symbol& f, cplx z, double r, int d);

/// M_{2,s}(f - P_{z,r} f)(w) / G_{2,r}(f)(z) for w in B(z, (r-s)/2).
double projection_chain_ratio(const Symbol& f, cplx z, double r, double s, cplx w, int d);

struct GField {
  std::vector<cplx> centers;
  std::vector<double> values;
  LocalApproxConfig cfg;
  std::size_t flagged = 0;
};

GField g_field(const Symbol& f, const LocalApproxConfig& cfg, const std::vector<cplx>& centers);
void write_gfield_csv(const GField& g, std::ostream& os);

/// Lattice points of spacing `spacing` inside the closed disk of radius extent.
std::vector<cplx> disk_grid(double spacing, double extent);

struct ExponentTriple {
  double p = 2.0, q = 2.0, s = INFINITY;
};
ExponentTriple make_exponents(double p, double q);

struct SeminormResult {
  double value = 0.0;
  bool extent_sufficient = true;
  std::string flag;
  GField field;
};

/// ||G_{q,r}(f)||_{L^s} over the spacing-1/2 grid of the extent disk (sup for s = inf).
SeminormResult seminorm_IDA(const Symbol& f, double s, double q, double r = 1.0, double extent = 8.0);

struct RingTable {
  double r = 1.0;
  std::vector<double> radii;
  std::vector<double> maxima;
  bool decaying = false;
};

struct VdaReport {
  RingTable first, second;
  bool verdicts_agree = false;
};

/// Ring maxima of G_{q,r}; decaying iff last < 0.2 * first. Repeated at r/2.
VdaReport vda_probe(const Symbol& f, double q, double r, const std::vector<double>& radii);
RingTable ring_maxima(const CFunc& field, double r, const std::vector<double>& radii);

/// f = f1 + f2 with f1 = sum_j h_j psi_j over a t/2-lattice.
class Decomposition {
 public:
  struct Certificates {
    double sup_dbar_f1 = 0.0;
    double sup_mean_dbar_f1 = 0.0;
    double sup_mean_f2 = 0.0;
    double ratio_dbar_f1 = 0.0;
    double ratio_mean_dbar_f1 = 0.0;
    double ratio_mean_f2 = 0.0;
    std::size_t probes = 0;
    std::size_t skipped = 0;
    std::size_t flagged_solves = 0;
    double max_ratio() const;
  };

  cplx f1(cplx z) const;
  cplx dbar_f1(cplx z) const;
  cplx f2(cplx z) const { return f_.f(z) - f1(z); }
  /// Local pieces h_j and psi_j (for conjugate-side constructions).
  const LocalPoly& piece(std::size_t j) const;
  const PartitionOfUnity& partition() const { return *pou_; }

  double t() const { return t_; }
  double q() const { return q_; }
  const Certificates& certificates() const { return cert_; }
  std::size_t flagged_solves() const { return flagged_; }

 private:
  friend Decomposition build_decomposition(const Symbol&, double, double, double, double, bool, double);
  Symbol f_;
  double q_ = 2.0, t_ = 1.0;
  bool projection_ = false;
  int degree_ = 8;
  double local_radius_ = 1.0;
  std::shared_ptr<PartitionOfUnity> pou_;
  mutable std::vector<std::optional<LocalPoly>> cache_;
  mutable std::size_t flagged_ = 0;
  Certificates cert_;
};

/// Shared builder: lattice spacing partition_R/2, partition radius partition_R, local pieces
/// on B(a_j, local_r). Certificates are computed on a probe grid of spacing probe_spacing.
Decomposition build_decomposition(const Symbol& f, double q, double partition_R, double local_r,
                                  double extent, bool projection, double probe_spacing);

/// Local pieces h_j from local_best_holo at radius t; certificates against G_{q,2t}(f).
Decomposition decompose(const Symbol& f, double q, double t, double extent = 4.0, double probe_spacing = 0.0);
/// Local pieces P_{a_j,t}(f); requires q >= 1.
Decomposition decompose_proj(const Symbol& f, double q, double t, double extent = 4.0, double probe_spacing = 0.0);

/// Corpus-wide bound for all decomposition certificate ratios.
inline constexpr double kDecompositionConstant = 1.0;

/// Mean-square oscillation about the ball average.
double MO(const CFunc& f, double r, cplx z);
double MO(const Symbol& f, double r, cplx z);

struct BmoBdaReport {
  double C1 = INFINITY, C2 = 0.0;
  std::size_t points = 0, skipped = 0;
  double max_conjugation_asymmetry = 0.0;
};

/// Ratios MO / (G(f) + G(conj f)) over radii and grid; asymmetry is max |G(f) - G(conj f)|.
BmoBdaReport bmo_bda_check(const Symbol& f, const std::vector<double>& radii, const std::vector<cplx>& grid);

inline constexpr double kScanResolution = 0.01;

struct ScanTable {
  std::vector<double> radii;
  std::vector<double> sup_mo, sup_g, sup_g_conj;
  bool vmo_consistent = false;
  bool vda_star_consistent = false;
  bool vda_star_conj_consistent = false;
};

/// sup_z MO_{2,r} and sup_z G_{2,r} (of f and conj f) per r of a decreasing schedule.
ScanTable small_scale_scan(const Symbol& f, const std::vector<double>& schedule, const std::vector<cplx>& grid);

struct Measure {
  std::vector<std::pair<cplx, double>> atoms;
  std::function<double(cplx)> density;
};

/// mu(B(z, r)).
double averaging_function(const Measure& mu, double r, cplx z);

struct ImoReport {
  SeminormResult f, f_conj;
  bool both_finite = false;
  bool both_decaying = false;
};

ImoReport imo_check(const Symbol& f, double s, double q, double extent = 8.0);

}  // namespace fockbench
