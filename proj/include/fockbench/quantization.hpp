#pragma once

#include <Eigen/Dense>

#include <ostream>
#include <string>
#include <vector>

#include "fockbench/fockcore.hpp"
#include "fockbench/symbols.hpp"

namespace fockbench {

/// Strictly decreasing scales in (0, 1], smallest >= 0.01.
struct ScaleSchedule {
  std::vector<double> t;

  void validate() const;
  /// 1, 1/2, 1/4, ... while above tmin, then tmin.
  static ScaleSchedule down_to(double tmin);
};

/// z -> f(z sqrt(t)); derivatives carry the factor sqrt(t).
Symbol dilate_symbol(const Symbol& f, double t);

struct DefectRow {
  double t = 1.0;
  double defect_norm = 0.0;
  double hankel_f_bar_norm = 0.0;
  double hankel_g_norm = 0.0;
  double product_bound = 0.0;
};

struct DefectTable {
  std::string f_id, g_id;
  std::vector<DefectRow> rows;
  /// defect(t_last) / defect(t_first); 0 when the first defect vanishes.
  double decay_ratio() const;
};

/// Spectral norm of T_{f_t} T_{g_t} - T_{f_t g_t} on the guarded block N/2+1, with the
/// Hankel-norm product bound, for every t of the schedule.
DefectTable semiclassical_defect(const Symbol& f, const Symbol& g, const ScaleSchedule& schedule,
                                 const FockBasis& basis, const QuadratureGrid& grid);

/// Defect CSV: t, defect_norm, hankel_f_bar_norm, hankel_g_norm, product_bound.
void write_defect_csv(std::ostream& os, const DefectTable& table);

/// hankel_norm of the dilated symbol.
double hankel_scale_norm(const Symbol& f, double t, const FockBasis& basis, const QuadratureGrid& grid);

/// max entrywise |(T_f T_g - T_{fg}) + (H_{conj f})^* H_g| on the guarded block, with the Hankel
/// side formed from residual functions (I - P) sampled on the grid.
double factorization_identity_error(const Symbol& f, const Symbol& g, const FockBasis& basis,
                                    const QuadratureGrid& grid);

/// Toeplitz matrix at scale t by direct quadrature of f e^{(t)}_k conj(e^{(t)}_j) dmu_t on a tensor
/// rule, e^{(t)}_k(z) = e_k(z / sqrt t), dmu_t = t^{-1} e^{-alpha |z|^2 / t} dv.
Eigen::MatrixXcd scaled_toeplitz_direct(const CFunc& f, double t, const FockBasis& basis, std::size_t n_per_axis = 160);

enum class Verdict { positive, negative, indeterminate };
std::string to_string(Verdict v);

/// Defect-decay verdict: positive below 0.25, negative at or above 0.5, indeterminate between.
Verdict defect_verdict(double decay_ratio);

struct ClassifyReport {
  Verdict vda_conj = Verdict::indeterminate;  // small-scale decay of G(conj f)
  Verdict vmo = Verdict::indeterminate;       // small-scale decay of MO
  Verdict defect = Verdict::indeterminate;    // worst decay over the g-panel
  std::vector<DefectTable> panel;
  bool consistent = false;
  bool trivial = false;
};

/// Verdicts from small_scale_scan on |z| <= extent and from the defect over the g-panel
/// {conj f, phase, sinre} on t in {1, 0.5, 0.25, 0.1}.
ClassifyReport quantization_classify(const Symbol& f, double extent = 8.0, int N = 200);

}  // namespace fockbench
