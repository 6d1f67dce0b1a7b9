#pragma once

#include <mutex>
#include <vector>

#include "fockbench/common.hpp"

namespace fockbench {

enum class Scheme { tensor, polar };

/// Nodes and Lebesgue weights on a disk of radius r_max.
///
/// The polar scheme is a product of a composite Gauss-Legendre rule in u = r^2 and a
/// uniform angular rule; node (i, l) sits at radii()[i] * exp(2 pi i l / n_angles) and has
/// weight ring_weights()[i] / n_angles.
class QuadratureGrid {
 public:
  /// Polar rule; radial panels of width panel_width in u = r^2 with per_panel nodes each.
  static QuadratureGrid polar(double r_max, std::size_t n_angles, double panel_width,
                              int per_panel = 20);
  /// Compliant grid for degree cutoff N of the standard weight with parameter alpha.
  static QuadratureGrid for_degree(double alpha, int N);
  /// Tensor Gauss-Legendre product on [-r_max, r_max]^2, nodes outside the disk dropped.
  static QuadratureGrid tensor(double r_max, std::size_t n_per_axis);

  /// Same scheme with twice the nodes along every axis.
  QuadratureGrid refined() const;

  Scheme scheme() const { return scheme_; }
  double r_max() const { return r_max_; }
  std::size_t size() const;
  cplx node(std::size_t i) const;
  double weight(std::size_t i) const;

  // Polar structure.
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& ring_weights() const { return ring_w_; }
  std::size_t n_angles() const { return n_angles_; }
  double angle(std::size_t l) const;

 private:
  Scheme scheme_ = Scheme::polar;
  double r_max_ = 0.0;
  double panel_width_ = 0.0;
  int per_panel_ = 0;
  std::vector<double> radii_, ring_w_;
  std::size_t n_angles_ = 0;
  std::vector<cplx> nodes_;
  std::vector<double> weights_;
  std::size_t tensor_n_ = 0;
};

/// Product rule on the unit disk (Gauss-Legendre in s = rho^2, uniform angles); weights sum to pi.
class DiskRule {
 public:
  DiskRule(int n_radial, int n_angular);
  static const DiskRule& standard();

  const std::vector<cplx>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<cplx> nodes_;
  std::vector<double> weights_;
};

/// Guards FFTW plan creation and destruction (the planner is not reentrant).
std::mutex& fftw_plan_mutex();

/// Normalized 1D DFT of fixed length: out[m] = (1/n) sum_l in[l] e^{-2 pi i m l / n}.
class AngularFft {
 public:
  explicit AngularFft(std::size_t n);
  ~AngularFft();
  AngularFft(const AngularFft&) = delete;
  AngularFft& operator=(const AngularFft&) = delete;

  void forward(const cplx* in, cplx* out);
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  void* plan_;
  cplx* buf_in_;
  cplx* buf_out_;
};

}  // namespace fockbench
