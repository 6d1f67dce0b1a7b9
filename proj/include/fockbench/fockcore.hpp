#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "fockbench/common.hpp"
#include "fockbench/quadrature.hpp"

namespace fockbench {

enum class WeightKind { standard, fock_sobolev, custom };

struct HessianBounds {
  double m = 0.0;
  double M = 0.0;
};

/// The exponent phi of the measure e^{-p phi} dv.
class Weight {
 public:
  /// phi = (alpha/2)|z|^2.
  static Weight standard(double alpha);
  /// phi = |z|^2 - (1/2) log(1 + |z|^2); real Hessian eigenvalues in [1, 17/8].
  static Weight fock_sobolev();
  static Weight custom(std::string name, std::function<double(cplx)> phi, CFunc dphi,
                       HessianBounds bounds);

  WeightKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  /// Only meaningful for the standard kind.
  double alpha() const { return alpha_; }
  double evaluate(cplx z) const { return phi_(z); }
  cplx wirtinger_gradient(cplx z) const { return dphi_(z); }
  HessianBounds hessian_bounds() const { return bounds_; }

  /// Throws InvalidInput unless kind() == standard.
  void require_standard(const std::string& op) const;

 private:
  WeightKind kind_ = WeightKind::standard;
  std::string name_;
  double alpha_ = 0.0;
  std::function<double(cplx)> phi_;
  CFunc dphi_;
  HessianBounds bounds_;
};

/// Eigenvalues (ascending) of the central-difference real Hessian of phi at z.
std::pair<double, double> differenced_hessian_eigs(const Weight& w, cplx z, double step = 1e-4);

/// Throws InvariantViolation if a sample's Hessian leaves [m - 1e-4 M, M + 1e-4 M].
void check_weight_invariants(const Weight& w, const std::vector<cplx>& samples);

/// e_k(z) = c_k z^k with c_k = sqrt(alpha^{k+1} / (pi k!)).
class FockBasis {
 public:
  FockBasis(double alpha, int N);

  double alpha() const { return alpha_; }
  int N() const { return N_; }
  std::size_t dim() const { return static_cast<std::size_t>(N_) + 1; }
  double c(int k) const { return std::exp(log_c_[k]); }
  double log_c(int k) const { return log_c_[k]; }
  cplx eval(int k, cplx z) const;

  /// b_k(r) = c_k r^k e^{-alpha r^2 / 2} for k = 0..N, evaluated in log form.
  void radial_factors(double r, double* out) const;

  /// Replace the normalization constants (fault injection for the suite).
  void override_constants(const std::vector<double>& c);

 private:
  double alpha_;
  int N_;
  std::vector<double> log_c_;
};

/// (alpha/pi) exp(alpha z conj(w)). The reproducing kernel at z is xi -> kernel(z, xi, alpha).
cplx kernel(cplx w, cplx z, double alpha);

/// | |K(z, w)| e^{-phi(z) - phi(w)} - (alpha/pi) e^{-alpha |z - w|^2 / 2} |.
double kernel_modulus_defect(cplx z, cplx w, double alpha);

/// xi -> K(xi, z) / sqrt(K(z, z)), computed in log form.
CFunc normalized_kernel(cplx z, double alpha);

/// sum over nodes of f conj(g) e^{-2 phi} weight, fixed pairwise reduction.
cplx inner(const CFunc& f, const CFunc& g, const QuadratureGrid& grid, const Weight& phi);

/// (int |f|^p e^{-p phi} dv)^{1/p}.
double norm_p(const CFunc& f, double p, const QuadratureGrid& grid, const Weight& phi);

/// Coefficients <f, e_k>_{2 phi}, k = 0..N.
std::vector<cplx> project(const CFunc& f, const FockBasis& basis, const QuadratureGrid& grid,
                          const Weight& phi);

/// Fills samples[l] with F(r e^{i theta_l}) e^{-alpha r^2 / 2}.
using RingSampler = std::function<void(double r, std::vector<cplx>& samples)>;

struct WeightedProjection {
  std::vector<cplx> coeffs;  // <F, e_k>, k = 0..N
  double norm_sq = 0.0;      // ||F||^2_{2 phi}
};

/// Projection of F supplied in weighted form, restricted to rings [ring_begin, ring_end).
WeightedProjection project_weighted(const RingSampler& sampler, const FockBasis& basis,
                                    const QuadratureGrid& grid, std::size_t ring_begin = 0,
                                    std::size_t ring_end = static_cast<std::size_t>(-1));

/// <e_k, e_j>_{2 phi} by direct node sums with FockBasis::eval (no angular FFT).
Eigen::MatrixXcd gram_matrix(const FockBasis& basis, const QuadratureGrid& grid, const Weight& phi);

/// max over points z and k of |<e_k, K(., z)> - e_k(z)| e^{-phi(z)}.
double reproducing_error(const FockBasis& basis, const QuadratureGrid& grid, const std::vector<cplx>& points);

/// Function sum_k coeffs[k] e_k.
CFunc basis_combination(const FockBasis& basis, const std::vector<cplx>& coeffs);

/// Per-center ratios |f(z) e^{-phi(z)}|^p / int_{B(z,r)} |f e^{-phi}|^p dv.
std::vector<double> bergman_ratios(const CFunc& f, double p, double r,
                                   const std::vector<cplx>& centers, const Weight& phi);

/// Worst (largest) Bergman ratio over the centers.
double bergman_inequality_check(const CFunc& f, double p, double r,
                                const std::vector<cplx>& centers, const Weight& phi);

}  // namespace fockbench
