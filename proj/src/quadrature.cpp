#include "fockbench/quadrature.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

namespace fockbench {

std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

QuadratureGrid QuadratureGrid::polar(double r_max, std::size_t n_angles, double panel_width,
                                     int per_panel) {
  if (!(r_max > 0.0) || n_angles < 4 || !(panel_width > 0.0) || per_panel < 2)
    throw InvalidInput("QuadratureGrid::polar: invalid parameters");
  QuadratureGrid g;
  g.scheme_ = Scheme::polar;
  g.r_max_ = r_max;
  g.n_angles_ = n_angles;
  g.per_panel_ = per_panel;
  const double u_max = r_max * r_max;
  const auto n_panels = static_cast<std::size_t>(std::ceil(u_max / panel_width - 1e-12));
  const double width = u_max / static_cast<double>(n_panels);
  g.panel_width_ = width;
  std::vector<double> x, w;
  for (std::size_t p = 0; p < n_panels; ++p) {
    gauss_legendre(per_panel, p * width, (p + 1) * width, x, w);
    for (int k = 0; k < per_panel; ++k) {
      g.radii_.push_back(std::sqrt(x[k]));
      // dv = r dr dtheta = (1/2) du dtheta; the angular mean supplies 1/n_angles.
      g.ring_w_.push_back(kPi * w[k]);
    }
  }
  return g;
}

QuadratureGrid QuadratureGrid::for_degree(double alpha, int N) {
  if (!(alpha > 0.0) || N < 0) throw InvalidInput("QuadratureGrid::for_degree: alpha > 0, N >= 0");
  const double r_max = std::sqrt(2.0 * (N + 1) / alpha) + 6.0 / std::sqrt(alpha);
  return polar(r_max, 4 * static_cast<std::size_t>(N) + 16, 8.0 / alpha, 20);
}

QuadratureGrid QuadratureGrid::tensor(double r_max, std::size_t n_per_axis) {
  if (!(r_max > 0.0) || n_per_axis < 2) throw InvalidInput("QuadratureGrid::tensor: invalid parameters");
  QuadratureGrid g;
  g.scheme_ = Scheme::tensor;
  g.r_max_ = r_max;
  g.tensor_n_ = n_per_axis;
  std::vector<double> x, w;
  gauss_legendre(static_cast<int>(n_per_axis), -r_max, r_max, x, w);
  for (std::size_t i = 0; i < n_per_axis; ++i)
    for (std::size_t j = 0; j < n_per_axis; ++j) {
      cplx z(x[i], x[j]);
      if (std::abs(z) <= r_max) {
        g.nodes_.push_back(z);
        g.weights_.push_back(w[i] * w[j]);
      }
    }
  return g;
}

QuadratureGrid QuadratureGrid::refined() const {
  if (scheme_ == Scheme::tensor) return tensor(r_max_, 2 * tensor_n_);
  return polar(r_max_, 2 * n_angles_, panel_width_ / 2.0, per_panel_);
}

std::size_t QuadratureGrid::size() const {
  return scheme_ == Scheme::polar ? radii_.size() * n_angles_ : nodes_.size();
}

double QuadratureGrid::angle(std::size_t l) const {
  return 2.0 * kPi * static_cast<double>(l) / static_cast<double>(n_angles_);
}

cplx QuadratureGrid::node(std::size_t i) const {
  if (scheme_ == Scheme::tensor) return nodes_[i];
  return std::polar(radii_[i / n_angles_], angle(i % n_angles_));
}

double QuadratureGrid::weight(std::size_t i) const {
  if (scheme_ == Scheme::tensor) return weights_[i];
  return ring_w_[i / n_angles_] / static_cast<double>(n_angles_);
}

DiskRule::DiskRule(int n_radial, int n_angular) {
  std::vector<double> s, w;
  gauss_legendre(n_radial, 0.0, 1.0, s, w);
  for (int i = 0; i < n_radial; ++i)
    for (int l = 0; l < n_angular; ++l) {
      nodes_.push_back(std::polar(std::sqrt(s[i]), 2.0 * kPi * l / n_angular));
      weights_.push_back(kPi * w[i] / n_angular);
    }
}

const DiskRule& DiskRule::standard() {
  static const DiskRule rule(24, 96);
  return rule;
}

AngularFft::AngularFft(std::size_t n) : n_(n) {
  buf_in_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n));
  buf_out_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n));
  std::lock_guard<std::mutex> lock(fftw_plan_mutex());
  plan_ = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(buf_in_),
                           reinterpret_cast<fftw_complex*>(buf_out_), FFTW_FORWARD, FFTW_ESTIMATE);
}

AngularFft::~AngularFft() {
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  fftw_free(buf_in_);
  fftw_free(buf_out_);
}

void AngularFft::forward(const cplx* in, cplx* out) {
  std::memcpy(buf_in_, in, sizeof(cplx) * n_);
  fftw_execute(static_cast<fftw_plan>(plan_));
  const double s = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = buf_out_[i] * s;
}

}  // namespace fockbench
