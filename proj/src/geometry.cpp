#include "fockbench/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "fockbench/symbols.hpp"

namespace fockbench {

Lattice make_lattice(double r, double extent) {
  if (!(r > 0.0)) throw InvalidInput("make_lattice: spacing r must be > 0");
  if (!(extent > 0.0)) throw InvalidInput("make_lattice: extent must be > 0");
  Lattice lat;
  lat.spacing = r;
  lat.extent = extent;
  const double reach = extent + r;
  lat.half = static_cast<int>(std::floor(reach / r)) + 1;
  const int side = 2 * lat.half + 1;
  lat.index.assign(static_cast<std::size_t>(side) * side, -1);
  for (int n = -lat.half; n <= lat.half; ++n)
    for (int m = -lat.half; m <= lat.half; ++m) {
      const cplx a(m * r, n * r);
      if (std::abs(a) <= reach * (1.0 + 1e-14)) {
        lat.index[(n + lat.half) * side + (m + lat.half)] = static_cast<int>(lat.points.size());
        lat.points.push_back(a);
      }
    }
  return lat;
}

std::vector<std::size_t> Lattice::near(cplx z, double radius) const {
  std::vector<std::size_t> out;
  const int side = 2 * half + 1;
  const int m0 = std::max(-half, static_cast<int>(std::floor((z.real() - radius) / spacing)));
  const int m1 = std::min(half, static_cast<int>(std::ceil((z.real() + radius) / spacing)));
  const int n0 = std::max(-half, static_cast<int>(std::floor((z.imag() - radius) / spacing)));
  const int n1 = std::min(half, static_cast<int>(std::ceil((z.imag() + radius) / spacing)));
  for (int n = n0; n <= n1; ++n)
    for (int m = m0; m <= m1; ++m) {
      const int k = index[(n + half) * side + (m + half)];
      if (k >= 0 && std::abs(z - points[k]) < radius) out.push_back(static_cast<std::size_t>(k));
    }
  return out;
}

int covering_count(const Lattice& lat, cplx z, double radius) {
  return static_cast<int>(lat.near(z, radius).size());
}

void check_lattice(const Lattice& lat, const std::vector<cplx>& probes) {
  for (cplx z : probes)
    if (std::abs(z) <= lat.extent && lat.near(z, lat.spacing * (1.0 + 1e-12)).empty())
      throw InvariantViolation("Lattice: probe " + format_point(z) + " not covered by any r-ball");
  // Disjointness of half-radius balls: nearest neighbor distance at least r.
  for (std::size_t k = 0; k < lat.points.size(); ++k)
    for (std::size_t j : lat.near(lat.points[k], lat.spacing * (1.0 - 1e-12)))
      if (j != k)
        throw InvariantViolation("Lattice: balls of radius r/2 at " + format_point(lat.points[k]) +
                                 " and " + format_point(lat.points[j]) + " intersect");
}

double bump(double t) { return plateau(t, 0.5, 0.75); }
double bump_derivative(double t) { return plateau_derivative(t, 0.5, 0.75); }

PartitionOfUnity::PartitionOfUnity(Lattice lat, double R) : lat_(std::move(lat)), R_(R) {
  if (!(R > 0.0)) throw InvalidInput("make_partition: R must be > 0");
  if (std::abs(lat_.spacing - 0.5 * R) > 1e-12 * R)
    throw InvalidInput("make_partition: lattice spacing must equal R/2");
}

std::vector<PartitionMember> PartitionOfUnity::members(cplx z) const {
  const auto idx = lat_.near(z, 0.75 * R_);
  std::vector<PartitionMember> out;
  double S = 0.0;
  cplx dS = 0.0;
  std::vector<double> rho(idx.size());
  std::vector<cplx> drho(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const cplx u = z - lat_.points[idx[i]];
    const double t = std::abs(u);
    rho[i] = bump(t / R_);
    drho[i] = t > 0.0 ? bump_derivative(t / R_) * u / (2.0 * t * R_) : 0.0;
    S += rho[i];
    dS += drho[i];
  }
  if (S <= 0.0) return out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (rho[i] == 0.0 && drho[i] == 0.0) continue;
    out.push_back({idx[i], rho[i] / S, (drho[i] * S - rho[i] * dS) / (S * S)});
  }
  return out;
}

double PartitionOfUnity::psi(std::size_t j, cplx z) const {
  for (auto& m : members(z))
    if (m.j == j) return m.psi;
  return 0.0;
}

cplx PartitionOfUnity::dbar_psi(std::size_t j, cplx z) const {
  for (auto& m : members(z))
    if (m.j == j) return m.dbar_psi;
  return 0.0;
}

PartitionOfUnity make_partition(const Lattice& lat, double R) { return PartitionOfUnity(lat, R); }

cplx dbar_partition_sum(const PartitionOfUnity& pou, cplx z) {
  cplx s = 0.0;
  for (auto& m : pou.members(z)) s += m.dbar_psi;
  return s;
}

}  // namespace fockbench
