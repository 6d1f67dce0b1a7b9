#pragma once

#include <vector>

#include "fockbench/common.hpp"

namespace fockbench {

/// Square r-lattice restricted to |a| <= extent + r.
struct Lattice {
  double spacing = 0.0;
  double extent = 0.0;
  std::vector<cplx> points;

  /// Indices k with |z - a_k| < radius.
  std::vector<std::size_t> near(cplx z, double radius) const;

  // Dense index map over grid coordinates (m, n) in [-half, half]^2.
  int half = 0;
  std::vector<int> index;
};

Lattice make_lattice(double r, double extent);

/// #{k : |z - a_k| < radius}.
int covering_count(const Lattice& lat, cplx z, double radius);

/// Throws InvariantViolation if some probe is uncovered by the r-balls or two r/2-balls meet.
void check_lattice(const Lattice& lat, const std::vector<cplx>& probes);

/// Plateau bump: 1 on t <= 1/2, 0 on t >= 3/4.
double bump(double t);
double bump_derivative(double t);

struct PartitionMember {
  std::size_t j;
  double psi;
  cplx dbar_psi;
};

/// psi_j(z) = rho(|z - a_j| / R) / sum_k rho(|z - a_k| / R) over an R/2-lattice.
class PartitionOfUnity {
 public:
  PartitionOfUnity(Lattice lat, double R);

  const Lattice& lattice() const { return lat_; }
  double R() const { return R_; }
  std::size_t size() const { return lat_.points.size(); }
  const std::vector<cplx>& centers() const { return lat_.points; }

  /// Nonzero members at z with their dbar derivatives. Empty outside the covered region.
  std::vector<PartitionMember> members(cplx z) const;

  double psi(std::size_t j, cplx z) const;
  cplx dbar_psi(std::size_t j, cplx z) const;
  /// |grad psi_j| = 2 |dbar psi_j| for real psi_j.
  double grad_norm(std::size_t j, cplx z) const { return 2.0 * std::abs(dbar_psi(j, z)); }

 private:
  Lattice lat_;
  double R_;
};

PartitionOfUnity make_partition(const Lattice& lat, double R);

/// sum_j dbar psi_j(z).
cplx dbar_partition_sum(const PartitionOfUnity& pou, cplx z);

}  // namespace fockbench
