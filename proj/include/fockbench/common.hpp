#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fockbench {

using cplx = std::complex<double>;
using CFunc = std::function<cplx(cplx)>;

inline constexpr double kPi = 3.14159265358979323846;

/// Rejected input: violated precondition or malformed configuration.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A checked invariant failed on computed data.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-tree pairwise summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> v);
cplx pairwise_sum(std::span<const cplx> v);

/// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

inline bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

std::string format_point(cplx z);

}  // namespace fockbench
