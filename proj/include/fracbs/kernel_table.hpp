#pragma once

#include "fracbs/quadrature.hpp"

#include <functional>
#include <vector>

namespace fracbs {

/// Piecewise Chebyshev interpolant of a function of kappa in (0, kmax] on
/// dyadic panels [kmax 2^{-j-1}, kmax 2^{-j}]. Below the last panel the
/// value at its left end is returned.
class KappaTable {
public:
  KappaTable() = default;
  KappaTable(const std::function<double(double)>& g, double kmax, int panels, int degree = 16);

  double operator()(double kappa) const;
  double kmin() const { return kmin_; }
  double kmax() const { return kmax_; }

private:
  double kmax_ = 0, kmin_ = 0;
  std::vector<ChebPanel> panels_;
  double floor_value_ = 0;
};

} // namespace fracbs
