#include "fracbs/kernel_table.hpp"

#include "fracbs/error.hpp"
#include "fracbs/parallel.hpp"

#include <cmath>

namespace fracbs {

KappaTable::KappaTable(const std::function<double(double)>& g, double kmax, int panels,
                       int degree)
    : kmax_(kmax), kmin_(std::ldexp(kmax, -panels)) {
  if (panels < 1 || degree < 2)
    throw DomainError("KappaTable: need at least one panel of degree >= 2");
  panels_.resize(panels);
  parallel_for(static_cast<std::size_t>(panels), [&](std::size_t j) {
    const double hi = std::ldexp(kmax, -static_cast<int>(j));
    panels_[j] = ChebPanel(0.5 * hi, hi, degree, g);
  });
  floor_value_ = panels_.back()(kmin_);
}

double KappaTable::operator()(double kappa) const {
  if (kappa >= kmax_)
    return panels_.front()(std::min(kappa, kmax_));
  if (kappa <= kmin_)
    return floor_value_;
  int ex = 0;
  std::frexp(kappa / kmax_, &ex);
  // kappa/kmax in [2^{ex-1}, 2^{ex}) -> panel index -ex
  std::size_t j = static_cast<std::size_t>(-ex);
  if (j >= panels_.size())
    return floor_value_;
  return panels_[j](kappa);
}

} // namespace fracbs
