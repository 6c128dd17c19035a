#include "kinrel/polynomial.hpp"

#include <cmath>

#include "kinrel/errors.hpp"

namespace kinrel {

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw ModelError("polynomial coefficient is not finite");
  }
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() == 1) return Polynomial{0.0};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::reflected() const {
  std::vector<double> r(coeffs_);
  for (std::size_t k = 1; k < r.size(); k += 2) r[k] = -r[k];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::scaled(double factor) const {
  std::vector<double> r(coeffs_);
  for (double& c : r) c *= factor;
  return Polynomial(std::move(r));
}

}  // namespace kinrel
