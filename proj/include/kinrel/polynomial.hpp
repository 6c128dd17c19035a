#ifndef KINREL_POLYNOMIAL_HPP
#define KINREL_POLYNOMIAL_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kinrel {

/// Real polynomial stored by ascending degree: c[0] + c[1] x + c[2] x^2 + ...
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  Polynomial(std::initializer_list<double> ascending) : Polynomial(std::vector<double>(ascending)) {}
  explicit Polynomial(std::vector<double> ascending);

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative() const;
  /// p(-x)
  Polynomial reflected() const;
  Polynomial scaled(double factor) const;

  std::size_t degree() const { return coeffs_.size() - 1; }
  std::span<const double> coefficients() const { return coeffs_; }
  double coefficient(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }
  bool is_constant() const { return coeffs_.size() == 1; }

 private:
  std::vector<double> coeffs_;
};

}  // namespace kinrel

#endif  // KINREL_POLYNOMIAL_HPP
