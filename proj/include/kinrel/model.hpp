#ifndef KINREL_MODEL_HPP
#define KINREL_MODEL_HPP

// Flux and coefficient data of the diffusive-dispersive conservation law
//
//   u_t + f(u)_x = eps (b(u) u_x)_x + delta (c1(u) (c2(u) u_x)_x)_x
//
// together with the scalar functions built on top of it: chord speeds, the
// equilibria of the traveling-wave system, the tangent function phi_natural,
// the potential G, the entropy dissipation E and the zero-dissipation
// function phi_zero.

#include <functional>
#include <memory>
#include <optional>

#include "kinrel/polynomial.hpp"

namespace kinrel {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double u) const { return u >= lo && u <= hi; }
  double width() const { return hi - lo; }
};

inline constexpr Interval kDefaultDomain{-10.0, 10.0};

enum class FluxClass { convex, concave, concave_convex, convex_concave, other };

const char* to_string(FluxClass c);

/// Polynomial description of a model, kept when the model was built from
/// polynomials so that it can be reflected, serialized or recognized.
struct PolynomialModel {
  Polynomial flux;
  Polynomial b;
  Polynomial c1;
  Polynomial c2;
};

/// Flux f with analytic derivatives f', f'', f''' and the coefficients
/// b, c1, c2 on a working interval containing 0.  Immutable and cheap to copy.
class FluxModel {
 public:
  using Function = std::function<double(double)>;

  struct Functions {
    Function f, f1, f2, f3;
    Function b, c1, c2;
  };

  /// Validates positivity of b, c1, c2 (1e3 samples) and checks the supplied
  /// derivatives against centered differences of f.  Throws ModelError.
  FluxModel(Functions fns, Interval domain);

  static FluxModel polynomial(Polynomial flux, Polynomial b, Polynomial c1, Polynomial c2,
                              Interval domain = kDefaultDomain);
  /// f = u^3, b = c1 = c2 = 1.
  static FluxModel cubic(Interval domain = kDefaultDomain);
  /// f = K u^3 with dispersion scaled by C (c1 = C), b = c2 = 1.
  static FluxModel scaled_cubic(double K, double C, Interval domain = kDefaultDomain);
  /// f = u^3 + u, b = c1 = c2 = 1.
  static FluxModel cubic_plus_linear(Interval domain = kDefaultDomain);

  double f(double u) const { return fns_->f(u); }
  double df(double u) const { return fns_->f1(u); }
  double d2f(double u) const { return fns_->f2(u); }
  double d3f(double u) const { return fns_->f3(u); }
  double b(double u) const { return fns_->b(u); }
  double c1(double u) const { return fns_->c1(u); }
  double c2(double u) const { return fns_->c2(u); }
  /// U''(u) = c2(u) / c1(u)
  double entropy_weight(double u) const { return fns_->c2(u) / fns_->c1(u); }

  const Interval& domain() const { return domain_; }
  const std::optional<PolynomialModel>& polynomial_form() const { return poly_; }

  /// Model seen through u -> -u: f(u) -> -f(-u), coefficients evaluated at -u.
  FluxModel reflected() const;
  /// Flux f(u) - f(0) - f'(0) u with the same coefficients.  Chord speeds shift
  /// by f'(0) and the traveling-wave problem is otherwise unchanged; removing a
  /// dominant linear part avoids cancellation when |u| is small.
  FluxModel normalized() const;

  /// Sign pattern of f'' sampled at 1e3 points of the domain (computed once).
  FluxClass flux_class() const { return class_; }
  /// Throws ModelError unless u f''(u) > 0 (sampled) and f'''(0) > 0.
  void require_concave_convex() const;

  void require_in_domain(double u, const char* what) const;

 private:
  std::shared_ptr<const Functions> fns_;
  Interval domain_;
  std::optional<PolynomialModel> poly_;
  FluxClass class_ = FluxClass::other;

  FluxClass classify() const;
};

/// Convex entropy pair with U'' = c2/c1 and F' = U' f', normalized by
/// U(0) = U'(0) = F(0) = 0.  Every value is a single quadrature.
class EntropyPair {
 public:
  explicit EntropyPair(FluxModel model) : model_(std::move(model)) {}

  double U(double u) const;
  double dU(double u) const;
  double d2U(double u) const { return model_.entropy_weight(u); }
  double F(double u) const;

 private:
  FluxModel model_;
};

struct Equilibria {
  double u0 = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  double lam = 0.0;
  /// Double root: lam == lambda_natural(u0), u1 == u2 == phi_natural(u0).
  bool tangential = false;
};

double chord_speed(const FluxModel& model, double u_minus, double u_plus);

/// g(u, lam) = f(u) - lam u
inline double g_value(const FluxModel& model, double u, double lam) {
  return model.f(u) - lam * u;
}

/// G(u; u0, lam) = int_{u0}^{u} (g(z, lam) - g(u0, lam)) c2(z)/c1(z) dz
double big_g(const FluxModel& model, double u, double u0, double lam);

/// dG/du, in closed form.
inline double big_g_prime(const FluxModel& model, double u, double u0, double lam) {
  return (g_value(model, u, lam) - g_value(model, u0, lam)) * model.entropy_weight(u);
}

/// The two other roots of g(u, lam) = g(u0, lam) for u0 > 0 and
/// lam in [lambda_natural(u0), f'(u0)).  Throws PreconditionError otherwise.
Equilibria equilibria(const FluxModel& model, double u0, double lam);

/// Tangency point: f'(phi) equals the chord speed from u to phi, phi on the
/// opposite side of 0.  phi_natural(0) = 0.
double phi_natural(const FluxModel& model, double u);
/// lambda_natural(u) = f'(phi_natural(u))
double lambda_natural(const FluxModel& model, double u);
double phi_natural_inverse(const FluxModel& model, double u);

/// E(u-, u+) from the integral representation.
double entropy_dissipation(const FluxModel& model, double u_minus, double u_plus);
/// E(u-, u+) = -abar (U(u+) - U(u-)) + F(u+) - F(u-), through the entropy pair.
double entropy_dissipation_jump(const FluxModel& model, double u_minus, double u_plus);

double phi_zero(const FluxModel& model, double u_minus);
double lambda_zero(const FluxModel& model, double u_minus);

}  // namespace kinrel

#endif  // KINREL_MODEL_HPP
