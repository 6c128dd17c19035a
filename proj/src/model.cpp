#include "kinrel/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kinrel/errors.hpp"
#include "kinrel/numerics.hpp"

namespace kinrel {

namespace {

constexpr int kPositivitySamples = 1000;
constexpr int kDerivativeSamples = 64;
constexpr double kDerivativeTolerance = 1e-5;
constexpr double kRootRelTol = 1e-14;

double root_tol(double scale) { return kRootRelTol * std::max(std::abs(scale), 1e-300); }

std::vector<double> sample_points(const Interval& d, int n) {
  std::vector<double> xs(n + 1);
  for (int i = 0; i <= n; ++i) xs[i] = d.lo + d.width() * i / n;
  return xs;
}

void check_derivative(const FluxModel::Function& fn, const FluxModel::Function& deriv,
                      const Interval& d, const char* name) {
  // Interior points only, so that the stencil stays inside the domain.
  const Interval inner{d.lo + 0.01 * d.width(), d.hi - 0.01 * d.width()};
  const auto xs = sample_points(inner, kDerivativeSamples);
  std::vector<double> exact(xs.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    exact[i] = deriv(xs[i]);
    scale = std::max(scale, std::abs(exact[i]));
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = xs[i];
    const double h = 1e-4 * std::max(1.0, std::abs(u));
    const double fd = (fn(u + h) - fn(u - h)) / (2.0 * h);
    if (std::abs(fd - exact[i]) > kDerivativeTolerance * (std::abs(exact[i]) + scale) + 1e-12) {
      std::ostringstream msg;
      msg << name << " disagrees with a centered difference at u=" << u << " (supplied "
          << exact[i] << ", difference quotient " << fd << ")";
      throw ModelError(msg.str());
    }
  }
}

}  // namespace

const char* to_string(FluxClass c) {
  switch (c) {
    case FluxClass::convex: return "convex";
    case FluxClass::concave: return "concave";
    case FluxClass::concave_convex: return "concave-convex";
    case FluxClass::convex_concave: return "convex-concave";
    case FluxClass::other: return "other";
  }
  return "other";
}

FluxModel::FluxModel(Functions fns, Interval domain)
    : fns_(std::make_shared<const Functions>(std::move(fns))), domain_(domain) {
  const Functions& fn = *fns_;
  if (!fn.f || !fn.f1 || !fn.f2 || !fn.f3 || !fn.b || !fn.c1 || !fn.c2) {
    throw ModelError("every flux and coefficient function must be supplied");
  }
  if (!(domain_.lo < 0.0 && 0.0 < domain_.hi)) {
    throw ModelError("domain must satisfy u_min < 0 < u_max");
  }
  for (double u : sample_points(domain_, kPositivitySamples)) {
    const double bu = fn.b(u), c1u = fn.c1(u), c2u = fn.c2(u);
    if (!(bu > 0.0) || !(c1u > 0.0) || !(c2u > 0.0)) {
      std::ostringstream msg;
      msg << "coefficients must be positive on the domain; at u=" << u << ": b=" << bu
          << ", c1=" << c1u << ", c2=" << c2u;
      throw ModelError(msg.str());
    }
  }
  check_derivative(fn.f, fn.f1, domain_, "f'");
  check_derivative(fn.f1, fn.f2, domain_, "f''");
  check_derivative(fn.f2, fn.f3, domain_, "f'''");
  class_ = classify();
}

FluxModel FluxModel::polynomial(Polynomial flux, Polynomial b, Polynomial c1, Polynomial c2,
                                Interval domain) {
  const Polynomial f1 = flux.derivative();
  const Polynomial f2 = f1.derivative();
  const Polynomial f3 = f2.derivative();
  FluxModel model(Functions{flux, f1, f2, f3, b, c1, c2}, domain);
  model.poly_ = PolynomialModel{std::move(flux), std::move(b), std::move(c1), std::move(c2)};
  return model;
}

FluxModel FluxModel::cubic(Interval domain) {
  return polynomial(Polynomial{0.0, 0.0, 0.0, 1.0}, Polynomial{1.0}, Polynomial{1.0},
                    Polynomial{1.0}, domain);
}

FluxModel FluxModel::scaled_cubic(double K, double C, Interval domain) {
  if (!(K > 0.0) || !(C > 0.0)) throw ModelError("scaled cubic needs K > 0 and C > 0");
  return polynomial(Polynomial{0.0, 0.0, 0.0, K}, Polynomial{1.0}, Polynomial{C},
                    Polynomial{1.0}, domain);
}

FluxModel FluxModel::cubic_plus_linear(Interval domain) {
  return polynomial(Polynomial{0.0, 1.0, 0.0, 1.0}, Polynomial{1.0}, Polynomial{1.0},
                    Polynomial{1.0}, domain);
}

FluxModel FluxModel::reflected() const {
  const Interval mirrored{-domain_.hi, -domain_.lo};
  if (poly_) {
    return polynomial(poly_->flux.reflected().scaled(-1.0), poly_->b.reflected(),
                      poly_->c1.reflected(), poly_->c2.reflected(), mirrored);
  }
  auto src = fns_;
  Functions r{
      [src](double u) { return -src->f(-u); },
      [src](double u) { return src->f1(-u); },
      [src](double u) { return -src->f2(-u); },
      [src](double u) { return src->f3(-u); },
      [src](double u) { return src->b(-u); },
      [src](double u) { return src->c1(-u); },
      [src](double u) { return src->c2(-u); },
  };
  return FluxModel(std::move(r), mirrored);
}

FluxModel FluxModel::normalized() const {
  if (poly_) {
    std::vector<double> c(poly_->flux.coefficients().begin(), poly_->flux.coefficients().end());
    c.resize(std::max<std::size_t>(c.size(), 2));
    c[0] = c[1] = 0.0;
    return polynomial(Polynomial(std::move(c)), poly_->b, poly_->c1, poly_->c2, domain_);
  }
  auto src = fns_;
  const double f0 = f(0.0), s0 = df(0.0);
  Functions n = *src;
  n.f = [src, f0, s0](double u) { return src->f(u) - f0 - s0 * u; };
  n.f1 = [src, s0](double u) { return src->f1(u) - s0; };
  return FluxModel(std::move(n), domain_);
}

FluxClass FluxModel::classify() const {
  bool neg_left = false, pos_left = false, neg_right = false, pos_right = false;
  const double tiny = 1e-12 * std::max(-domain_.lo, domain_.hi);
  for (double u : sample_points(domain_, kPositivitySamples)) {
    if (std::abs(u) <= tiny) continue;
    const double s = d2f(u);
    if (s == 0.0) continue;
    (u < 0.0 ? (s < 0.0 ? neg_left : pos_left) : (s < 0.0 ? neg_right : pos_right)) = true;
  }
  const bool neg = neg_left || neg_right;
  const bool pos = pos_left || pos_right;
  if (pos && !neg) return FluxClass::convex;
  if (neg && !pos) return FluxClass::concave;
  if (neg_left && !pos_left && pos_right && !neg_right) return FluxClass::concave_convex;
  if (pos_left && !neg_left && neg_right && !pos_right) return FluxClass::convex_concave;
  return FluxClass::other;
}

void FluxModel::require_concave_convex() const {
  if (class_ != FluxClass::concave_convex) {
    throw ModelError(std::string("flux must be concave-convex (u f''(u) > 0); sampled class is ") +
                     to_string(flux_class()));
  }
  if (!(d3f(0.0) > 0.0)) throw ModelError("flux must satisfy f'''(0) > 0");
}

void FluxModel::require_in_domain(double u, const char* what) const {
  if (!std::isfinite(u) || !domain_.contains(u)) {
    std::ostringstream msg;
    msg << what << "=" << u << " lies outside the model domain [" << domain_.lo << ", "
        << domain_.hi << "]";
    throw DomainError(msg.str());
  }
}

double EntropyPair::dU(double u) const {
  return numerics::integrate([this](double z) { return model_.entropy_weight(z); }, 0.0, u);
}

double EntropyPair::U(double u) const {
  return numerics::integrate([this, u](double z) { return (u - z) * model_.entropy_weight(z); },
                             0.0, u);
}

double EntropyPair::F(double u) const {
  const double tail =
      numerics::integrate([this](double z) { return model_.f(z) * model_.entropy_weight(z); },
                          0.0, u);
  return dU(u) * model_.f(u) - tail;
}

double chord_speed(const FluxModel& model, double u_minus, double u_plus) {
  model.require_in_domain(u_minus, "u_minus");
  model.require_in_domain(u_plus, "u_plus");
  if (u_plus == u_minus) return model.df(u_minus);
  return (model.f(u_plus) - model.f(u_minus)) / (u_plus - u_minus);
}

double big_g(const FluxModel& model, double u, double u0, double lam) {
  model.require_in_domain(u, "u");
  model.require_in_domain(u0, "u0");
  const double g0 = g_value(model, u0, lam);
  return numerics::integrate(
      [&](double z) { return (g_value(model, z, lam) - g0) * model.entropy_weight(z); }, u0, u);
}

Equilibria equilibria(const FluxModel& model, double u0, double lam) {
  model.require_concave_convex();
  model.require_in_domain(u0, "u0");
  if (!(u0 > 0.0)) throw PreconditionError("equilibria expects u0 > 0 (reflect negative states)");
  const double natural = phi_natural(model, u0);
  const double lam_nat = model.df(natural);
  const double lam_top = model.df(u0);
  const double slack = 1e-14 * std::max({std::abs(lam_nat), std::abs(lam_top), 1e-300});
  if (lam < lam_nat - slack || lam >= lam_top) {
    std::ostringstream msg;
    msg << "speed " << lam << " outside (" << lam_nat << ", " << lam_top
        << "): fewer than three equilibria";
    throw PreconditionError(msg.str());
  }
  if (lam <= lam_nat + slack) return Equilibria{u0, natural, natural, lam, true};

  const auto excess = [&](double u) { return chord_speed(model, u0, u) - lam; };
  const double u1 = numerics::solve_bracketed(excess, natural, u0, root_tol(u0));
  const double lo = model.domain().lo;
  if (!(excess(lo) > 0.0)) {
    throw DomainError("lowest equilibrium lies below the model domain");
  }
  const double u2 = numerics::solve_bracketed(excess, lo, natural, root_tol(u0));
  return Equilibria{u0, u1, u2, lam, false};
}

double phi_natural(const FluxModel& model, double u) {
  model.require_in_domain(u, "u");
  if (u == 0.0) return 0.0;
  const double far = u > 0.0 ? model.domain().lo : model.domain().hi;
  const auto tangency = [&](double phi) {
    return model.df(phi) - (model.f(u) - model.f(phi)) / (u - phi);
  };
  try {
    return numerics::find_first_root(tangency, 0.0, far, root_tol(u));
  } catch (const RootNotBracketed& e) {
    throw RootNotBracketed(std::string("phi_natural: tangency point not inside domain: ") +
                           e.what());
  }
}

double lambda_natural(const FluxModel& model, double u) {
  return model.df(phi_natural(model, u));
}

double phi_natural_inverse(const FluxModel& model, double u) {
  model.require_in_domain(u, "u");
  if (u == 0.0) return 0.0;
  const double far = u > 0.0 ? model.domain().lo : model.domain().hi;
  const double slope = model.df(u);
  const auto tangency = [&](double x) { return (model.f(u) - model.f(x)) / (u - x) - slope; };
  try {
    return numerics::find_first_root(tangency, 0.0, far, root_tol(u));
  } catch (const RootNotBracketed& e) {
    throw RootNotBracketed(std::string("phi_natural_inverse: root not inside domain: ") +
                           e.what());
  }
}

double entropy_dissipation(const FluxModel& model, double u_minus, double u_plus) {
  const double lam = chord_speed(model, u_minus, u_plus);
  if (u_plus == u_minus) return 0.0;
  const double g0 = g_value(model, u_minus, lam);
  return -numerics::integrate(
      [&](double z) { return (g_value(model, z, lam) - g0) * model.entropy_weight(z); },
      u_minus, u_plus);
}

double entropy_dissipation_jump(const FluxModel& model, double u_minus, double u_plus) {
  const double lam = chord_speed(model, u_minus, u_plus);
  const EntropyPair pair(model);
  return -lam * (pair.U(u_plus) - pair.U(u_minus)) + pair.F(u_plus) - pair.F(u_minus);
}

double phi_zero(const FluxModel& model, double u_minus) {
  model.require_concave_convex();
  model.require_in_domain(u_minus, "u_minus");
  if (u_minus == 0.0) return 0.0;
  const double upper = phi_natural(model, u_minus);
  double lower;
  try {
    lower = phi_natural_inverse(model, u_minus);
  } catch (const RootNotBracketed&) {
    lower = u_minus > 0.0 ? model.domain().lo : model.domain().hi;
  }
  const auto dissipation = [&](double w) { return entropy_dissipation(model, u_minus, w); };
  try {
    return numerics::solve_bracketed(dissipation, lower, upper, 1e-13 * std::abs(u_minus));
  } catch (const RootNotBracketed& e) {
    throw ModelError(std::string("phi_zero: entropy dissipation does not change sign between "
                                 "phi_natural_inverse and phi_natural: ") +
                     e.what());
  }
}

double lambda_zero(const FluxModel& model, double u_minus) {
  if (u_minus == 0.0) return model.df(0.0);
  return chord_speed(model, u_minus, phi_zero(model, u_minus));
}

}  // namespace kinrel
