#include "kinrel/cubic_oracle.hpp"

#include <cmath>
#include <sstream>

#include "kinrel/errors.hpp"
#include "kinrel/numerics.hpp"

namespace kinrel {

namespace {

const double kSqrt2 = std::sqrt(2.0);

void require_ratio(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    std::ostringstream msg;
    msg << "alpha must be a finite non-negative number, got " << alpha;
    throw PreconditionError(msg.str());
  }
}

double tilde(double alpha) { return CubicParams{}.alpha_tilde(alpha); }

void require_nonclassical(double u_minus, double alpha) {
  if (!(std::abs(u_minus) > tilde(alpha))) {
    std::ostringstream msg;
    msg << "|u_minus|=" << std::abs(u_minus) << " does not exceed alpha_tilde=" << tilde(alpha)
        << ": no nonclassical wave";
    throw PreconditionError(msg.str());
  }
}

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

void CubicParams::validate() const {
  if (!(K > 0.0) || !(C > 0.0)) throw PreconditionError("cubic parameters need K > 0, C > 0");
}

double CubicParams::alpha_tilde(double alpha) const {
  validate();
  require_ratio(alpha);
  return 2.0 * kSqrt2 * alpha / (3.0 * std::sqrt(K * C));
}

double cubic_kinetic(double u_minus, double alpha) {
  const double t = tilde(alpha);
  if (u_minus <= -t) return -u_minus - 0.5 * t;
  if (u_minus >= t) return -u_minus + 0.5 * t;
  return -0.5 * u_minus;
}

ShockSet cubic_shock_set(double u_minus, double alpha) {
  const double t = tilde(alpha);
  ShockSet set;
  if (u_minus >= t) {
    set.isolated = -u_minus + 0.5 * t;
    set.lo = -0.5 * t;
    set.hi = u_minus;
    set.lo_closed = true;
    set.hi_closed = false;
  } else if (u_minus <= -t) {
    set.isolated = -u_minus - 0.5 * t;
    set.lo = u_minus;
    set.hi = 0.5 * t;
    set.lo_closed = false;
    set.hi_closed = true;
  } else if (u_minus >= 0.0) {
    set.lo = -0.5 * u_minus;
    set.hi = u_minus;
    set.lo_closed = true;
    set.hi_closed = false;
  } else {
    set.lo = u_minus;
    set.hi = -0.5 * u_minus;
    set.lo_closed = false;
    set.hi_closed = true;
  }
  return set;
}

double cubic_critical_ratio(double u0, double u2) {
  if (u0 == 0.0) throw PreconditionError("cubic critical ratio needs u0 != 0");
  const double s = sign_of(u0);
  const double a = s * u0, b = s * u2;
  if (b < -a || b > -0.5 * a) {
    std::ostringstream msg;
    msg << "u2=" << u2 << " outside the band between " << -u0 << " and " << -0.5 * u0;
    throw PreconditionError(msg.str());
  }
  return 3.0 / kSqrt2 * (a + b);
}

double cubic_threshold(double u0, const CubicParams& params) {
  params.validate();
  return 3.0 * std::abs(u0) / (2.0 * kSqrt2) * std::sqrt(params.K * params.C);
}

double cubic_profile(double y, double u_minus, double alpha) {
  require_ratio(alpha);
  if (!(u_minus > tilde(alpha))) {
    std::ostringstream msg;
    msg << "u_minus=" << u_minus << " must exceed alpha_tilde=" << tilde(alpha);
    throw PreconditionError(msg.str());
  }
  const double center = alpha / (3.0 * kSqrt2);
  const double amp = u_minus - center;
  return center - amp * std::tanh(amp * y / kSqrt2);
}

double cubic_parabola_v(double u, double u0, double u2) {
  return (u - u2) * (u - u0) / kSqrt2;
}

double cubic_entropy_dissipation(double u_minus, double alpha, const CubicEntropy& entropy) {
  require_nonclassical(u_minus, alpha);
  const double phi = cubic_kinetic(u_minus, alpha);
  const double speed = phi * phi + phi * u_minus + u_minus * u_minus;
  const auto flux = [](double u) { return u * u * u; };
  double du, df;
  if (entropy.kind == CubicEntropy::Kind::quadratic) {
    du = 0.5 * (phi * phi - u_minus * u_minus);
    df = 0.75 * (std::pow(phi, 4) - std::pow(u_minus, 4));
  } else {
    const double k = entropy.k;
    du = std::abs(phi - k) - std::abs(u_minus - k);
    df = sign_of(phi - k) * (flux(phi) - flux(k)) - sign_of(u_minus - k) * (flux(u_minus) - flux(k));
  }
  return -speed * du + df;
}

double cubic_entropy_dissipation_integral(double u_minus, double alpha) {
  if (!(u_minus > tilde(alpha))) {
    throw PreconditionError("dissipation integral needs u_minus > alpha_tilde");
  }
  const double amp = u_minus - alpha / (3.0 * kSqrt2);
  // u_y = -(amp^2 / sqrt 2) sech^2(amp y / sqrt 2); sech^2 < 1e-30 beyond |x| = 35.
  const double reach = 35.0 * kSqrt2 / amp;
  const auto density = [&](double y) {
    const double sech = 1.0 / std::cosh(amp * y / kSqrt2);
    const double uy = -amp * amp / kSqrt2 * sech * sech;
    return -alpha * uy * uy;
  };
  return numerics::integrate(density, -reach, 0.0) + numerics::integrate(density, 0.0, reach);
}

}  // namespace kinrel
