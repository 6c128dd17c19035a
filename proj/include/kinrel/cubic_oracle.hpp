#ifndef KINREL_CUBIC_ORACLE_HPP
#define KINREL_CUBIC_ORACLE_HPP

// Closed forms for f = K u^3 with b = 1 and dispersion coefficient C.
// Everything except cubic_threshold assumes K = C = 1.

#include "kinrel/kinetics.hpp"

namespace kinrel {

struct CubicParams {
  double K = 1.0;
  double C = 1.0;

  /// Throws PreconditionError unless K > 0 and C > 0.
  void validate() const;
  /// alpha_tilde = 2 sqrt(2) alpha / (3 sqrt(K C)); |u| <= alpha_tilde is the plateau.
  double alpha_tilde(double alpha) const;
};

/// Entropy U(u) = u^2/2 or U_k(u) = |u - k| with the matching entropy flux.
struct CubicEntropy {
  enum class Kind { quadratic, kruzkov };
  Kind kind = Kind::quadratic;
  double k = 0.0;

  static CubicEntropy quadratic() { return {}; }
  static CubicEntropy kruzkov(double k) { return {Kind::kruzkov, k}; }
};

double cubic_kinetic(double u_minus, double alpha);
/// Shock set with the endpoint conventions of the closed-form cubic solution.
ShockSet cubic_shock_set(double u_minus, double alpha);
/// A(u0, u2) = 3 (u0 + u2) / sqrt(2) for u2 in [-u0, -u0/2] (mirrored for u0 < 0).
double cubic_critical_ratio(double u0, double u2);
double cubic_threshold(double u0, const CubicParams& params = {});
/// Saddle-saddle profile, u(0) = alpha / (3 sqrt 2); needs u_minus > alpha_tilde.
double cubic_profile(double y, double u_minus, double alpha);
/// v = (u - u2)(u - u0) / sqrt(2)
double cubic_parabola_v(double u, double u0, double u2);
/// Jump form -abar (U(phi) - U(u-)) + F(phi) - F(u-) at phi = cubic_kinetic(u-, alpha).
/// Needs |u_minus| > alpha_tilde.
double cubic_entropy_dissipation(double u_minus, double alpha,
                                 const CubicEntropy& entropy = CubicEntropy::quadratic());
/// Quadratic-entropy dissipation as the integral of -alpha u_y^2 over the profile.
double cubic_entropy_dissipation_integral(double u_minus, double alpha);

}  // namespace kinrel

#endif  // KINREL_CUBIC_ORACLE_HPP
