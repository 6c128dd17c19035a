#ifndef KINREL_PHASEPLANE_HPP
#define KINREL_PHASEPLANE_HPP

// Traveling-wave system in the (u, v) plane, v = c2(u) u_y:
//
//   c2(u) u_y = v,     v v_u + alpha (b/c1)(u) v = G_u(u; u0, lam)   (eta = +1)
//
// Equilibria are the roots of g(u, lam) = g(u0, lam) on v = 0.  Saddle
// branches are integrated as graphs v(u) with u as the independent variable.

#include <complex>
#include <iosfwd>
#include <optional>
#include <vector>

#include "kinrel/model.hpp"

namespace kinrel {

/// Sign of the dispersion coefficient delta.
class DispersionSign {
 public:
  constexpr DispersionSign() = default;
  /// Throws PreconditionError unless eta is +1 or -1.
  explicit DispersionSign(int eta);

  static constexpr DispersionSign positive() { return DispersionSign(); }
  static DispersionSign negative() { return DispersionSign(-1); }

  constexpr int value() const { return eta_; }

 private:
  int eta_ = 1;
};

/// Roots of mu^2 + eta p mu - eta q = 0 with p = alpha b/(c1 c2), q = (f'-lam)/(c1 c2).
/// For a real pair lower <= upper; for a complex pair lower has negative imaginary part.
struct EigenPair {
  std::complex<double> lower;
  std::complex<double> upper;
  /// p^2 + 4 eta q; negative for a complex pair.
  double discriminant = 0.0;

  bool is_complex() const { return discriminant < 0.0; }
};

enum class EquilibriumKind { stable_node, stable_spiral, saddle, unstable_node, unstable_spiral };

const char* to_string(EquilibriumKind k);

struct EquilibriumNature {
  EquilibriumKind kind = EquilibriumKind::saddle;
  EigenPair eigen;
};

struct CurveSample {
  double u = 0.0;
  double v = 0.0;
  double dvdu = 0.0;
};

/// Monotone graph u -> v(u) of one phase-plane orbit.  Samples run from
/// u_start towards u_end; an endpoint sample with v == 0 marks an equilibrium,
/// its dvdu being the eigenvector slope.
struct TrajectoryCurve {
  std::vector<CurveSample> samples;
  double u_start = 0.0;
  double u_end = 0.0;
  double lam = 0.0;
  double alpha = 0.0;

  const CurveSample& front() const { return samples.front(); }
  const CurveSample& back() const { return samples.back(); }
  /// v at the last sample, i.e. V_-(alpha) or V_+(alpha) for a branch.
  double end_value() const { return samples.back().v; }
  /// Cubic Hermite interpolation of v; u must lie between the end samples.
  double v_at(double u) const;
};

struct ProfileSample {
  double y = 0.0;
  double u = 0.0;
};

/// u(y) sampled with y increasing; y = 0 where u = (u_start + u_end)/2.
struct Profile {
  std::vector<ProfileSample> samples;
  double u_start = 0.0;
  double u_end = 0.0;

  /// Linear interpolation in y, clamped to the end values outside the range.
  double u_at(double y) const;
};

struct BranchOptions {
  /// Launch offset as a fraction of the branch length.
  double launch_fraction = 1e-6;
  /// Dense-output points; 0 keeps only the launch and end samples.
  int samples = 512;
};

EigenPair eigenvalues(const FluxModel& model, double u, double lam, double alpha,
                      DispersionSign eta = DispersionSign::positive());

/// Nature of the equilibrium u of the system launched from u_minus at speed lam.
/// Throws PreconditionError if u is not an equilibrium or is non-hyperbolic.
EquilibriumNature classify_equilibrium(const FluxModel& model, double u_minus, double u,
                                       double lam, double alpha,
                                       DispersionSign eta = DispersionSign::positive());

/// Unstable branch of the saddle u0, integrated from u0 down to u1.
TrajectoryCurve v_minus_branch(const FluxModel& model, double u0, double lam, double alpha,
                               const BranchOptions& options = {});
/// Stable branch of the saddle u2, integrated from u2 up to u1.
TrajectoryCurve v_plus_branch(const FluxModel& model, double u0, double lam, double alpha,
                              const BranchOptions& options = {});

/// W(alpha) = V_+(alpha) - V_-(alpha) at u1.
double connection_gap(const FluxModel& model, double u0, double lam, double alpha,
                      const BranchOptions& options = {1e-6, 0});
/// Same, reusing equilibria already computed for (u0, lam).
double connection_gap(const FluxModel& model, const Equilibria& e, double alpha,
                      const BranchOptions& options = {1e-6, 0});

/// Both branches joined at u1 into one curve from u0 to u2.  Meaningful when
/// alpha is the critical ratio for lam, so that the gap at u1 vanishes.
TrajectoryCurve saddle_connection(const FluxModel& model, double u0, double lam, double alpha,
                                  const BranchOptions& options = {});

/// v = -sqrt(2 G(u; u-, lambda0(u-))) on [phi0(u-), u-] (alpha = 0 connection).
TrajectoryCurve dispersive_trajectory(const FluxModel& model, double u_minus,
                                      int samples = 512);

/// Integrates dy/du = c2/v along the curve, truncating 1e-8 |u_end - u_start|
/// short of equilibrium endpoints.
Profile profile_from_curve(const FluxModel& model, const TrajectoryCurve& curve);

/// Continues the unstable branch of u0 past u1 and returns the first u at
/// which it meets v = 0 inside (u2, u1), or nothing if it leaves through u2.
std::optional<double> first_axis_crossing(const FluxModel& model, double u0, double lam,
                                          double alpha);

void write_csv(std::ostream& out, const TrajectoryCurve& curve);
void write_csv(std::ostream& out, const Profile& profile);

}  // namespace kinrel

#endif  // KINREL_PHASEPLANE_HPP
