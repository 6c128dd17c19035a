#ifndef KINREL_DIFFUSION_LIMIT_HPP
#define KINREL_DIFFUSION_LIMIT_HPP

// Diffusion-only traveling waves  b(u) u' = f(u) - f(u-) - lam (u - u-)  and
// the strict Oleinik chord test that characterizes them.

#include <vector>

#include "kinrel/model.hpp"
#include "kinrel/phaseplane.hpp"

namespace kinrel {

struct DiffusiveSample {
  double y = 0.0;
  double u = 0.0;
  double uy = 0.0;
};

/// Monotone profile sampled with y increasing; y = 0 at (u_minus + u_plus)/2.
struct DiffusiveProfile {
  std::vector<DiffusiveSample> samples;
  double u_minus = 0.0;
  double u_plus = 0.0;
  double lam = 0.0;

  Profile as_profile() const;
};

/// Closed intervals whose union is the diffusive shock set of u_minus.
struct DiffusiveShockSet {
  std::vector<Interval> pieces;

  bool contains(double u) const;
};

/// Strict chord inequality abar(u-, v) > abar(u-, u+) for v strictly between,
/// checked on a 1024-point open grid refined around its minimum.
bool oleinik_strict(const FluxModel& model, double u_minus, double u_plus);

/// Integrates the profile equation from the midpoint in both directions and
/// truncates 1e-8 |u+ - u-| short of the end states.  Requires oleinik_strict.
DiffusiveProfile diffusive_profile(const FluxModel& model, double u_minus, double u_plus);

/// Whether the orbit leaving u_minus towards u_plus actually arrives there,
/// decided by integration alone (no chord test).
bool diffusive_orbit_reaches(const FluxModel& model, double u_minus, double u_plus);

/// Shock set for convex, concave, concave-convex and convex-concave fluxes;
/// throws ModelError for any other sampled class.
DiffusiveShockSet diffusive_shock_set(const FluxModel& model, double u_minus);

}  // namespace kinrel

#endif  // KINREL_DIFFUSION_LIMIT_HPP
