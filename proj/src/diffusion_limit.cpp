#include "kinrel/diffusion_limit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/numeric/odeint.hpp>

#include "kinrel/errors.hpp"

namespace kinrel {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr int kGridPoints = 1024;
constexpr double kMargin = 1e-12;
constexpr double kTruncation = 1e-8;
constexpr int kMaxSteps = 100000;

using State = std::array<double, 1>;

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

struct Rhs {
  const FluxModel& model;
  double u_minus;
  double lam;

  double operator()(double u) const {
    return (model.f(u) - model.f(u_minus) - lam * (u - u_minus)) / model.b(u);
  }
};

/// Steps from (y0, u_start) in direction `dir` of y until u is within `stop`
/// of `target` or the step budget runs out.  Records every accepted step.
std::vector<DiffusiveSample> march(const Rhs& rhs, double u_start, double target, double dir,
                                   double stop, double rate) {
  auto stepper = odeint::make_dense_output(1e-14 * std::abs(target - u_start) + 1e-300, 1e-11,
                                           odeint::runge_kutta_dopri5<State>());
  const auto system = [&](const State& x, State& dx, double) { dx[0] = rhs(x[0]); };
  stepper.initialize(State{u_start}, 0.0, dir * 1e-2 / rate);
  std::vector<DiffusiveSample> out{{0.0, u_start, rhs(u_start)}};
  for (int step = 0; step < kMaxSteps; ++step) {
    const auto [t0, t1] = stepper.do_step(system);
    (void)t0;
    const double u = stepper.current_state()[0];
    out.push_back({t1, u, rhs(u)});
    if (std::abs(u - target) <= stop) break;
  }
  return out;
}

}  // namespace

Profile DiffusiveProfile::as_profile() const {
  Profile p;
  p.u_start = u_minus;
  p.u_end = u_plus;
  for (const auto& s : samples) p.samples.push_back({s.y, s.u});
  return p;
}

bool DiffusiveShockSet::contains(double u) const {
  return std::any_of(pieces.begin(), pieces.end(),
                     [u](const Interval& i) { return i.contains(u); });
}

bool oleinik_strict(const FluxModel& model, double u_minus, double u_plus) {
  model.require_in_domain(u_minus, "u_minus");
  model.require_in_domain(u_plus, "u_plus");
  if (u_plus == u_minus) throw PreconditionError("Oleinik test needs u_plus != u_minus");
  const double sigma = chord_speed(model, u_minus, u_plus);
  const auto excess = [&](double v) { return chord_speed(model, u_minus, v) - sigma; };

  const double h = (u_plus - u_minus) / (kGridPoints + 1);
  int best = 1;
  double best_value = excess(u_minus + h);
  double scale = std::abs(sigma);
  for (int i = 2; i <= kGridPoints; ++i) {
    const double value = excess(u_minus + i * h);
    scale = std::max(scale, std::abs(value + sigma));
    if (value < best_value) {
      best_value = value;
      best = i;
    }
  }
  // Refine between the neighbouring grid points, never past the outermost ones.
  const double a = u_minus + std::max(best - 1, 1) * h;
  const double b = u_minus + std::min(best + 1, kGridPoints) * h;
  const auto [x, fx] =
      boost::math::tools::brent_find_minima(excess, std::min(a, b), std::max(a, b), 52);
  (void)x;
  const double margin = kMargin * std::max(scale, 1e-300);
  // Violations confined to less than one grid step next to an end state show
  // up in the limits of the chord there: f'(u-) - sigma at u-, and the slope
  // sign f'(u+) - sigma at u+.
  if (model.df(u_minus) - sigma < -margin) return false;
  if (model.df(u_plus) - sigma > margin) return false;
  return std::min(best_value, fx) > margin;
}

DiffusiveProfile diffusive_profile(const FluxModel& model, double u_minus, double u_plus) {
  if (!oleinik_strict(model, u_minus, u_plus)) {
    std::ostringstream msg;
    msg << "(" << u_minus << ", " << u_plus
        << ") violates the strict Oleinik inequalities: no diffusive traveling wave";
    throw PreconditionError(msg.str());
  }
  const double lam = chord_speed(model, u_minus, u_plus);
  const Rhs rhs{model, u_minus, lam};
  const double width = std::abs(u_plus - u_minus);
  const double stop = kTruncation * width;
  const double mid = 0.5 * (u_minus + u_plus);
  const double rate = std::abs(rhs(mid)) / width;

  // u moves towards u_plus as y increases.
  const auto forward = march(rhs, mid, u_plus, 1.0, stop, rate);
  const auto backward = march(rhs, mid, u_minus, -1.0, stop, rate);
  if (std::abs(forward.back().u - u_plus) > stop || std::abs(backward.back().u - u_minus) > stop) {
    throw IntegrationError("diffusive profile did not reach its end states");
  }
  DiffusiveProfile profile;
  profile.u_minus = u_minus;
  profile.u_plus = u_plus;
  profile.lam = lam;
  profile.samples.assign(backward.rbegin(), backward.rend());
  profile.samples.insert(profile.samples.end(), forward.begin() + 1, forward.end());
  return profile;
}

bool diffusive_orbit_reaches(const FluxModel& model, double u_minus, double u_plus) {
  model.require_in_domain(u_minus, "u_minus");
  model.require_in_domain(u_plus, "u_plus");
  if (u_plus == u_minus) throw PreconditionError("orbit test needs u_plus != u_minus");
  const double lam = chord_speed(model, u_minus, u_plus);
  const Rhs rhs{model, u_minus, lam};
  const double width = std::abs(u_plus - u_minus);
  const double dir = sign_of(u_plus - u_minus);
  const double start = u_minus + dir * 1e-6 * width;
  // The orbit must leave u_minus towards u_plus at all.
  if (!(dir * rhs(start) > 0.0)) return false;
  const double rate = std::abs(rhs(start)) / (1e-6 * width);
  const auto path = march(rhs, start, u_plus, 1.0, 1e-6 * width, rate);
  return std::abs(path.back().u - u_plus) <= 1e-6 * width;
}

DiffusiveShockSet diffusive_shock_set(const FluxModel& model, double u_minus) {
  model.require_in_domain(u_minus, "u_minus");
  const Interval& d = model.domain();
  DiffusiveShockSet set;
  switch (model.flux_class()) {
    case FluxClass::convex:
      set.pieces.push_back({d.lo, u_minus});
      break;
    case FluxClass::concave:
      set.pieces.push_back({u_minus, d.hi});
      break;
    case FluxClass::concave_convex: {
      const double natural = phi_natural(model, u_minus);
      set.pieces.push_back({std::min(natural, u_minus), std::max(natural, u_minus)});
      break;
    }
    case FluxClass::convex_concave: {
      // -f is concave-convex; the far piece ends at its tangency inverse.
      FluxModel::Functions neg{
          [&model](double u) { return -model.f(u); },  [&model](double u) { return -model.df(u); },
          [&model](double u) { return -model.d2f(u); }, [&model](double u) { return -model.d3f(u); },
          [&model](double u) { return model.b(u); },    [&model](double u) { return model.c1(u); },
          [&model](double u) { return model.c2(u); },
      };
      const FluxModel flipped(std::move(neg), d);
      std::optional<double> far;
      if (u_minus == 0.0) {
        far = 0.0;
      } else {
        try {
          far = phi_natural_inverse(flipped, u_minus);
        } catch (const RootNotBracketed&) {
        }
      }
      if (u_minus >= 0.0) {
        if (far) set.pieces.push_back({d.lo, *far});
        set.pieces.push_back({u_minus, d.hi});
      } else {
        set.pieces.push_back({d.lo, u_minus});
        if (far) set.pieces.push_back({*far, d.hi});
      }
      break;
    }
    case FluxClass::other:
      throw ModelError("diffusive shock set needs a convex, concave, concave-convex or "
                       "convex-concave flux");
  }
  return set;
}

}  // namespace kinrel
