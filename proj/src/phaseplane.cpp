#include "kinrel/phaseplane.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "kinrel/errors.hpp"
#include "kinrel/format.hpp"
#include "kinrel/numerics.hpp"

namespace kinrel {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kRelTol = 1e-10;
constexpr double kAbsTol = 1e-12;
constexpr double kGuard = 1e-9;
constexpr double kTruncation = 1e-8;
constexpr int kTailPoints = 32;
constexpr double kNodeWindow = 1e-5;

using State1 = std::array<double, 1>;

struct GuardHit {
  double u;
};
using State2 = std::array<double, 2>;

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

void require_ratio(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    std::ostringstream msg;
    msg << "alpha must be a finite non-negative number, got " << alpha;
    throw PreconditionError(msg.str());
  }
}

Equilibria three_roots(const FluxModel& model, double u0, double lam) {
  const Equilibria e = equilibria(model, u0, lam);
  if (e.tangential) {
    std::ostringstream msg;
    msg << "speed " << lam << " is the tangential speed of u0=" << u0
        << "; branches need three distinct equilibria";
    throw PreconditionError(msg.str());
  }
  return e;
}

double hermite(const CurveSample& a, const CurveSample& b, double u) {
  const double h = b.u - a.u;
  const double t = (u - a.u) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * a.v + (t3 - 2 * t2 + t) * h * a.dvdu +
         (-2 * t3 + 3 * t2) * b.v + (t3 - t2) * h * b.dvdu;
}

/// Integrates dv/du = G'(u)/v - alpha b/c1 from the equilibrium u_eq (where v
/// leaves with slope `slope`) to u_target.
TrajectoryCurve integrate_branch(const FluxModel& model, const Equilibria& e, double alpha,
                                 double u_eq, double slope, double u_target,
                                 const BranchOptions& options) {
  if (!(options.launch_fraction > 0.0 && options.launch_fraction < 0.5)) {
    throw PreconditionError("launch_fraction must lie in (0, 0.5)");
  }
  const double len = std::abs(u_target - u_eq);
  const double dir = sign_of(u_target - u_eq);
  const double delta = options.launch_fraction * len;
  const double u_a = u_eq + dir * delta;
  const double v_a = slope * dir * delta;
  if (!(v_a < 0.0)) {
    throw IntegrationError("eigenvector launch does not point into v < 0");
  }
  const double vscale = std::abs(slope) * len;
  const double guard = kGuard * vscale;

  const double u0 = e.u0, lam = e.lam;
  const auto slope_at = [&](double u, double v) {
    return big_g_prime(model, u, u0, lam) / v - alpha * model.b(u) / model.c1(u);
  };
  const auto rhs = [&](const State1& x, State1& dxdu, double u) {
    if (!(std::abs(x[0]) >= guard)) throw GuardHit{u};
    dxdu[0] = slope_at(u, x[0]);
  };

  TrajectoryCurve curve;
  curve.u_start = u_eq;
  curve.u_end = u_target;
  curve.lam = lam;
  curve.alpha = alpha;
  curve.samples.push_back({u_eq, 0.0, slope});
  curve.samples.push_back({u_a, v_a, slope_at(u_a, v_a)});

  State1 x{v_a};
  const double dt0 = dir * 1e-3 * len;
  try {
    if (options.samples > 0) {
      std::vector<double> grid(options.samples + 1);
      for (int i = 0; i <= options.samples; ++i) {
        grid[i] = (i == options.samples) ? u_target
                                         : u_a + (u_target - u_a) * i / options.samples;
      }
      auto stepper = odeint::make_dense_output(kAbsTol * vscale, kRelTol,
                                               odeint::runge_kutta_dopri5<State1>());
      odeint::integrate_times(stepper, rhs, x, grid.begin(), grid.end(), dt0,
                              [&](const State1& s, double u) {
                                if (u == u_a) return;
                                curve.samples.push_back({u, s[0], slope_at(u, s[0])});
                              });
    } else {
      auto stepper =
          odeint::make_controlled(kAbsTol * vscale, kRelTol, odeint::runge_kutta_dopri5<State1>());
      odeint::integrate_adaptive(stepper, rhs, x, u_a, u_target, dt0);
      curve.samples.push_back({u_target, x[0], slope_at(u_target, x[0])});
    }
  } catch (const GuardHit& hit) {
    // A stable node at the target is entered tangentially with v -> 0.
    if (std::abs(hit.u - u_target) > kNodeWindow * len) {
      std::ostringstream msg;
      msg << "branch reached v = 0 at u=" << hit.u << " before u=" << u_target
          << " (u0=" << u0 << ", lam=" << lam << ", alpha=" << alpha << ")";
      throw IntegrationError(msg.str());
    }
    curve.samples.push_back({u_target, 0.0, curve.samples.back().dvdu});
  } catch (const odeint::odeint_error& err) {
    throw IntegrationError(std::string("branch integration failed: ") + err.what());
  }
  return curve;
}

TrajectoryCurve minus_branch(const FluxModel& model, const Equilibria& e, double alpha,
                             const BranchOptions& options) {
  const double mu = eigenvalues(model, e.u0, e.lam, alpha).upper.real();
  return integrate_branch(model, e, alpha, e.u0, mu * model.c2(e.u0), e.u1, options);
}

TrajectoryCurve plus_branch(const FluxModel& model, const Equilibria& e, double alpha,
                            const BranchOptions& options) {
  const double mu = eigenvalues(model, e.u2, e.lam, alpha).lower.real();
  return integrate_branch(model, e, alpha, e.u2, mu * model.c2(e.u2), e.u1, options);
}

double segment_y(const FluxModel& model, const CurveSample& a, const CurveSample& b, double from,
                 double to) {
  return numerics::integrate([&](double u) { return model.c2(u) / hermite(a, b, u); }, from, to);
}

}  // namespace

DispersionSign::DispersionSign(int eta) : eta_(eta) {
  if (eta != 1 && eta != -1) throw PreconditionError("dispersion sign must be +1 or -1");
}

const char* to_string(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::stable_node: return "stable-node";
    case EquilibriumKind::stable_spiral: return "stable-spiral";
    case EquilibriumKind::saddle: return "saddle";
    case EquilibriumKind::unstable_node: return "unstable-node";
    case EquilibriumKind::unstable_spiral: return "unstable-spiral";
  }
  return "saddle";
}

double TrajectoryCurve::v_at(double u) const {
  if (samples.size() < 2) throw PreconditionError("curve has fewer than two samples");
  const double lo = std::min(samples.front().u, samples.back().u);
  const double hi = std::max(samples.front().u, samples.back().u);
  if (u < lo || u > hi) {
    std::ostringstream msg;
    msg << "u=" << u << " outside the curve range [" << lo << ", " << hi << "]";
    throw DomainError(msg.str());
  }
  const bool decreasing = samples.front().u > samples.back().u;
  const auto it = std::lower_bound(samples.begin(), samples.end(), u,
                                   [decreasing](const CurveSample& s, double x) {
                                     return decreasing ? s.u > x : s.u < x;
                                   });
  if (it == samples.begin()) return samples.front().v;
  return hermite(*(it - 1), *it, u);
}

double Profile::u_at(double y) const {
  if (samples.empty()) throw PreconditionError("empty profile");
  if (y <= samples.front().y) return samples.front().u;
  if (y >= samples.back().y) return samples.back().u;
  const auto it = std::lower_bound(samples.begin(), samples.end(), y,
                                   [](const ProfileSample& s, double x) { return s.y < x; });
  const ProfileSample& a = *(it - 1);
  const ProfileSample& b = *it;
  return a.u + (b.u - a.u) * (y - a.y) / (b.y - a.y);
}

EigenPair eigenvalues(const FluxModel& model, double u, double lam, double alpha,
                      DispersionSign eta) {
  model.require_in_domain(u, "u");
  require_ratio(alpha);
  const double e = eta.value();
  const double cc = model.c1(u) * model.c2(u);
  const double p = alpha * model.b(u) / cc;
  const double q = (model.df(u) - lam) / cc;
  const double disc = p * p + 4.0 * e * q;
  EigenPair pair;
  pair.discriminant = disc;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    // Avoid cancellation: compute the larger-magnitude root first.
    const double big = -0.5 * (e * p + (e * p >= 0.0 ? root : -root));
    const double small = (big != 0.0) ? (-e * q) / big : 0.0;
    pair.lower = std::min(big, small);
    pair.upper = std::max(big, small);
  } else {
    const double re = -0.5 * e * p;
    const double im = 0.5 * std::sqrt(-disc);
    pair.lower = {re, -im};
    pair.upper = {re, im};
  }
  return pair;
}

EquilibriumNature classify_equilibrium(const FluxModel& model, double u_minus, double u,
                                       double lam, double alpha, DispersionSign eta) {
  model.require_in_domain(u_minus, "u_minus");
  model.require_in_domain(u, "u");
  const double residual = g_value(model, u, lam) - g_value(model, u_minus, lam);
  const double scale = std::abs(model.f(u)) + std::abs(model.f(u_minus)) +
                       std::abs(lam) * (std::abs(u) + std::abs(u_minus)) + 1e-300;
  if (std::abs(residual) > 1e-9 * scale) {
    std::ostringstream msg;
    msg << "u=" << u << " is not an equilibrium for u_minus=" << u_minus << ", lam=" << lam
        << " (residual " << residual << ")";
    throw PreconditionError(msg.str());
  }
  const double slope = model.df(u) - lam;
  if (slope == 0.0) throw PreconditionError("non-hyperbolic equilibrium: f'(u) equals lam");
  EquilibriumNature nature;
  nature.eigen = eigenvalues(model, u, lam, alpha, eta);
  if (eta.value() * slope > 0.0) {
    nature.kind = EquilibriumKind::saddle;
    return nature;
  }
  if (alpha == 0.0) {
    throw PreconditionError("alpha = 0 makes a non-saddle equilibrium a center");
  }
  const bool node = nature.eigen.discriminant >= 0.0;
  if (eta.value() > 0) {
    nature.kind = node ? EquilibriumKind::stable_node : EquilibriumKind::stable_spiral;
  } else {
    nature.kind = node ? EquilibriumKind::unstable_node : EquilibriumKind::unstable_spiral;
  }
  return nature;
}

TrajectoryCurve v_minus_branch(const FluxModel& model, double u0, double lam, double alpha,
                               const BranchOptions& options) {
  require_ratio(alpha);
  return minus_branch(model, three_roots(model, u0, lam), alpha, options);
}

TrajectoryCurve v_plus_branch(const FluxModel& model, double u0, double lam, double alpha,
                              const BranchOptions& options) {
  require_ratio(alpha);
  return plus_branch(model, three_roots(model, u0, lam), alpha, options);
}

double connection_gap(const FluxModel& model, double u0, double lam, double alpha,
                      const BranchOptions& options) {
  return connection_gap(model, three_roots(model, u0, lam), alpha, options);
}

double connection_gap(const FluxModel& model, const Equilibria& e, double alpha,
                      const BranchOptions& options) {
  require_ratio(alpha);
  if (e.tangential) throw PreconditionError("connection gap needs three distinct equilibria");
  return plus_branch(model, e, alpha, options).end_value() -
         minus_branch(model, e, alpha, options).end_value();
}

TrajectoryCurve saddle_connection(const FluxModel& model, double u0, double lam, double alpha,
                                  const BranchOptions& options) {
  require_ratio(alpha);
  const Equilibria e = three_roots(model, u0, lam);
  TrajectoryCurve curve = minus_branch(model, e, alpha, options);
  const TrajectoryCurve plus = plus_branch(model, e, alpha, options);
  curve.samples.insert(curve.samples.end(), plus.samples.rbegin() + 1, plus.samples.rend());
  curve.u_end = e.u2;
  return curve;
}

TrajectoryCurve dispersive_trajectory(const FluxModel& model, double u_minus, int samples) {
  model.require_concave_convex();
  if (u_minus == 0.0) throw PreconditionError("dispersive trajectory needs u_minus != 0");
  if (samples < 2) throw PreconditionError("dispersive trajectory needs at least 2 samples");
  const double u_plus = phi_zero(model, u_minus);
  const double lam = chord_speed(model, u_minus, u_plus);
  const auto gp = [&](double u) { return big_g_prime(model, u, u_minus, lam); };

  std::vector<double> us(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    us[i] = (i == samples) ? u_plus : u_minus + (u_plus - u_minus) * i / samples;
  }
  // G from whichever end is closer; both ends are zeros of G.
  std::vector<double> from_start(us.size(), 0.0), from_end(us.size(), 0.0);
  for (int i = 1; i <= samples; ++i) {
    from_start[i] = from_start[i - 1] + numerics::integrate(gp, us[i - 1], us[i]);
  }
  for (int i = samples - 1; i >= 0; --i) {
    from_end[i] = from_end[i + 1] + numerics::integrate(gp, us[i + 1], us[i]);
  }
  double g_max = 0.0;
  for (double g : from_start) g_max = std::max(g_max, g);

  TrajectoryCurve curve;
  curve.u_start = u_minus;
  curve.u_end = u_plus;
  curve.lam = lam;
  curve.alpha = 0.0;
  const auto curvature = [&](double u) {
    return (model.df(u) - lam) * model.entropy_weight(u);
  };
  const double dir = sign_of(u_plus - u_minus);
  curve.samples.push_back({u_minus, 0.0, -dir * std::sqrt(curvature(u_minus))});
  for (int i = 1; i < samples; ++i) {
    const double g = (2 * i <= samples) ? from_start[i] : from_end[i];
    if (g < -1e-9 * g_max) {
      std::ostringstream msg;
      msg << "G(" << us[i] << "; " << u_minus << ", " << lam << ") = " << g
          << " is negative inside (phi0, u_minus)";
      throw ModelError(msg.str());
    }
    const double v = -std::sqrt(2.0 * std::max(g, 0.0));
    curve.samples.push_back({us[i], v, v != 0.0 ? gp(us[i]) / v : 0.0});
  }
  curve.samples.push_back({u_plus, 0.0, dir * std::sqrt(curvature(u_plus))});
  return curve;
}

Profile profile_from_curve(const FluxModel& model, const TrajectoryCurve& curve) {
  const auto& s = curve.samples;
  if (s.size() < 2) throw PreconditionError("curve has fewer than two samples");
  const double dir = sign_of(s.back().u - s.front().u);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (!(dir * (s[i + 1].u - s[i].u) > 0.0)) {
      throw PreconditionError("curve samples are not strictly monotone in u");
    }
    if (i > 0 && !(s[i].v < 0.0)) {
      std::ostringstream msg;
      msg << "curve has v=" << s[i].v << " >= 0 at interior u=" << s[i].u;
      throw PreconditionError(msg.str());
    }
  }
  const double trunc = kTruncation * std::abs(curve.u_end - curve.u_start);

  // Integration nodes: every sample, with equilibrium ends pulled inside by
  // `trunc` and graded points added towards them.
  std::vector<double> nodes;
  const std::size_t last_seg = s.size() - 2;
  const auto graded = [&](double from, double to, bool outward) {
    // Geometric spacing between distance `trunc` and the full segment.
    const double span = std::abs(to - from);
    if (!(span > trunc)) return;
    const double ratio = std::pow(span / trunc, 1.0 / kTailPoints);
    for (int k = 1; k < kTailPoints; ++k) {
      const int j = outward ? kTailPoints - k : k;
      const double dist = trunc * std::pow(ratio, j);
      nodes.push_back(from + sign_of(to - from) * dist);
    }
  };
  if (s.front().v == 0.0) {
    nodes.push_back(s.front().u + dir * trunc);
    graded(s.front().u, s[1].u, false);
  } else {
    nodes.push_back(s.front().u);
  }
  for (std::size_t i = 1; i + 1 < s.size(); ++i) nodes.push_back(s[i].u);
  if (s.back().v == 0.0) {
    graded(s.back().u, s[s.size() - 2].u, true);
    nodes.push_back(s.back().u - dir * trunc);
  } else {
    nodes.push_back(s.back().u);
  }

  const auto seg_of = [&](double u) {
    std::size_t k = 0;
    while (k < last_seg && dir * (u - s[k + 1].u) > 0.0) ++k;
    return k;
  };
  // Cumulative y at each node, splitting integrals at sample boundaries.
  const auto integrate_span = [&](double a, double b) {
    double total = 0.0;
    std::size_t k = seg_of(a);
    while (true) {
      const double seg_end = s[k + 1].u;
      const bool inside = dir * (b - seg_end) <= 0.0;
      const double stop = inside ? b : seg_end;
      if (stop != a) total += segment_y(model, s[k], s[k + 1], a, stop);
      if (inside || k == last_seg) break;
      a = stop;
      ++k;
    }
    return total;
  };

  std::vector<double> ys(nodes.size(), 0.0);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    ys[i] = ys[i - 1] + integrate_span(nodes[i - 1], nodes[i]);
  }
  const double u_mid = 0.5 * (curve.u_start + curve.u_end);
  double y_mid = 0.0;
  if (dir * (u_mid - nodes.front()) <= 0.0) {
    y_mid = -integrate_span(u_mid, nodes.front());
  } else {
    std::size_t i = 0;
    while (i + 1 < nodes.size() && dir * (u_mid - nodes[i + 1]) > 0.0) ++i;
    y_mid = ys[i] + integrate_span(nodes[i], u_mid);
  }

  Profile profile;
  profile.u_start = curve.u_start;
  profile.u_end = curve.u_end;
  profile.samples.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    profile.samples.push_back({ys[i] - y_mid, nodes[i]});
  }
  std::sort(profile.samples.begin(), profile.samples.end(),
            [](const ProfileSample& a, const ProfileSample& b) { return a.y < b.y; });
  return profile;
}

std::optional<double> first_axis_crossing(const FluxModel& model, double u0, double lam,
                                          double alpha) {
  require_ratio(alpha);
  const Equilibria e = three_roots(model, u0, lam);
  const double mu = eigenvalues(model, u0, lam, alpha).upper.real();
  const double slope = mu * model.c2(u0);
  const double len = u0 - e.u1;
  const double delta = 1e-6 * len;
  const double vscale = slope * len;
  const double width = u0 - e.u2;

  // Arc-length-free parametrization: du/ds = v, dv/ds = G'(u) - alpha b/c1 v.
  const auto rhs = [&](const State2& x, State2& dx, double) {
    dx[0] = x[1];
    dx[1] = big_g_prime(model, x[0], u0, lam) - alpha * model.b(x[0]) / model.c1(x[0]) * x[1];
  };
  auto stepper = odeint::make_dense_output(kAbsTol * std::min(vscale, width), kRelTol,
                                           odeint::runge_kutta_dopri5<State2>());
  stepper.initialize(State2{u0 - delta, -delta * slope}, 0.0, 1e-3 / std::max(mu, 1e-300));
  constexpr int kMaxSteps = 200000;
  for (int step = 0; step < kMaxSteps; ++step) {
    const auto [t0, t1] = stepper.do_step(rhs);
    const State2& x = stepper.current_state();
    if (x[1] >= 0.0) {
      State2 mid;
      double lo = t0, hi = t1;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::abs(hi); ++it) {
        const double t = 0.5 * (lo + hi);
        stepper.calc_state(t, mid);
        (mid[1] < 0.0 ? lo : hi) = t;
      }
      stepper.calc_state(hi, mid);
      if (mid[0] <= e.u2) return std::nullopt;
      return mid[0];
    }
    if (x[0] <= e.u2) return std::nullopt;
    if (std::abs(x[0] - e.u1) < 1e-7 * width && std::abs(x[1]) < 1e-7 * vscale) return e.u1;
  }
  return std::nullopt;
}

void write_csv(std::ostream& out, const TrajectoryCurve& curve) {
  out << "u,v\n";
  for (const auto& s : curve.samples) out << format_number(s.u) << ',' << format_number(s.v) << '\n';
}

void write_csv(std::ostream& out, const Profile& profile) {
  out << "y,u\n";
  for (const auto& s : profile.samples) {
    out << format_number(s.y) << ',' << format_number(s.u) << '\n';
  }
}

}  // namespace kinrel
