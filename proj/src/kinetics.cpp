#include "kinrel/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "kinrel/errors.hpp"
#include "kinrel/format.hpp"
#include "kinrel/numerics.hpp"
#include "kinrel/phaseplane.hpp"

namespace kinrel {

namespace {

constexpr int kFirstLevel = 6;
constexpr int kLastLevel = 12;
constexpr int kRichardsonLevels = 2;
constexpr int kMaxDoublings = 20;
constexpr double kSnap = 1e-7;
constexpr double kGapTolerance = 1e-8;

long long memo_key(double x) { return std::llround(x * 1e12); }

void require_ratio(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    std::ostringstream msg;
    msg << "alpha must be a finite non-negative number, got " << alpha;
    throw PreconditionError(msg.str());
  }
}

Equilibria equilibria_through(const FluxModel& model, double u0, double u2) {
  return equilibria(model, u0, chord_speed(model, u0, u2));
}

double critical_ratio_positive(const FluxModel& model, double u0, double u2) {
  const double natural = phi_natural(model, u0);
  const double zero = phi_zero(model, u0);
  const double slack = 1e-12 * u0;
  if (u2 < zero - slack || u2 >= natural) {
    std::ostringstream msg;
    msg << "u2=" << u2 << " outside the admissible band [" << zero << ", " << natural
        << ") of u0=" << u0;
    throw PreconditionError(msg.str());
  }
  const Equilibria e = equilibria_through(model, u0, std::max(u2, zero));
  const BranchOptions endpoint_only{1e-6, 0};
  const double v_minus = v_minus_branch(model, u0, e.lam, 0.0, endpoint_only).end_value();
  const double v_plus = v_plus_branch(model, u0, e.lam, 0.0, endpoint_only).end_value();
  if (v_plus - v_minus <= kGapTolerance * std::abs(v_minus)) return 0.0;

  const auto w = [&](double alpha) { return connection_gap(model, e, alpha); };
  // Ratio at which damping and dispersion balance at u0; far larger values make
  // the branch equation stiff.
  double hi = std::sqrt((model.df(u0) - e.lam) * model.c1(u0) * model.c2(u0)) / model.b(u0);
  int doublings = 0;
  while (!(w(hi) < 0.0)) {
    if (++doublings > kMaxDoublings) {
      std::ostringstream msg;
      msg << "critical ratio of (" << u0 << ", " << u2 << ") exceeds 2^" << kMaxDoublings;
      throw IntegrationError(msg.str());
    }
    hi *= 2.0;
  }
  return numerics::solve_bracketed(w, 0.0, hi, 1e-13 * hi);
}

double threshold_positive(const FluxModel& model, double u0) {
  const double natural = phi_natural(model, u0);
  const double zero = phi_zero(model, u0);
  const double width = natural - zero;
  std::vector<double> values;
  for (int k = kFirstLevel; k <= kLastLevel; ++k) {
    values.push_back(critical_ratio_positive(model, u0, natural - std::ldexp(width, -k)));
    if (values.size() > 1 && !(values.back() > values[values.size() - 2])) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "critical ratios approaching phi_natural(" << u0
          << ") are not increasing; extrapolation sequence:";
      for (double v : values) msg << ' ' << v;
      throw ModelError(msg.str());
    }
  }
  return numerics::richardson(values, kRichardsonLevels);
}

}  // namespace

const char* to_string(Regime r) {
  return r == Regime::nonclassical ? "nonclassical" : "classical-threshold";
}

bool ShockSet::contains(double u) const {
  if (isolated && *isolated == u) return true;
  const bool above = lo_closed ? u >= lo : u > lo;
  const bool below = hi_closed ? u <= hi : u < hi;
  return above && below;
}

double threshold_slope_analytic(const FluxModel& model) {
  const double third = model.d3f(0.0);
  if (!(third > 0.0)) throw ModelError("threshold slope needs f'''(0) > 0");
  return std::sqrt(model.c1(0.0) * model.c2(0.0)) / (4.0 * model.b(0.0)) * std::sqrt(3.0 * third);
}

Kinetics::Kinetics(FluxModel model)
    : model_(std::move(model)),
      work_(model_.normalized()),
      mirror_(work_.reflected()),
      shift_(model_.df(0.0)) {
  model_.require_concave_convex();
}

double Kinetics::critical_ratio(double u0, double u2) const {
  model_.require_in_domain(u0, "u0");
  model_.require_in_domain(u2, "u2");
  if (u0 > 0.0) return critical_ratio_positive(work_, u0, u2);
  if (u0 < 0.0) return critical_ratio_positive(mirror_, -u0, -u2);
  throw PreconditionError("critical ratio needs u0 != 0");
}

double Kinetics::positive_threshold(bool mirrored, double u0) const {
  const auto key = std::make_pair(mirrored, memo_key(u0));
  {
    std::lock_guard lock(mutex_);
    const auto it = thresholds_.find(key);
    if (it != thresholds_.end()) return it->second;
  }
  const double value = threshold_positive(mirrored ? mirror_ : work_, u0);
  std::lock_guard lock(mutex_);
  thresholds_.emplace(key, value);
  return value;
}

double Kinetics::threshold_ratio(double u0) const {
  model_.require_in_domain(u0, "u0");
  if (u0 == 0.0) return 0.0;
  return positive_threshold(u0 < 0.0, std::abs(u0));
}

KineticSample Kinetics::positive_kinetic(bool mirrored, double u0, double alpha) const {
  const auto key = std::make_tuple(mirrored, memo_key(u0), memo_key(alpha));
  {
    std::lock_guard lock(mutex_);
    const auto it = samples_.find(key);
    if (it != samples_.end()) return it->second;
  }
  const FluxModel& m = mirrored ? mirror_ : work_;
  const double natural = phi_natural(m, u0);
  KineticSample s{u0, alpha, natural, natural, m.df(natural), Regime::classical_threshold};

  std::optional<double> flat;
  if (alpha == 0.0) {
    flat = phi_zero(m, u0);
  } else if (alpha < positive_threshold(mirrored, u0)) {
    const double zero = phi_zero(m, u0);
    const double width = natural - zero;
    // W > 0 at u2 means u2 lies above phi_flat.
    const auto w = [&](double u2) {
      return connection_gap(m, equilibria_through(m, u0, u2), alpha);
    };
    for (int k = kFirstLevel; k <= 48; ++k) {
      const double top = natural - std::ldexp(width, -k);
      if (!(top > zero)) break;
      if (w(top) > 0.0) {
        flat = numerics::solve_bracketed(w, zero, top, 1e-13 * u0);
        break;
      }
    }
  }
  if (flat && std::abs(*flat - natural) >= kSnap * u0) {
    s.phi_flat = *flat;
    s.lam = chord_speed(m, u0, *flat);
    s.phi_sharp = equilibria(m, u0, s.lam).u1;
    s.regime = Regime::nonclassical;
  }
  s.lam += shift_;
  std::lock_guard lock(mutex_);
  samples_.emplace(key, s);
  return s;
}

KineticSample Kinetics::kinetic_function(double u0, double alpha) const {
  model_.require_in_domain(u0, "u0");
  require_ratio(alpha);
  if (u0 > 0.0) return positive_kinetic(false, u0, alpha);
  if (u0 < 0.0) {
    KineticSample s = positive_kinetic(true, -u0, alpha);
    s.u0 = u0;
    s.phi_flat = -s.phi_flat;
    s.phi_sharp = -s.phi_sharp;
    return s;
  }
  throw PreconditionError("kinetic function needs u0 != 0");
}

double Kinetics::lambda_alpha(double u0, double alpha) const {
  return kinetic_function(u0, alpha).lam;
}

ShockSet Kinetics::shock_set(double u_minus, double alpha) const {
  const KineticSample k = kinetic_function(u_minus, alpha);
  ShockSet set;
  if (k.regime == Regime::nonclassical) set.isolated = k.phi_flat;
  const bool merged = !set.isolated;
  if (u_minus > 0.0) {
    set.lo = k.phi_sharp;
    set.hi = u_minus;
    set.lo_closed = merged;
    set.hi_closed = true;
  } else {
    set.lo = u_minus;
    set.hi = k.phi_sharp;
    set.lo_closed = true;
    set.hi_closed = merged;
  }
  return set;
}

bool Kinetics::classical_exists(double u0, double lam, double alpha) const {
  model_.require_in_domain(u0, "u0");
  require_ratio(alpha);
  if (u0 == 0.0) throw PreconditionError("classical-wave predicate needs u0 != 0");
  const double lam_nat = lambda_natural(model_, u0);
  const double lam_top = model_.df(u0);
  const double slack = 1e-12 * std::max(std::abs(lam_nat), std::abs(lam_top));
  if (lam < lam_nat - slack || lam > lam_top + slack) {
    std::ostringstream msg;
    msg << "speed " << lam << " outside [" << lam_nat << ", " << lam_top << "]";
    throw PreconditionError(msg.str());
  }
  if (alpha >= threshold_ratio(u0)) return true;
  return lam > lambda_alpha(u0, alpha);
}

SlopeEstimate Kinetics::threshold_slope_at_zero() const {
  SlopeEstimate est;
  est.kappa = threshold_slope_analytic(model_);
  for (double u0 : {1e-2, 1e-3}) est.ratios.emplace_back(u0, threshold_ratio(u0) / u0);
  const auto [x1, r1] = est.ratios[0];
  const auto [x2, r2] = est.ratios[1];
  est.fitted = r2 - (r1 - r2) * x2 / (x1 - x2);
  return est;
}

ThresholdCurve Kinetics::threshold_curve(const std::vector<double>& u0s) const {
  ThresholdCurve curve;
  curve.kappa = threshold_slope_analytic(model_);
  for (double u0 : u0s) curve.samples.emplace_back(u0, threshold_ratio(u0));
  // Least-squares line through alpha/u0 against u0; its intercept is the slope at 0.
  std::vector<std::pair<double, double>> pts;
  for (const auto& [u0, a] : curve.samples) {
    if (u0 != 0.0) pts.emplace_back(std::abs(u0), a / std::abs(u0));
  }
  if (pts.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double det = n * sxx - sx * sx;
    if (det > 0.0) curve.fitted_slope = (sy * sxx - sx * sxy) / det;
  }
  return curve;
}

double critical_ratio(const FluxModel& model, double u0, double u2) {
  return Kinetics(model).critical_ratio(u0, u2);
}

double threshold_ratio(const FluxModel& model, double u0) {
  return Kinetics(model).threshold_ratio(u0);
}

double lambda_alpha(const FluxModel& model, double u0, double alpha) {
  return Kinetics(model).lambda_alpha(u0, alpha);
}

KineticSample kinetic_function(const FluxModel& model, double u0, double alpha) {
  return Kinetics(model).kinetic_function(u0, alpha);
}

ShockSet shock_set(const FluxModel& model, double u_minus, double alpha) {
  return Kinetics(model).shock_set(u_minus, alpha);
}

bool classical_exists(const FluxModel& model, double u0, double lam, double alpha) {
  return Kinetics(model).classical_exists(u0, lam, alpha);
}

SlopeEstimate threshold_slope_at_zero(const FluxModel& model) {
  return Kinetics(model).threshold_slope_at_zero();
}

void write_kinetic_csv(std::ostream& out, const std::vector<KineticSample>& rows) {
  out << "u0,alpha,phi_flat,phi_sharp,lambda,regime\n";
  for (const auto& r : rows) {
    out << format_number(r.u0) << ',' << format_number(r.alpha) << ','
        << format_number(r.phi_flat) << ',' << format_number(r.phi_sharp) << ','
        << format_number(r.lam) << ',' << to_string(r.regime) << '\n';
  }
}

void write_threshold_csv(std::ostream& out, const ThresholdCurve& curve) {
  out << "u0,alpha_natural\n";
  for (const auto& [u0, a] : curve.samples) {
    out << format_number(u0) << ',' << format_number(a) << '\n';
  }
  out << "# kappa," << format_number(curve.kappa) << '\n';
  if (curve.fitted_slope) out << "# fitted_slope," << format_number(*curve.fitted_slope) << '\n';
}

}  // namespace kinrel
