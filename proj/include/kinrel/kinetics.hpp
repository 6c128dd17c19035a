#ifndef KINREL_KINETICS_HPP
#define KINREL_KINETICS_HPP

// Shooting-based critical ratio A(u0, u2), threshold ratio, kinetic function
// phi_flat with its companion phi_sharp, shock sets and the classical-wave
// predicate.

#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "kinrel/model.hpp"

namespace kinrel {

enum class Regime { nonclassical, classical_threshold };

const char* to_string(Regime r);

struct KineticSample {
  double u0 = 0.0;
  double alpha = 0.0;
  double phi_flat = 0.0;
  double phi_sharp = 0.0;
  double lam = 0.0;
  Regime regime = Regime::nonclassical;
};

/// Optional isolated state plus an interval with endpoint-inclusion flags.
struct ShockSet {
  std::optional<double> isolated;
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(double u) const;
};

struct ThresholdCurve {
  std::vector<std::pair<double, double>> samples;  ///< (u0, alpha_natural)
  double kappa = 0.0;                              ///< analytic slope at 0
  std::optional<double> fitted_slope;              ///< needs two or more samples
};

struct SlopeEstimate {
  double kappa = 0.0;
  std::vector<std::pair<double, double>> ratios;  ///< (u0, alpha_natural(u0)/u0)
  double fitted = 0.0;                            ///< ratios extrapolated to u0 = 0
};

/// kappa = sqrt(c1(0) c2(0)) / (4 b(0)) * sqrt(3 f'''(0))
double threshold_slope_analytic(const FluxModel& model);

/// Evaluator with a thread-safe memo of thresholds and kinetic samples keyed
/// on (u0, alpha) rounded to 1e-12.
class Kinetics {
 public:
  explicit Kinetics(FluxModel model);

  const FluxModel& model() const { return model_; }

  double critical_ratio(double u0, double u2) const;
  double threshold_ratio(double u0) const;
  double lambda_alpha(double u0, double alpha) const;
  KineticSample kinetic_function(double u0, double alpha) const;
  ShockSet shock_set(double u_minus, double alpha) const;
  bool classical_exists(double u0, double lam, double alpha) const;
  SlopeEstimate threshold_slope_at_zero() const;
  ThresholdCurve threshold_curve(const std::vector<double>& u0s) const;

 private:
  FluxModel model_;
  // Shooting runs on the normalized flux; `shift_` = f'(0) restores speeds.
  FluxModel work_;
  FluxModel mirror_;
  double shift_ = 0.0;
  mutable std::mutex mutex_;
  // Keys carry whether the state was reflected to make it positive.
  mutable std::map<std::pair<bool, long long>, double> thresholds_;
  mutable std::map<std::tuple<bool, long long, long long>, KineticSample> samples_;

  double positive_threshold(bool mirrored, double u0) const;
  KineticSample positive_kinetic(bool mirrored, double u0, double alpha) const;
};

double critical_ratio(const FluxModel& model, double u0, double u2);
double threshold_ratio(const FluxModel& model, double u0);
double lambda_alpha(const FluxModel& model, double u0, double alpha);
KineticSample kinetic_function(const FluxModel& model, double u0, double alpha);
ShockSet shock_set(const FluxModel& model, double u_minus, double alpha);
bool classical_exists(const FluxModel& model, double u0, double lam, double alpha);
SlopeEstimate threshold_slope_at_zero(const FluxModel& model);

void write_kinetic_csv(std::ostream& out, const std::vector<KineticSample>& rows);
/// Rows (u0, alpha_natural), then comment lines carrying kappa and the fitted slope.
void write_threshold_csv(std::ostream& out, const ThresholdCurve& curve);

}  // namespace kinrel

#endif  // KINREL_KINETICS_HPP
