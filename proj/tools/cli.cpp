#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "kinrel/cubic_oracle.hpp"
#include "kinrel/diffusion_limit.hpp"
#include "kinrel/errors.hpp"
#include "kinrel/format.hpp"
#include "kinrel/io.hpp"
#include "kinrel/kinetics.hpp"
#include "kinrel/model.hpp"
#include "kinrel/phaseplane.hpp"

namespace kinrel::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::string model_path;
  std::string out_path;
  std::string u0, alpha, lambda, u2, u_plus;
  std::string mode = "connection";
  int grid = 512;
  std::optional<double> tol;
  bool diffusive = false;
};

// Model problems found while loading are configuration errors.
struct LoadError : ConfigError {
  using ConfigError::ConfigError;
};

FluxModel load(const RunConfig& config) {
  if (config.model_path.empty()) return FluxModel::cubic();
  try {
    return load_model(config.model_path);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw LoadError(std::string("model rejected: ") + e.what());
  }
}

std::vector<double> grid_of(const FluxModel& model, const std::string& text, const char* flag) {
  if (text.empty()) throw ConfigError(std::string(flag) + " is required");
  auto values = parse_range(text);
  if (values.empty()) throw ConfigError(std::string(flag) + " grid is empty");
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError(std::string(flag) + " values must be finite");
    if (std::string(flag) != "--alpha" && !model.domain().contains(v)) {
      std::ostringstream msg;
      msg << flag << " value " << v << " outside the model domain [" << model.domain().lo << ", "
          << model.domain().hi << "]";
      throw ConfigError(msg.str());
    }
  }
  return values;
}

std::vector<double> alpha_grid(const FluxModel& model, const std::string& text) {
  auto values = grid_of(model, text, "--alpha");
  for (double a : values) {
    if (!(a >= 0.0)) throw ConfigError("--alpha values must be non-negative");
  }
  return values;
}

double single(const FluxModel& model, const std::string& text, const char* flag) {
  const auto values = grid_of(model, text, flag);
  if (values.size() != 1) throw ConfigError(std::string(flag) + " takes a single value here");
  return values.front();
}

/// Evaluates fn(0..n-1) on worker threads; results in index order, and the
/// first failure in index order is rethrown.
template <class T>
std::vector<T> sweep(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            results[i] = fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*results[i]));
  }
  return out;
}

/// Writes to --out when given, else to the caller's stream.
void emit(const RunConfig& config, std::ostream& out, const std::string& suffix,
          const std::function<void(std::ostream&)>& body) {
  if (config.out_path.empty()) {
    body(out);
    return;
  }
  const std::string path = config.out_path + suffix;
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write \"" + path + "\"");
  body(file);
}

int kinetic_table(const RunConfig& config, std::ostream& out) {
  const FluxModel model = load(config);
  const auto u0s = grid_of(model, config.u0, "--u0");
  const auto alphas = alpha_grid(model, config.alpha);
  const Kinetics kinetics(model);
  const auto rows = sweep<KineticSample>(u0s.size() * alphas.size(), [&](std::size_t i) {
    return kinetics.kinetic_function(u0s[i / alphas.size()], alphas[i % alphas.size()]);
  });
  emit(config, out, "", [&](std::ostream& s) { write_kinetic_csv(s, rows); });
  return kExitOk;
}

int threshold_curve(const RunConfig& config, std::ostream& out) {
  const FluxModel model = load(config);
  const auto u0s = grid_of(model, config.u0, "--u0");
  const Kinetics kinetics(model);
  sweep<double>(u0s.size(), [&](std::size_t i) { return kinetics.threshold_ratio(u0s[i]); });
  const ThresholdCurve curve = kinetics.threshold_curve(u0s);
  emit(config, out, "", [&](std::ostream& s) { write_threshold_csv(s, curve); });
  return kExitOk;
}

int trajectory(const RunConfig& config, std::ostream& out) {
  const FluxModel model = load(config);
  const double u0 = single(model, config.u0, "--u0");
  BranchOptions options;
  options.samples = config.grid;

  if (config.mode == "diffusive") {
    const double u_plus = single(model, config.u_plus, "--u-plus");
    const DiffusiveProfile profile = diffusive_profile(model, u0, u_plus);
    emit(config, out, ".yu.csv", [&](std::ostream& s) { write_csv(s, profile); });
    return kExitOk;
  }

  TrajectoryCurve curve;
  if (config.mode == "dispersive") {
    curve = dispersive_trajectory(model, u0, config.grid);
  } else if (config.mode == "connection") {
    double lam = 0.0, alpha = 0.0;
    if (!config.u2.empty()) {
      const double u2 = single(model, config.u2, "--u2");
      alpha = critical_ratio(model, u0, u2);
      lam = chord_speed(model, u0, u2);
    } else if (!config.lambda.empty()) {
      lam = single(model, config.lambda, "--lambda");
      alpha = single(model, config.alpha, "--alpha");
    } else {
      alpha = single(model, config.alpha, "--alpha");
      const KineticSample k = kinetic_function(model, u0, alpha);
      if (k.regime != Regime::nonclassical) {
        throw PreconditionError("alpha is at or above the threshold ratio of u0: the kinetic "
                                "value is the classical tangency state, not a saddle-saddle "
                                "connection");
      }
      lam = k.lam;
    }
    curve = saddle_connection(model, u0, lam, alpha, options);
  } else {
    throw ConfigError("--mode must be connection, dispersive or diffusive");
  }
  const Profile profile = profile_from_curve(model, curve);
  if (config.out_path.empty()) {
    write_csv(out, curve);
    out << '\n';
    write_csv(out, profile);
  } else {
    emit(config, out, ".uv.csv", [&](std::ostream& s) { write_csv(s, curve); });
    emit(config, out, ".yu.csv", [&](std::ostream& s) { write_csv(s, profile); });
  }
  return kExitOk;
}

int shock_set_command(const RunConfig& config, std::ostream& out) {
  const FluxModel model = load(config);
  const auto u_minus = grid_of(model, config.u0, "--u0");
  if (config.diffusive) {
    std::vector<DiffusiveShockSet> sets;
    for (double u : u_minus) sets.push_back(diffusive_shock_set(model, u));
    emit(config, out, "", [&](std::ostream& s) { write_diffusive_set_csv(s, u_minus, sets); });
    return kExitOk;
  }
  const auto alphas = alpha_grid(model, config.alpha);
  const Kinetics kinetics(model);
  const std::size_t n = u_minus.size() * alphas.size();
  std::vector<double> us, as;
  for (std::size_t i = 0; i < n; ++i) {
    us.push_back(u_minus[i / alphas.size()]);
    as.push_back(alphas[i % alphas.size()]);
  }
  const auto sets =
      sweep<ShockSet>(n, [&](std::size_t i) { return kinetics.shock_set(us[i], as[i]); });
  emit(config, out, "", [&](std::ostream& s) { write_shock_set_csv(s, us, as, sets); });
  return kExitOk;
}

int entropy_command(const RunConfig& config, std::ostream& out) {
  const FluxModel model = load(config);
  const auto u_minus = grid_of(model, config.u0, "--u0");
  struct Row {
    double u_minus;
    std::optional<double> alpha;
    double u_plus;
    double dissipation = 0.0;
  };
  std::vector<Row> rows;
  if (!config.u_plus.empty()) {
    for (double u : u_minus) {
      for (double w : grid_of(model, config.u_plus, "--u-plus")) rows.push_back({u, {}, w});
    }
  } else {
    const auto alphas = alpha_grid(model, config.alpha);
    const Kinetics kinetics(model);
    for (double u : u_minus) {
      for (double a : alphas) rows.push_back({u, a, 0.0});
    }
    const auto phis = sweep<double>(rows.size(), [&](std::size_t i) {
      return kinetics.kinetic_function(rows[i].u_minus, *rows[i].alpha).phi_flat;
    });
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].u_plus = phis[i];
  }
  for (auto& r : rows) r.dissipation = entropy_dissipation(model, r.u_minus, r.u_plus);
  emit(config, out, "", [&](std::ostream& s) {
    s << "u_minus,alpha,u_plus,dissipation\n";
    for (const auto& r : rows) {
      s << format_number(r.u_minus) << ',' << (r.alpha ? format_number(*r.alpha) : "") << ','
        << format_number(r.u_plus) << ',' << format_number(r.dissipation) << '\n';
    }
  });
  return kExitOk;
}

struct Check {
  std::string name;
  double expected;
  double got;
  double tol;
};

/// K u^3 + a u + c with b = c2 = 1 and constant c1 = C.
struct CubicFamily {
  double K;
  double C;
};

std::optional<CubicFamily> cubic_family(const FluxModel& model) {
  const auto& poly = model.polynomial_form();
  if (!poly) return std::nullopt;
  const auto constant_one = [](const Polynomial& p) { return p.is_constant() && p(0.0) == 1.0; };
  if (poly->flux.degree() != 3 || poly->flux.coefficient(2) != 0.0 || !constant_one(poly->b) ||
      !constant_one(poly->c2) || !poly->c1.is_constant()) {
    return std::nullopt;
  }
  return CubicFamily{poly->flux.coefficient(3), poly->c1(0.0)};
}

std::vector<Check> validation_checks(const FluxModel& model) {
  model.require_concave_convex();
  const Kinetics kinetics(model);
  std::vector<Check> checks;
  const double u = std::min(1.0, 0.5 * std::min(model.domain().hi, -model.domain().lo));

  const double zero = phi_zero(model, u);
  const double natural = phi_natural(model, u);
  checks.push_back({"phi_zero_dissipation", 0.0, entropy_dissipation(model, u, zero), 1e-8});
  double lower = model.domain().lo;
  try {
    lower = phi_natural_inverse(model, u);
  } catch (const RootNotBracketed&) {
  }
  checks.push_back({"sandwich_bounds", 1.0,
                    (lower < zero && zero < natural && natural < 0.0) ? 1.0 : 0.0, 0.0});
  checks.push_back({"kinetic_alpha_zero", zero, kinetics.kinetic_function(u, 0.0).phi_flat, 1e-9});

  const double alpha = 0.5 * kinetics.threshold_ratio(u);
  bool decreasing = true;
  double previous = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double phi = kinetics.kinetic_function(u * (0.6 + 0.2 * i), alpha).phi_flat;
    if (i > 0 && !(phi < previous)) decreasing = false;
    previous = phi;
  }
  checks.push_back({"kinetic_decreasing_in_u0", 1.0, decreasing ? 1.0 : 0.0, 0.0});

  const double u2 = 0.5 * (zero + natural);
  const double lam = chord_speed(model, u, u2);
  const double a = kinetics.critical_ratio(u, u2);
  bool gap_decreasing = true;
  double last_gap = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double gap = connection_gap(model, u, lam, a * 0.25 * std::pow(2.0, i));
    if (i > 0 && !(gap < last_gap)) gap_decreasing = false;
    last_gap = gap;
  }
  checks.push_back({"connection_gap_decreasing", 1.0, gap_decreasing ? 1.0 : 0.0, 0.0});

  const SlopeEstimate slope = kinetics.threshold_slope_at_zero();
  checks.push_back({"threshold_slope", slope.kappa, slope.fitted, 0.02 * slope.kappa});

  if (const auto family = cubic_family(model)) {
    const double expected = cubic_threshold(u, {family->K, family->C});
    checks.push_back({"cubic_threshold", expected, kinetics.threshold_ratio(u), 1e-4 * expected});
    if (family->K == 1.0 && family->C == 1.0) {
      const double ratio = cubic_critical_ratio(u, -0.7 * u);
      checks.push_back(
          {"cubic_critical_ratio", ratio, kinetics.critical_ratio(u, -0.7 * u), 1e-5 * ratio});
      for (const auto& [u0, al] : {std::pair{0.3, 0.6}, {1.0, 0.6}, {2.0, 1.2}, {0.6, 0.1}}) {
        if (!model.domain().contains(u0)) continue;
        std::ostringstream name;
        name << "cubic_kinetic_u0_" << u0 << "_alpha_" << al;
        checks.push_back({name.str(), cubic_kinetic(u0, al),
                          kinetics.kinetic_function(u0, al).phi_flat, 1e-5});
      }
      const double phi = kinetics.kinetic_function(u, 0.6).phi_flat;
      if (std::abs(u) > CubicParams{}.alpha_tilde(0.6)) {
        checks.push_back({"cubic_entropy_quadratic", cubic_entropy_dissipation(u, 0.6),
                          entropy_dissipation(model, u, phi), 1e-6});
      }
    }
  }
  return checks;
}

int validate(const RunConfig& config, std::ostream& out) {
  const FluxModel model = load(config);
  auto checks = validation_checks(model);
  bool all = true;
  json report;
  report["checks"] = json::array();
  for (auto& c : checks) {
    if (config.tol) c.tol = *config.tol;
    const bool pass = std::abs(c.got - c.expected) <= c.tol;
    all = all && pass;
    report["checks"].push_back(
        {{"name", c.name}, {"expected", c.expected}, {"got", c.got}, {"tol", c.tol}, {"pass", pass}});
  }
  report["pass"] = all;
  emit(config, out, "", [&](std::ostream& s) { s << report.dump(2) << '\n'; });
  return all ? kExitOk : kExitFailure;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Kinetic relations of diffusive-dispersive traveling waves", "kinrel"};
  app.require_subcommand(1, 1);

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--model", config.model_path, "Model JSON document (default: cubic)");
    sub->add_option("--out", config.out_path, "Output file or prefix (default: stdout)");
  };
  const auto u0_option = [&](CLI::App* sub) {
    sub->add_option("--u0", config.u0, "Left state(s), start:stop:count or a value")->required();
  };

  auto* kinetic = app.add_subcommand("kinetic-table", "Kinetic function over a (u0, alpha) grid");
  common(kinetic);
  u0_option(kinetic);
  kinetic->add_option("--alpha", config.alpha, "Ratio grid")->required();

  auto* threshold = app.add_subcommand("threshold-curve", "Threshold ratio against u0");
  common(threshold);
  u0_option(threshold);

  auto* traj = app.add_subcommand("trajectory", "Phase-plane curve and y-profile of one wave");
  common(traj);
  u0_option(traj);
  traj->add_option("--mode", config.mode, "connection | dispersive | diffusive");
  traj->add_option("--u2", config.u2, "Right state of the saddle-saddle connection");
  traj->add_option("--u-plus", config.u_plus, "Right state of the diffusive wave");
  traj->add_option("--alpha", config.alpha, "Ratio");
  traj->add_option("--lambda", config.lambda, "Speed");
  traj->add_option("--grid", config.grid, "Samples along the curve")->check(CLI::PositiveNumber);

  auto* shocks = app.add_subcommand("shock-set", "Shock sets over a (u_minus, alpha) grid");
  common(shocks);
  u0_option(shocks);
  shocks->add_option("--alpha", config.alpha, "Ratio grid");
  shocks->add_flag("--diffusive", config.diffusive, "Diffusion-only shock set");

  auto* entropy = app.add_subcommand("entropy", "Entropy dissipation of kinetic or given jumps");
  common(entropy);
  u0_option(entropy);
  entropy->add_option("--alpha", config.alpha, "Ratio grid; right state is the kinetic value");
  entropy->add_option("--u-plus", config.u_plus, "Right state grid instead of --alpha");

  auto* check = app.add_subcommand("validate", "Run the consistency and closed-form checks");
  common(check);
  check->add_option("--tol", config.tol, "Override every check tolerance")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return kExitUsage;
  }

  try {
    if (kinetic->parsed()) return kinetic_table(config, out);
    if (threshold->parsed()) return threshold_curve(config, out);
    if (traj->parsed()) return trajectory(config, out);
    if (shocks->parsed()) {
      if (!config.diffusive && config.alpha.empty()) throw ConfigError("--alpha is required");
      return shock_set_command(config, out);
    }
    if (entropy->parsed()) {
      if (config.alpha.empty() == config.u_plus.empty()) {
        throw ConfigError("entropy needs exactly one of --alpha and --u-plus");
      }
      return entropy_command(config, out);
    }
    return validate(config, out);
  } catch (const ConfigError& e) {
    report_error(err, e.kind(), e.what());
    return kExitUsage;
  } catch (const Error& e) {
    report_error(err, e.kind(), e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return kExitFailure;
  }
}

}  // namespace kinrel::cli
