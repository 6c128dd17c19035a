// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kinrel/cubic_oracle.hpp"
#include "kinrel/diffusion_limit.hpp"
#include "kinrel/errors.hpp"
#include "kinrel/kinetics.hpp"
#include "kinrel/model.hpp"
#include "kinrel/phaseplane.hpp"
#include "test_support.hpp"

using namespace kinrel;
using kinrel::testing::kSqrt2;
using kinrel::testing::linspace;
using kinrel::testing::quintic_model;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

/// Closed-form kinetic function of u^3 with unit coefficients.
double exact_kinetic(double u, double alpha) {
  const double t = 2.0 * kSqrt2 * alpha / 3.0;
  if (u >= t) return -u + t / 2.0;
  if (u <= -t) return -u - t / 2.0;
  return -u / 2.0;
}

void critical_ratio_grid(Outcome& o) {
  const Kinetics k(FluxModel::cubic());
  double worst = 0.0;
  for (double u0 : linspace(0.2, 2.0, 10)) {
    for (int j = 1; j <= 10; ++j) {
      const double u2 = -u0 + (j / 11.0) * (u0 / 2.0);
      const double exact = 3.0 / kSqrt2 * (u0 + u2);
      worst = std::max(worst, std::abs(k.critical_ratio(u0, u2) - exact) / exact);
    }
  }
  o.detail << "max rel err " << worst << " over 100 pairs";
  o.require(worst <= 1e-5, "rel err <= 1e-5");
}

void threshold(Outcome& o) {
  const double unit = threshold_ratio(FluxModel::cubic(), 1.0);
  const double scaled = threshold_ratio(FluxModel::scaled_cubic(2.0, 2.0), 1.0);
  o.detail.precision(9);
  o.detail << "alpha(1) = " << unit << ", K=C=2: " << scaled;
  o.require(std::abs(unit - 1.0606602) <= 1e-4 * 1.0606602, "unit cubic");
  o.require(std::abs(scaled - 2.1213203) <= 1e-4 * 2.1213203, "scaled cubic");
}

void kinetic_grid(Outcome& o) {
  const Kinetics k(FluxModel::cubic());
  double worst = 0.0;
  int plateau = 0;
  for (double u0 : {0.1, 0.3, 0.6, 1.0, 2.0}) {
    for (double alpha : {0.1, 0.6, 1.2, 2.0}) {
      const double exact = exact_kinetic(u0, alpha);
      worst = std::max(worst, std::abs(k.kinetic_function(u0, alpha).phi_flat - exact));
      plateau += exact == -u0 / 2.0;
    }
  }
  o.detail << "max abs err " << worst << ", " << plateau << " plateau points";
  o.require(worst <= 1e-5, "abs err <= 1e-5");
  o.require(plateau > 0, "plateau branch sampled");
}

void trajectory_shape(Outcome& o) {
  const auto m = FluxModel::cubic();
  const double u0 = 1.0, alpha = 0.6;
  const KineticSample s = kinetic_function(m, u0, alpha);
  const TrajectoryCurve curve = saddle_connection(m, u0, s.lam, alpha);
  const double u2 = -1.0 + kSqrt2 * alpha / 3.0;

  double v_err = 0.0;
  for (const auto& p : curve.samples) {
    v_err = std::max(v_err, std::abs(p.v - (p.u - u2) * (p.u - u0) / kSqrt2));
  }

  // Align on the crossing of the midpoint, then compare with the tanh profile.
  const Profile profile = profile_from_curve(m, curve);
  const double mid = 0.5 * (u0 + u2), half = 0.5 * (u0 - u2);
  double y_mid = 0.0;
  for (std::size_t i = 1; i < profile.samples.size(); ++i) {
    const auto& a = profile.samples[i - 1];
    const auto& b = profile.samples[i];
    if ((a.u - mid) * (b.u - mid) <= 0.0 && a.u != b.u) {
      y_mid = a.y + (mid - a.u) * (b.y - a.y) / (b.u - a.u);
      break;
    }
  }
  double u_err = 0.0;
  for (const auto& p : profile.samples) {
    u_err = std::max(u_err, std::abs(p.u - (mid - half * std::tanh(half * (p.y - y_mid) / kSqrt2))));
  }
  o.detail << "parabola dev " << v_err << ", profile dev " << u_err;
  o.require(v_err <= 1e-6, "parabola <= 1e-6");
  o.require(u_err <= 1e-5, "profile <= 1e-5");
}

void entropy(Outcome& o) {
  const double u = 1.0, alpha = 0.6;
  // U = u^2/2, F = 3u^4/4, jump taken by hand at the closed-form right state.
  const double phi = -u + kSqrt2 * alpha / 3.0;
  const double lam = u * u + u * phi + phi * phi;
  const double by_hand = -lam * (phi * phi - u * u) / 2.0 + 0.75 * (std::pow(phi, 4) - std::pow(u, 4));

  const auto m = FluxModel::cubic();
  const double shooting = entropy_dissipation(m, u, kinetic_function(m, u, alpha).phi_flat);
  const double closed = cubic_entropy_dissipation(u, alpha);
  const double kruzkov = cubic_entropy_dissipation(u, alpha, CubicEntropy::kruzkov(-0.5));
  const double t = 2.0 * alpha * kSqrt2 / 3.0;
  const double kruzkov_formula = 0.75 * u * (u - t) * (u - t);
  const double integral = cubic_entropy_dissipation_integral(u, alpha);

  o.detail.precision(8);
  o.detail << "E = " << closed << " (shooting " << shooting << "), Kruzkov " << kruzkov
           << ", integral gap " << std::abs(integral - closed);
  o.require(std::abs(closed - by_hand) <= 1e-12, "closed form vs hand computation");
  o.require(std::abs(closed + 0.35802) <= 1e-4, "quadratic entropy");
  o.require(std::abs(shooting + 0.35802) <= 1e-4, "quadratic entropy from shooting");
  o.require(std::abs(kruzkov - 0.1414715) <= 1e-6, "Kruzkov value");
  o.require(std::abs(kruzkov - kruzkov_formula) <= 1e-12, "Kruzkov formula");
  o.require(std::abs(integral - closed) <= 1e-6, "integral form");
}

void asymptotic_slope(Outcome& o) {
  const double kappa = 1.0606602;
  const char* separator = "";
  for (const auto& [name, m] : {std::pair{"u^3", FluxModel::cubic()},
                                {"u^3+u", FluxModel::cubic_plus_linear()}}) {
    const SlopeEstimate e = threshold_slope_at_zero(m);
    o.detail << separator << name << ": fitted " << e.fitted;
    separator = "; ";
    for (const auto& [u0, ratio] : e.ratios) {
      o.detail << " (" << u0 << ": " << ratio << ")";
      o.require(std::abs(ratio - kappa) <= 0.02 * kappa, std::string(name) + " ratio");
    }
    o.require(e.ratios.size() == 2, "two sample points");
    o.require(std::abs(e.fitted - kappa) <= 0.02 * kappa, std::string(name) + " fitted slope");
  }
}

void property_suite(Outcome& o) {
  int checks = 0;
  auto check = [&](bool ok, const std::string& what) {
    ++checks;
    o.require(ok, what);
  };
  const std::vector<FluxModel> models{FluxModel::cubic(), quintic_model()};

  for (const auto& m : models) {
    // Connection gap decreasing in alpha.
    for (double u0 : {0.5, 1.0, 1.5}) {
      const double lam_nat = lambda_natural(m, u0);
      for (double t : {0.2, 0.6, 0.9}) {
        const double lam = lam_nat + t * (m.df(u0) - lam_nat);
        double previous = connection_gap(m, u0, lam, 0.0);
        for (double alpha : {0.1, 0.3, 0.9, 2.7}) {
          const double w = connection_gap(m, u0, lam, alpha);
          check(w < previous, "W decreasing");
          previous = w;
        }
      }
    }
    // Kinetic function decreasing in u0 and sandwiched.
    const Kinetics k(m);
    for (double alpha : {0.1, 0.5, 2.0}) {
      double previous = 1e300;
      for (double u : linspace(0.2, 2.0, 7)) {
        const double phi = k.kinetic_function(u, alpha).phi_flat;
        check(phi < previous, "kinetic decreasing in u0");
        check(phi > phi_zero(m, u) && phi <= phi_natural(m, u) + 1e-12, "sandwich bounds");
        previous = phi;
      }
    }
    // Sign of G at the equilibria across the speed range.
    const double u0 = 1.2;
    const double lam_nat = lambda_natural(m, u0), lam0 = lambda_zero(m, u0), top = m.df(u0);
    for (double t : {0.25, 0.5, 0.75}) {
      const double below = lam_nat + t * (lam0 - lam_nat);
      const auto e = equilibria(m, u0, below);
      check(big_g(m, e.u2, u0, below) > 0.0, "G(u2) > 0 below lambda0");
      const double above = lam0 + t * (top - lam0);
      const auto f = equilibria(m, u0, above);
      check(big_g(m, f.u2, u0, above) < 0.0, "G(u2) < 0 above lambda0");
    }
    check(std::abs(big_g(m, equilibria(m, u0, lam0).u2, u0, lam0)) < 1e-10, "G(u2) = 0 at lambda0");
    // Eigenvalue monotonicity by finite differences.
    const double h = 1e-6;
    for (double u : linspace(-1.5, 1.5, 7)) {
      for (double alpha : {0.2, 0.8, 2.0}) {
        for (double offset : {-0.3, 0.2, 1.0}) {
          const double lam = m.df(u) - offset;
          const EigenPair base = eigenvalues(m, u, lam, alpha);
          if (base.is_complex() || std::abs(base.discriminant) < 1e-3) continue;
          const EigenPair dl = eigenvalues(m, u, lam + h, alpha);
          const EigenPair da = eigenvalues(m, u, lam, alpha + h);
          check(dl.lower.real() > base.lower.real(), "lower eigenvalue increasing in lam");
          check(da.lower.real() < base.lower.real(), "lower eigenvalue decreasing in alpha");
          check(dl.upper.real() < base.upper.real(), "upper eigenvalue decreasing in lam");
          if (offset > 0.0) check(da.upper.real() < base.upper.real(), "upper decreasing in alpha");
        }
      }
    }
    // Dispersive limit endpoints.
    for (double u : {0.5, 1.0, -1.3}) {
      const TrajectoryCurve d = dispersive_trajectory(m, u, 32);
      check(d.front().u == u, "dispersive start");
      check(std::abs(d.back().u - phi_zero(m, u)) <= 1e-12 * (1.0 + std::abs(u)), "dispersive end");
    }
  }

  // Chord condition against profile existence on random cubic pairs.
  const auto cubic = FluxModel::cubic();
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> state(-2.0, 2.0);
  int pairs = 0;
  while (pairs < 100) {
    const double um = state(rng), up = state(rng);
    if (std::abs(um - up) < 1e-2 || std::abs(up + 0.5 * um) < 1e-3 * (1.0 + std::abs(um))) continue;
    ++pairs;
    const bool chord = oleinik_strict(cubic, um, up);
    bool built = true;
    try {
      diffusive_profile(cubic, um, up);
    } catch (const PreconditionError&) {
      built = false;
    }
    check(diffusive_orbit_reaches(cubic, um, up) == chord, "orbit reaches iff chord test");
    check(built == chord, "profile iff chord test");
  }
  o.detail << checks << " property checks";
}

void small_alpha(Outcome& o) {
  const Kinetics k(FluxModel::cubic());
  double previous = 1e300, last = 0.0;
  for (double alpha : {0.4, 0.2, 0.1, 0.05}) {
    last = std::abs(k.kinetic_function(1.0, alpha).phi_flat + 1.0);
    o.detail << (previous < 1e300 ? " " : "") << last;
    o.require(last < previous, "monotone at alpha " + std::to_string(alpha));
    previous = last;
  }
  o.require(last <= 0.05, "<= 0.05 at alpha 0.05");
  o.require(std::abs(last - kSqrt2 * 0.05 / 3.0) <= 1e-5, "sqrt2 alpha/3 at alpha 0.05");
  o.require(std::abs(last - 0.0235702) <= 1e-5, "0.0235702 at alpha 0.05");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"critical ratio vs closed form", critical_ratio_grid},
      {"threshold ratio", threshold},
      {"kinetic function grid", kinetic_grid},
      {"trajectory shape", trajectory_shape},
      {"entropy dissipation", entropy},
      {"asymptotic threshold slope", asymptotic_slope},
      {"property suite", property_suite},
      {"small-alpha convergence", small_alpha},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s %zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.str().c_str(), seconds);
  }
  return failures == 0 ? 0 : 1;
}
