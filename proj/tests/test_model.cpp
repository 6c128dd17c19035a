#include <cmath>

#include "doctest.h"
#include "kinrel/errors.hpp"
#include "kinrel/model.hpp"
#include "test_support.hpp"

using namespace kinrel;
using kinrel::testing::linspace;
using kinrel::testing::poly_integral;
using kinrel::testing::quintic_model;

namespace {

// Quadratic-entropy dissipation for f = u^3 (U = u^2/2, F = 3u^4/4), closed form.
double cubic_dissipation(double um, double up) {
  const double lam = um * um + um * up + up * up;
  return -lam * (up * up - um * um) / 2.0 + 0.75 * (std::pow(up, 4) - std::pow(um, 4));
}

// Bisection on a scanned sign change, independent of the library's solver.
template <class F>
double brute_root(F f, double a, double b, int n = 20000) {
  double x0 = a, f0 = f(a);
  for (int i = 1; i <= n; ++i) {
    double x1 = a + (b - a) * i / n;
    const double f1 = f(x1);
    if (f0 == 0.0) return x0;
    if ((f0 < 0) != (f1 < 0)) {
      for (int k = 0; k < 200; ++k) {
        const double m = 0.5 * (x0 + x1), fm = f(m);
        if ((fm < 0) == (f0 < 0)) { x0 = m; f0 = fm; } else { x1 = m; }
      }
      return 0.5 * (x0 + x1);
    }
    x0 = x1;
    f0 = f1;
  }
  return NAN;
}

}  // namespace

TEST_CASE("model construction validates invariants") {
  CHECK_NOTHROW(FluxModel::cubic());
  CHECK_THROWS_AS(FluxModel::polynomial(Polynomial{0, 0, 0, 1}, Polynomial{-1.0}, Polynomial{1.0},
                                        Polynomial{1.0}),
                  ModelError);
  CHECK_THROWS_AS(FluxModel::polynomial(Polynomial{0, 0, 0, 1}, Polynomial{1.0},
                                        Polynomial{1.0, 0.0, -0.1}, Polynomial{1.0}),
                  ModelError);
  CHECK_THROWS_AS(FluxModel::polynomial(Polynomial{0, 0, 0, 1}, Polynomial{1.0}, Polynomial{1.0},
                                        Polynomial{1.0}, Interval{0.5, 2.0}),
                  ModelError);

  // f' inconsistent with f
  FluxModel::Functions bad{[](double u) { return u * u * u; }, [](double u) { return 3.1 * u * u; },
                           [](double u) { return 6 * u; }, [](double) { return 6.0; },
                           [](double) { return 1.0; }, [](double) { return 1.0; },
                           [](double) { return 1.0; }};
  CHECK_THROWS_AS(FluxModel(bad, Interval{-2, 2}), ModelError);
}

TEST_CASE("flux classes") {
  CHECK(FluxModel::cubic().flux_class() == FluxClass::concave_convex);
  CHECK(quintic_model().flux_class() == FluxClass::concave_convex);
  const auto burgers = FluxModel::polynomial(Polynomial{0, 0, 0.5}, Polynomial{1.0},
                                             Polynomial{1.0}, Polynomial{1.0});
  CHECK(burgers.flux_class() == FluxClass::convex);
  CHECK_THROWS_AS(burgers.require_concave_convex(), ModelError);
  const auto reversed = FluxModel::polynomial(Polynomial{0, 0, 0, -1}, Polynomial{1.0},
                                              Polynomial{1.0}, Polynomial{1.0});
  CHECK(reversed.flux_class() == FluxClass::convex_concave);
}

TEST_CASE("chord_speed") {
  const auto m = FluxModel::cubic();
  CHECK(chord_speed(m, 1.0, -0.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(chord_speed(m, 1.0, 1.0) == 3.0);
  CHECK(chord_speed(m, 1.0, -1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(chord_speed(m, 11.0, 0.0), DomainError);
}

TEST_CASE("g_value and big_g") {
  const auto m = FluxModel::cubic();
  CHECK(g_value(m, 1.0, 1.0) == 0.0);
  CHECK(g_value(m, 2.0, 1.0) == 6.0);
  CHECK(g_value(m, 0.0, 0.37) == 0.0);

  CHECK(big_g(m, 0.3, 0.3, 0.5) == 0.0);
  // closed form: [z^4/4 - lam z^2/2 - (1 - lam) z] from 1 to u
  const double lam = 0.9, u2 = (-1.0 - std::sqrt(0.6)) / 2.0;
  const double exact = poly_integral({-(1.0 - lam), -lam, 0.0, 1.0}, 1.0, u2);
  CHECK(exact > 0.0);
  CHECK(big_g(m, u2, 1.0, lam) == doctest::Approx(exact).epsilon(1e-12));
  CHECK(std::abs(big_g(m, -1.0, 1.0, 1.0)) < 1e-13);
}

TEST_CASE("equilibria") {
  const auto m = FluxModel::cubic();
  // roots of u^2 + u + 1 = 0.9
  const auto e = equilibria(m, 1.0, 0.9);
  CHECK(e.u1 == doctest::Approx((-1.0 + std::sqrt(0.6)) / 2.0).epsilon(1e-12));
  CHECK(e.u2 == doctest::Approx((-1.0 - std::sqrt(0.6)) / 2.0).epsilon(1e-12));
  CHECK_FALSE(e.tangential);
  CHECK(e.u2 < phi_natural(m, 1.0));
  CHECK(phi_natural(m, 1.0) < e.u1);
  CHECK(e.u1 < e.u0);
  CHECK(g_value(m, e.u1, 0.9) == doctest::Approx(g_value(m, 1.0, 0.9)).epsilon(1e-12));
  CHECK(g_value(m, e.u2, 0.9) == doctest::Approx(g_value(m, 1.0, 0.9)).epsilon(1e-12));

  const auto at1 = equilibria(m, 1.0, 1.0);
  CHECK(std::abs(at1.u1) < 1e-13);
  CHECK(at1.u2 == doctest::Approx(-1.0).epsilon(1e-13));

  const auto near = equilibria(m, 1.0, 0.75 + 1e-10);
  CHECK(near.u1 - near.u2 < 3e-5);
  CHECK(near.u1 == doctest::Approx(-0.5).epsilon(2e-5));

  const auto tangent = equilibria(m, 1.0, 0.75);
  CHECK(tangent.tangential);
  CHECK(tangent.u1 == doctest::Approx(-0.5).epsilon(1e-13));

  CHECK_THROWS_AS(equilibria(m, 1.0, 0.7), PreconditionError);
  CHECK_THROWS_AS(equilibria(m, 1.0, 3.0), PreconditionError);
  CHECK_THROWS_AS(equilibria(m, -1.0, 0.9), PreconditionError);
}

TEST_CASE("phi_natural and its inverse") {
  const auto m = FluxModel::cubic();
  CHECK(phi_natural(m, 1.0) == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(phi_natural(m, 0.0) == 0.0);
  CHECK(phi_natural(m, -1.0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(lambda_natural(m, 1.0) == doctest::Approx(0.75).epsilon(1e-13));

  const auto lin = FluxModel::cubic_plus_linear();
  const double brute = brute_root(
      [&](double p) { return lin.df(p) - (lin.f(1.0) - lin.f(p)) / (1.0 - p); }, -3.0, -1e-9);
  CHECK(brute == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(phi_natural(lin, 1.0) == doctest::Approx(brute).epsilon(1e-12));

  CHECK(phi_natural_inverse(m, -0.5) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(phi_natural_inverse(m, 1.0) == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(phi_natural_inverse(m, 0.0) == 0.0);

  const auto q = quintic_model();
  for (double u : linspace(-2.0, 2.0, 17)) {
    if (u == 0.0) continue;
    CHECK(phi_natural(q, phi_natural_inverse(q, u)) == doctest::Approx(u).epsilon(1e-10));
    CHECK(u * phi_natural(q, u) < 0.0);
  }
}

TEST_CASE("entropy dissipation") {
  const auto m = FluxModel::cubic();
  CHECK(std::abs(entropy_dissipation(m, 1.0, -1.0)) < 1e-13);
  CHECK(entropy_dissipation(m, 0.7, 0.7) == 0.0);
  const double up = -1.0 + kinrel::testing::kSqrt2 * 0.6 / 3.0;
  const double oracle = cubic_dissipation(1.0, up);
  CHECK(oracle == doctest::Approx(-0.35802).epsilon(1e-4));
  CHECK(entropy_dissipation(m, 1.0, up) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(entropy_dissipation(m, 1.0, -0.7171573) == doctest::Approx(-0.35802).epsilon(3e-4));

  // the integral and jump forms agree for a non-trivial entropy weight
  const auto q = quintic_model();
  for (double up2 : linspace(-1.5, 0.9, 9)) {
    CHECK(entropy_dissipation_jump(q, 1.0, up2) ==
          doctest::Approx(entropy_dissipation(q, 1.0, up2)).epsilon(1e-9));
  }
}

TEST_CASE("phi_zero and lambda_zero") {
  const auto m = FluxModel::cubic();
  CHECK(phi_zero(m, 1.0) == doctest::Approx(-1.0).epsilon(1e-11));
  CHECK(phi_zero(m, -2.0) == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(std::abs(phi_zero(m, 1e-4)) < 2e-4);
  CHECK(phi_zero(m, 0.0) == 0.0);

  const auto lin = FluxModel::cubic_plus_linear();
  // brute-force zero of the exact polynomial dissipation E(1, w)
  const auto dissipation = [](double w) {
    const double lam = (w * w * w + w - 2.0) / (w - 1.0);
    return -poly_integral({-(2.0 - lam), 1.0 - lam, 0.0, 1.0}, 1.0, w);
  };
  const double brute = brute_root(dissipation, -1.9, -0.51);
  CHECK(brute == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(phi_zero(lin, 1.0) == doctest::Approx(brute).epsilon(1e-10));

  CHECK(lambda_zero(m, 1.0) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(lambda_zero(m, 2.0) == doctest::Approx(4.0).epsilon(1e-11));
  CHECK(lambda_zero(m, 1e-5) == doctest::Approx(m.df(0.0)).epsilon(1e-8));
  CHECK(lambda_zero(lin, 1e-5) == doctest::Approx(1.0).epsilon(1e-8));

  const auto burgers = FluxModel::polynomial(Polynomial{0, 0, 0.5}, Polynomial{1.0},
                                             Polynomial{1.0}, Polynomial{1.0});
  CHECK_THROWS_AS(phi_zero(burgers, 1.0), ModelError);
}

TEST_CASE("zero-dissipation ordering and sign of E") {
  for (const auto& m : {FluxModel::cubic(), quintic_model()}) {
    for (double u : linspace(0.1, 2.0, 8)) {
      const double inv = phi_natural_inverse(m, u);
      const double zero = phi_zero(m, u);
      const double nat = phi_natural(m, u);
      CHECK(inv < zero);
      CHECK(zero < nat);
      CHECK(nat < 0.0);
      for (double w : linspace(zero, u, 12)) {
        if (w == zero || std::abs(w - u) < 1e-9 * u) continue;
        CHECK(entropy_dissipation(m, u, w) < 0.0);
      }
    }
  }
}

TEST_CASE("G sign trichotomy and monotonicity") {
  for (const auto& m : {FluxModel::cubic(), quintic_model()}) {
    const double u0 = 1.2;
    const double lam_nat = lambda_natural(m, u0), lam0 = lambda_zero(m, u0), top = m.df(u0);
    for (double lam : linspace(lam_nat, lam0, 7)) {
      if (lam == lam_nat || lam == lam0) continue;
      const auto e = equilibria(m, u0, lam);
      CHECK(big_g(m, e.u2, u0, lam) > 0.0);
      CHECK(big_g(m, e.u2, u0, lam) < big_g(m, e.u1, u0, lam));
    }
    const auto at0 = equilibria(m, u0, lam0);
    CHECK(std::abs(big_g(m, at0.u2, u0, lam0)) < 1e-10);
    for (double lam : linspace(lam0, top, 7)) {
      if (lam == lam0 || lam == top) continue;
      const auto e = equilibria(m, u0, lam);
      CHECK(big_g(m, e.u2, u0, lam) < 0.0);
      CHECK(big_g(m, e.u1, u0, lam) > 0.0);
    }

    const double lam = 0.5 * (lam_nat + top);
    const auto e = equilibria(m, u0, lam);
    const auto slope = [&](double u) { return big_g_prime(m, u, u0, lam); };
    for (double u : linspace(e.u2 - 1.0, e.u2, 6)) if (u < e.u2) CHECK(slope(u) < 0.0);
    for (double u : linspace(e.u2, e.u1, 8)) if (u > e.u2 && u < e.u1) CHECK(slope(u) > 0.0);
    for (double u : linspace(e.u1, u0, 8)) if (u > e.u1 && u < u0) CHECK(slope(u) < 0.0);
    for (double u : linspace(u0, u0 + 1.0, 6)) if (u > u0) CHECK(slope(u) > 0.0);
  }
}

TEST_CASE("G equals minus E along the chord") {
  const auto q = quintic_model();
  const double u0 = 0.8;
  for (double u : linspace(-1.5, 1.5, 13)) {
    const double lam = chord_speed(q, u0, u);
    CHECK(big_g(q, u, u0, lam) == doctest::Approx(-entropy_dissipation(q, u0, u)).epsilon(1e-9));
    CHECK(big_g(q, u, u0, lam) ==
          doctest::Approx(-entropy_dissipation_jump(q, u0, u)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("entropy pair consistency") {
  const auto q = quintic_model();
  const EntropyPair pair(q);
  for (double u : linspace(-2.0, 2.0, 9)) {
    const double h = 1e-4;
    const double dF = (pair.F(u + h) - pair.F(u - h)) / (2 * h);
    CHECK(dF == doctest::Approx(pair.dU(u) * q.df(u)).epsilon(1e-6).scale(1.0));
    const double d2U = (pair.dU(u + h) - pair.dU(u - h)) / (2 * h);
    CHECK(d2U == doctest::Approx(q.c2(u) / q.c1(u)).epsilon(1e-6));
    CHECK(pair.d2U(u) > 0.0);
  }
}

TEST_CASE("reflection preserves structure") {
  const auto q = quintic_model();
  const auto r = q.reflected();
  CHECK(r.flux_class() == FluxClass::concave_convex);
  for (double u : {0.4, 1.0, 1.7}) {
    CHECK(phi_natural(r, u) == doctest::Approx(-phi_natural(q, -u)).epsilon(1e-12));
    CHECK(phi_zero(r, u) == doctest::Approx(-phi_zero(q, -u)).epsilon(1e-10));
  }
}
