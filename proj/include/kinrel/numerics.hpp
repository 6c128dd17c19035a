#ifndef KINREL_NUMERICS_HPP
#define KINREL_NUMERICS_HPP

// Scalar numerical kernels shared by every module: bracketed root finding,
// sign-change scans and adaptive quadrature.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <sstream>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "kinrel/errors.hpp"

namespace kinrel::numerics {

inline constexpr int kScanPoints = 256;
inline constexpr double kQuadratureTolerance = 1e-10;
inline constexpr unsigned kQuadratureMaxDepth = 40;

/// Globally adaptive Gauss-Kronrod (7/15) integral of `f` over [a, b]: the
/// sub-interval with the largest error estimate is bisected until the summed
/// estimate is below tol * max(1, |I|).  Throws QuadratureError otherwise.
template <class F>
double integrate(F&& f, double a, double b, double tol = kQuadratureTolerance) {
  if (a == b) return 0.0;
  struct Piece {
    double lo, hi, value, error;
    unsigned depth;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  const auto rule = [&f](double lo, double hi, unsigned depth) {
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
    using gauss = boost::math::quadrature::gauss<double, 7>;
    const auto& x = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    const auto& wg = gauss::weights();
    const double mean = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    const double f0 = f(mean);
    double k = f0 * wk[0];
    double g = f0 * wg[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
      const double pair = f(mean + half * x[i]) + f(mean - half * x[i]);
      k += pair * wk[i];
      if (i % 2 == 0) g += pair * wg[i / 2];
    }
    return Piece{lo, hi, half * k, std::abs(half * (k - g)), depth};
  };
  std::priority_queue<Piece> heap;
  heap.push(rule(a, b, 0));
  double value = heap.top().value, error = heap.top().error;
  constexpr int kMaxPieces = 1 << 14;
  for (int n = 1; n < kMaxPieces; ++n) {
    if (!std::isfinite(value)) break;
    if (error <= tol * std::max(1.0, std::abs(value))) return value;
    const Piece worst = heap.top();
    if (worst.depth >= kQuadratureMaxDepth) break;
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Piece left = rule(worst.lo, mid, worst.depth + 1);
    const Piece right = rule(mid, worst.hi, worst.depth + 1);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed drift from the running updates before the final verdict.
  value = 0.0;
  error = 0.0;
  for (; !heap.empty(); heap.pop()) {
    value += heap.top().value;
    error += heap.top().error;
  }
  if (std::isfinite(value) && error <= tol * std::max(1.0, std::abs(value))) return value;
  std::ostringstream msg;
  msg.precision(17);
  msg << "quadrature on [" << a << ", " << b << "] did not converge (estimate " << value
      << ", error " << error << ")";
  throw QuadratureError(msg.str());
}

/// Locates a root of `f` inside [lo, hi]; f(lo) and f(hi) must not share a sign.
/// Terminates once the bracket is narrower than `abs_tol`.
template <class F>
double solve_bracketed(F&& f, double lo, double hi, double abs_tol) {
  if (lo > hi) std::swap(lo, hi);
  const double flo = f(lo);
  if (flo == 0.0) return lo;
  const double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    std::ostringstream msg;
    msg << "no sign change on [" << lo << ", " << hi << "] (" << flo << ", " << fhi << ")";
    throw RootNotBracketed(msg.str());
  }
  std::uintmax_t max_iter = 300;
  const auto done = [abs_tol](double a, double b) { return std::abs(b - a) <= abs_tol; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, done, max_iter);
  return 0.5 * (a + b);
}

/// Sub-intervals of [lo, hi] on which `f` changes sign, from a uniform scan.
template <class F>
std::vector<std::pair<double, double>> sign_changes(F&& f, double lo, double hi,
                                                   int points = kScanPoints) {
  std::vector<std::pair<double, double>> out;
  double x_prev = lo;
  double f_prev = f(lo);
  for (int i = 1; i <= points; ++i) {
    const double x = (i == points) ? hi : lo + (hi - lo) * i / points;
    const double fx = f(x);
    if (f_prev == 0.0) {
      out.emplace_back(x_prev, x_prev);
    } else if (fx != 0.0 && std::signbit(fx) != std::signbit(f_prev)) {
      out.emplace_back(x_prev, x);
    }
    x_prev = x;
    f_prev = fx;
  }
  if (f_prev == 0.0) out.emplace_back(x_prev, x_prev);
  return out;
}

/// Scans [lo, hi] for the first sign change (starting from `lo`) and polishes it.
template <class F>
double find_first_root(F&& f, double lo, double hi, double abs_tol,
                       int points = kScanPoints) {
  const auto brackets = sign_changes(f, lo, hi, points);
  if (brackets.empty()) {
    std::ostringstream msg;
    msg << "no root located on [" << lo << ", " << hi << "] by a " << points << "-point scan";
    throw RootNotBracketed(msg.str());
  }
  const auto [a, b] = brackets.front();
  if (a == b) return a;
  return solve_bracketed(f, a, b, abs_tol);
}

/// Romberg-style extrapolation of a sequence computed at steps h, h/2, h/4, ...
/// assuming an expansion in integer powers of h.  Returns the deepest entry.
inline double richardson(const std::vector<double>& values, int levels) {
  std::vector<double> row = values;
  for (int level = 1; level <= levels && row.size() > 1; ++level) {
    const double factor = std::ldexp(1.0, level);
    std::vector<double> next(row.size() - 1);
    for (std::size_t i = 0; i + 1 < row.size(); ++i) {
      next[i] = (factor * row[i + 1] - row[i]) / (factor - 1.0);
    }
    row = std::move(next);
  }
  return row.back();
}

}  // namespace kinrel::numerics

#endif  // KINREL_NUMERICS_HPP
