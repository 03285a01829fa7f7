#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kamsim {

// log(sum_i exp(args[i])), max-shifted.
inline double log_sum_exp(std::span<const double> args) {
  if (args.empty()) throw std::invalid_argument("log_sum_exp: empty input");
  double m = *std::max_element(args.begin(), args.end());
  if (!std::isfinite(m)) return m;  // all -inf, or a +inf/nan dominates
  double s = 0.0;
  for (double a : args) s += std::exp(a - m);
  return m + std::log(s);
}

// log(1 + e^z) without overflow for large |z|.
inline double log1p_exp(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

// 1 / (1 + e^-z), evaluated on the side that cannot overflow.
inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// Thrown when adaptive quadrature exhausts its depth budget.  Carries the
// best estimate achieved so the caller can report how far off it was.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm,
                            double fb, double whole, double eps, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  // second disjunct stops refinement once delta is float rounding noise
  if (std::abs(delta) <= 15.0 * eps ||
      std::abs(delta) <= 4.0 * std::numeric_limits<double>::epsilon() *
                             (std::abs(left) + std::abs(right)))
    return left + right + delta / 15.0;
  if (depth <= 0)
    throw QuadratureError("adaptive_simpson: depth budget exhausted",
                          left + right + delta / 15.0);
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
// Throws QuadratureError if the recursion depth cap is hit before the
// tolerance is met.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-8,
                        int max_depth = 40) {
  if (!(b >= a)) throw std::invalid_argument("adaptive_simpson: b < a");
  if (a == b) return 0.0;
  double fa = f(a);
  double fb = f(b);
  double m = 0.5 * (a + b);
  double fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Composite trapezoid rule with `nodes` evaluation points (>= 2).  Used as a
// slow independent check of the adaptive integrator.
template <typename F>
double trapezoid(const F& f, double a, double b, std::size_t nodes) {
  if (nodes < 2) throw std::invalid_argument("trapezoid: need at least 2 nodes");
  double h = (b - a) / static_cast<double>(nodes - 1);
  double s = 0.5 * (f(a) + f(b));
  for (std::size_t k = 1; k + 1 < nodes; ++k) s += f(a + h * static_cast<double>(k));
  return s * h;
}

}  // namespace kamsim
