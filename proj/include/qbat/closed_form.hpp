#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "qbat/graph.hpp"
#include "qbat/model.hpp"
#include "qbat/time_series.hpp"

namespace qbat {

// Closed-form reference results for a local battery charged by a
// K-regular charger: W^A(t) = N (1 - cos^{K + r^A} 2t) with r^X = 0,
// r^Y = 1, r^Z = 1 - K. Used as the independent verification surface
// for the simulation engines.

inline int r_offset(Axis axis, int k) {
  switch (axis) {
    case Axis::X: return 0;
    case Axis::Y: return 1;
    default: return 1 - k;
  }
}

// For X and Y batteries the law breaks down at K = K_max (the F^A terms
// acquire a nonzero ground-state expectation); Z holds for every K.
inline void check_closed_form_applicable(Axis axis, int n, int k) {
  validate_nk(n, k);
  if (k < 2) throw ValidationError("closed form needs K >= 2");
  if (axis != Axis::Z && k == k_max(n))
    throw ValidationError("closed-form work not applicable at K = K_max");
}

inline double closed_form_work(Axis axis, int n, int k, double t) {
  check_closed_form_applicable(axis, n, k);
  return n * (1.0 - std::pow(std::cos(2 * t), k + r_offset(axis, k)));
}

// Period of W^A in t: pi/2 for X, pi for Y and Z.
inline double closed_form_period(Axis axis) {
  return axis == Axis::X ? std::numbers::pi / 2 : std::numbers::pi;
}

// Per-site average over one period: 1 for Y and Z; for X the mean of
// cos^K over a period drops out as a Gamma ratio,
//   1 - Gamma(K/2 + 1/2) / (sqrt(pi) Gamma(K/2 + 1)),
// evaluated in log space so large K stays finite.
inline double closed_form_average_work(Axis axis, int k) {
  if (axis != Axis::X) return 1.0;
  if (k < 2 || k % 2 != 0)
    throw ValidationError("closed_form_average_work: K must be even >= 2");
  double log_ratio = std::lgamma(k / 2.0 + 0.5) - std::lgamma(k / 2.0 + 1.0) -
                     0.5 * std::log(std::numbers::pi);
  return 1.0 - std::exp(log_ratio);
}

// The two explicit small-system formulas printed for the K = K_max
// regime. Y_N3_K2 agrees with the dense engine; X_N4_K2 does not (it is
// nonzero at t = 0, so it cannot be a stored-work curve) and is kept
// only so the discrepancy can be reported.
enum class SpecialCase { Y_N3_K2, X_N4_K2 };

inline bool special_case_trusted(SpecialCase c) {
  return c == SpecialCase::Y_N3_K2;
}

inline SpecialCase special_case_from_string(const std::string& s) {
  if (s == "Y_N3_K2") return SpecialCase::Y_N3_K2;
  if (s == "X_N4_K2") return SpecialCase::X_N4_K2;
  throw ValidationError("unknown special case id: " + s);
}

inline double special_case_work(SpecialCase c, double t) {
  switch (c) {
    case SpecialCase::Y_N3_K2: {
      double s = std::sin(3 * t);
      return 6.0 * s * s;
    }
    default: {
      double cc = std::cos(2 * t);
      return 4.0 * (1.0 + cc * cc);
    }
  }
}

// Maximum average power max_t W(t)/t from the closed-form work curve.
inline double closed_form_power(Axis axis, int n, int k,
                                double t_max = std::numbers::pi,
                                int grid_points = 10001) {
  check_closed_form_applicable(axis, n, k);
  auto ratio = [&](double t) { return closed_form_work(axis, n, k, t) / t; };
  double lo = t_max * 1e-6;
  return optimize::grid_golden_max(ratio, lo, t_max, grid_points).second;
}

}  // namespace qbat
