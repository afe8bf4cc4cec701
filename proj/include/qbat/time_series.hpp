#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qbat/errors.hpp"

namespace qbat {

// Sampled (t, value) record; dimensionless radian time.
struct TimeSeries {
  std::vector<double> ts;
  std::vector<double> values;
  std::string label;

  TimeSeries() = default;
  TimeSeries(std::vector<double> t, std::vector<double> v, std::string lbl = "")
      : ts(std::move(t)), values(std::move(v)), label(std::move(lbl)) {
    if (ts.size() != values.size())
      throw ValidationError("TimeSeries: length mismatch");
    for (std::size_t i = 1; i < ts.size(); ++i)
      if (ts[i] <= ts[i - 1])
        throw ValidationError("TimeSeries: ts must be strictly increasing");
  }

  std::size_t size() const { return ts.size(); }

  double max_value() const {
    if (values.empty()) throw ValidationError("TimeSeries: empty");
    double m = values[0];
    for (double v : values) m = std::max(m, v);
    return m;
  }
};

namespace quad {

// Composite Simpson on a uniform grid with an odd number of points.
inline double simpson_uniform(const std::vector<double>& values, double h) {
  const std::size_t n = values.size();
  if (n < 3 || n % 2 == 0)
    throw ValidationError("simpson: need an odd point count >= 3");
  double acc = values.front() + values.back();
  for (std::size_t i = 1; i + 1 < n; ++i)
    acc += values[i] * ((i % 2) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Simpson over [a, b], doubling the grid until successive estimates agree.
inline double simpson_adaptive(const std::function<double(double)>& f,
                               double a, double b, int init_points = 201,
                               double tol = 1e-8, int max_doublings = 6) {
  if (b <= a) throw ValidationError("simpson: empty interval");
  int n = init_points;
  if (n % 2 == 0) ++n;
  auto eval = [&](int pts) {
    std::vector<double> vals(pts);
    double h = (b - a) / (pts - 1);
    for (int i = 0; i < pts; ++i) vals[i] = f(a + i * h);
    return simpson_uniform(vals, h);
  };
  double prev = eval(n);
  for (int d = 0; d < max_doublings; ++d) {
    n = 2 * (n - 1) + 1;
    double cur = eval(n);
    if (std::abs(cur - prev) < tol) return cur;
    prev = cur;
  }
  return prev;
}

// Integral of a sampled series over its full uniform grid.
inline double simpson_series(const TimeSeries& s) {
  if (s.size() < 3) throw ValidationError("simpson: series too short");
  double h = s.ts[1] - s.ts[0];
  for (std::size_t i = 1; i < s.ts.size(); ++i)
    if (std::abs((s.ts[i] - s.ts[i - 1]) - h) > 1e-10 * std::max(1.0, h))
      throw ValidationError("simpson: series grid not uniform");
  return simpson_uniform(s.values, h);
}

}  // namespace quad

namespace optimize {

// Maximize f on [lo, hi]: dense grid scan, then golden-section refinement
// around the best cell down to x_tol.
inline std::pair<double, double> grid_golden_max(
    const std::function<double(double)>& f, double lo, double hi,
    int grid_points = 10001, double x_tol = 1e-10) {
  if (hi <= lo || grid_points < 3)
    throw ValidationError("grid_golden_max: bad search window");
  double best_x = lo, best_v = f(lo);
  double h = (hi - lo) / (grid_points - 1);
  for (int i = 1; i < grid_points; ++i) {
    double x = lo + i * h, v = f(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  double a = std::max(lo, best_x - h), b = std::min(hi, best_x + h);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > x_tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  double x = 0.5 * (a + b), v = f(x);
  if (best_v > v) return {best_x, best_v};
  return {x, v};
}

}  // namespace optimize

}  // namespace qbat
