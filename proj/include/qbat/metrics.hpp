#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "qbat/dense.hpp"
#include "qbat/model.hpp"
#include "qbat/time_series.hpp"

namespace qbat {

// --- stored work ---------------------------------------------------------------

// W = <H_B>_t - <H_B>_0 (Tr[(rho(t) - rho(0)) H_B]).
inline double stored_work(const PauliSum& h_battery, const QuantumState& state0,
                          const QuantumState& statet) {
  return expectation(h_battery, statet) - expectation(h_battery, state0);
}

namespace detail {

// Evolved states on a t grid, routed by charger type: K-regular chargers
// use the exact product formula (commuting generators, cost N 2^N per t),
// collective chargers need the spectral path (cross-K terms do not commute).
inline std::vector<QuantumState> evolve_grid(const ModelSpec& spec,
                                             const QuantumState& psi0,
                                             const std::vector<double>& ts) {
  if (const auto* rc = std::get_if<RegularCharger>(&spec.charger)) {
    auto gens = stabilizer_generators(spec.n_sites, rc->k);
    std::vector<QuantumState> out;
    out.reserve(ts.size());
    for (double t : ts)
      out.push_back(evolve_stabilizer_product(gens, psi0, t));
    return out;
  }
  HermitianOperator h = to_dense(spec.charger_hamiltonian());
  return evolve_spectral(h, psi0, ts);
}

}  // namespace detail

// Battery ground state evolved under the charger; total stored work on the
// t grid.
inline TimeSeries work_series(const ModelSpec& spec) {
  spec.validate();
  PauliSum h_b = spec.battery_hamiltonian();
  QuantumState psi0 = ground_state(spec);
  std::vector<double> ts = spec.t_grid.sample();
  auto states = detail::evolve_grid(spec, psi0, ts);
  double e0 = expectation(h_b, psi0);
  std::vector<double> w(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i)
    w[i] = expectation(h_b, states[i]) - e0;
  return TimeSeries(std::move(ts), std::move(w), "W");
}

// K'-regular battery charged by a K-regular charger (both stabilizer
// Hamiltonians, ground state built via the Clifford circuit).
inline TimeSeries general_work(int n, int k_batt, int k_chg,
                               const std::vector<double>& ts) {
  validate_nk(n, k_batt);
  validate_nk(n, k_chg);
  if (k_batt == k_chg)
    throw ValidationError("general_work: battery and charger K must differ");
  PauliSum h_b = stabilizer_hamiltonian(n, k_batt);
  QuantumState psi0 = ground_state(BatterySpec{RegularBattery{k_batt}}, n);
  auto gens = stabilizer_generators(n, k_chg);
  double e0 = expectation(h_b, psi0);
  std::vector<double> w(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i)
    w[i] = expectation(h_b, evolve_stabilizer_product(gens, psi0, ts[i])) - e0;
  return TimeSeries(ts, std::move(w), "W_general");
}

// --- ergotropy -----------------------------------------------------------------

// Tr[rho H] minus the passive-state energy: descending eigenvalues of rho
// paired with ascending eigenvalues of H. Pure states short-circuit to
// <H> - E_ground.
inline double ergotropy(const QuantumState& state, const HermitianOperator& h) {
  if (state.n_sites() != h.n_sites())
    throw DimensionError("ergotropy: dimension mismatch");
  double value;
  if (state.is_pure()) {
    value = expectation(h, state) - h.ground_energy();
  } else {
    Eigen::VectorXd r = lapack::eigvalsh(state.matrix());  // ascending
    if (r[0] < -1e-10)
      throw ValidationError("ergotropy: density matrix not PSD");
    auto dec = h.spectral();
    double passive = 0.0;
    const Eigen::Index d = r.size();
    for (Eigen::Index j = 0; j < d; ++j)
      passive += r[d - 1 - j] * dec->eigenvalues[j];
    value = expectation(h, state) - passive;
  }
  if (value < -1e-10)
    throw NumericalError("ergotropy: negative beyond tolerance");
  return std::max(value, 0.0);
}

// --- averages and power ----------------------------------------------------------

// Per-site average work over one period: (1/(N T)) \int_0^T W dt.
// The series must cover [0, period] on a uniform grid.
inline double average_work(const TimeSeries& series, double period,
                           int n_sites) {
  if (series.size() < 3) throw ValidationError("average_work: series too short");
  if (series.ts.front() > 1e-12 || series.ts.back() < period - 1e-12)
    throw ValidationError("average_work: series does not cover [0, period]");
  // restrict to [0, period]
  std::size_t last = series.size() - 1;
  while (last > 0 && series.ts[last] > period + 1e-12) --last;
  if (last % 2 == 1) --last;  // Simpson needs an odd point count
  TimeSeries clipped(
      std::vector<double>(series.ts.begin(), series.ts.begin() + last + 1),
      std::vector<double>(series.values.begin(),
                          series.values.begin() + last + 1));
  if (clipped.ts.back() < period - 1e-9)
    throw ValidationError("average_work: grid does not land on the period");
  return quad::simpson_series(clipped) / (n_sites * period);
}

inline double average_work_fn(const std::function<double(double)>& work,
                              double period, int n_sites,
                              int init_points = 201, double tol = 1e-8) {
  return quad::simpson_adaptive(work, 0.0, period, init_points, tol) /
         (n_sites * period);
}

struct PowerResult {
  double power = 0.0;
  double t_star = 0.0;
};

// max_t W(t)/t over (0, t_max]; dense grid then golden-section refinement.
inline PowerResult max_average_power(const std::function<double(double)>& work,
                                     double t_max = std::numbers::pi,
                                     int grid_points = 10001) {
  auto ratio = [&](double t) { return work(t) / t; };
  auto [t_star, p] =
      optimize::grid_golden_max(ratio, t_max * 1e-6, t_max, grid_points);
  return {p, t_star};
}

// Reusable W(t) evaluator. K-regular chargers evolve by the product
// formula per call; collective chargers go through one cached spectral
// decomposition. The all-real fast path (Y-free Hamiltonian, real ground
// state) halves memory and works in real gemv's:
//   psi(t) = V (c .* e^{-i lambda t}),  <psi|H|psi> = x^T H x + y^T H y
// for psi = x + i y and real symmetric H.
class WorkFunction {
 public:
  explicit WorkFunction(const ModelSpec& spec) : spec_(spec) {
    spec.validate();
    h_b_ = spec.battery_hamiltonian();
    psi0_ = ground_state(spec);
    e0_ = expectation(h_b_, psi0_);
    if (const auto* rc = std::get_if<RegularCharger>(&spec.charger)) {
      generators_ = stabilizer_generators(spec.n_sites, rc->k);
      return;
    }
    HermitianOperator h = to_dense(spec.charger_hamiltonian());
    auto dec = h.spectral();
    lambda_ = dec->eigenvalues;
    const Vec& psi = psi0_.vector();
    real_path_ = dec->eigenvectors.imag().cwiseAbs().maxCoeff() < 1e-14 &&
                 psi.imag().cwiseAbs().maxCoeff() < 1e-14;
    if (real_path_) {
      v_real_ = dec->eigenvectors.real();
      c_real_ = v_real_.transpose() * psi.real();
    } else {
      v_cplx_ = dec->eigenvectors;
      c_cplx_ = v_cplx_.adjoint() * psi;
    }
  }

  double operator()(double t) const {
    if (!generators_.empty()) {
      QuantumState psi = evolve_stabilizer_product(generators_, psi0_, t);
      return expectation(h_b_, psi) - e0_;
    }
    if (real_path_) {
      Eigen::VectorXd u = (c_real_.array() * (lambda_.array() * t).cos()).matrix();
      Eigen::VectorXd w = (-c_real_.array() * (lambda_.array() * t).sin()).matrix();
      Eigen::VectorXd x = v_real_ * u, y = v_real_ * w;
      return quad_form(x) + quad_form(y) - e0_;
    }
    Vec d = c_cplx_;
    for (Eigen::Index j = 0; j < d.size(); ++j)
      d[j] *= std::exp(cplx(0, -lambda_[j] * t));
    Vec psi = v_cplx_ * d;
    cplx val = psi.dot(apply_pauli_sum(h_b_, psi));
    return val.real() - e0_;
  }

 private:
  double quad_form(const Eigen::VectorXd& x) const {
    Vec xc = x.cast<cplx>();
    return xc.dot(apply_pauli_sum(h_b_, xc)).real();
  }

  ModelSpec spec_;
  PauliSum h_b_{1};
  QuantumState psi0_ = QuantumState::basis(1, 0);
  double e0_ = 0.0;
  std::vector<PauliString> generators_;  // non-empty => product-formula path
  Eigen::VectorXd lambda_;
  bool real_path_ = false;
  Eigen::MatrixXd v_real_;
  Eigen::VectorXd c_real_;
  Mat v_cplx_;
  Vec c_cplx_;
};

// --- subsystem fraction of extractable energy -------------------------------------

// R_m = \int_0^T E_m(t) dt / \int_0^T W_m(t) dt for the contiguous block of
// the first m sites; E_m is the block ergotropy against the m-site local
// battery, W_m the block stored energy. nullopt when the denominator
// vanishes.
inline std::optional<double> fraction_extractable(int n, int k, Axis axis,
                                                  int m,
                                                  double period = std::numbers::pi,
                                                  int n_grid = 201) {
  validate_nk(n, k);
  if (m < 1 || m > n) throw ValidationError("fraction_extractable: bad m");
  if (n_grid % 2 == 0) ++n_grid;
  if (n_grid < 3) throw ValidationError("fraction_extractable: bad grid");

  QuantumState psi0 = ground_state(BatterySpec{LocalBattery{axis}}, n);
  auto gens = stabilizer_generators(n, k);
  PauliSum h_m = local_battery(m, axis);
  HermitianOperator h_m_dense = to_dense(h_m);
  QuantumState rho_m0 = partial_trace_block(psi0, m);
  double e_m0 = expectation(h_m, rho_m0);

  std::vector<double> ergo(n_grid), work(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    double t = period * i / (n_grid - 1);
    QuantumState psi = evolve_stabilizer_product(gens, psi0, t);
    QuantumState rho_m = (m == n) ? psi : partial_trace_block(psi, m);
    ergo[i] = ergotropy(rho_m, h_m_dense);
    work[i] = expectation(h_m, rho_m) - e_m0;
  }
  double h = period / (n_grid - 1);
  double num = quad::simpson_uniform(ergo, h);
  double den = quad::simpson_uniform(work, h);
  if (std::abs(den) < 1e-12) return std::nullopt;
  return num / den;
}

// --- scaling fits --------------------------------------------------------------

struct FitResult {
  double beta = 0.0;       // log-log slope
  double prefactor = 0.0;  // exp(intercept)
  double residual = 0.0;   // RMS residual in log space
};

// Least-squares line on (ln x, ln y).
inline FitResult scaling_exponent(const std::vector<double>& xs,
                                  const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 3)
    throw ValidationError("scaling_exponent: need >= 3 matching points");
  const std::size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (xs[i] <= 0 || ys[i] <= 0)
      throw ValidationError("scaling_exponent: inputs must be positive");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-15)
    throw ValidationError("scaling_exponent: degenerate abscissae");
  FitResult fit;
  fit.beta = (n * sxy - sx * sy) / denom;
  double intercept = (sy - fit.beta * sx) / n;
  fit.prefactor = std::exp(intercept);
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = ly[i] - (fit.beta * lx[i] + intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace qbat
