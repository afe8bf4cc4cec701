#pragma once

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "qbat/experiments.hpp"
#include "qbat/heisenberg.hpp"

namespace qbat {

// Named self-checks behind the `verify` experiment. Each check recomputes
// its target quantity through an independent route (dense Kronecker
// matrices, spectral evolution, quadrature) and reports the worst error.
// Checks whose reference value is knowingly inconsistent with this
// simulator report status "expected_discrepancy" instead of pass/fail.

struct CheckResult {
  std::string name;
  std::string status;  // pass | fail | expected_discrepancy
  double measured_error = 0.0;
  std::string detail;
};

namespace verify_detail {

// Independent 2x2-Kronecker route, bypassing PauliString::basis_coeff.
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat pauli_2x2(char letter) {
  Mat m(2, 2);
  const cplx i{0, 1};
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw ValidationError("bad Pauli letter");
  }
  return m;
}

// Site 0 is the least significant qubit, so it sits rightmost in the
// Kronecker chain.
inline Mat dense_from_string(const PauliString& p) {
  int n = p.n_sites();
  Mat out = Mat::Identity(1, 1);
  for (int site = n - 1; site >= 0; --site) {
    bool x = (p.x_mask() >> site) & 1, z = (p.z_mask() >> site) & 1;
    char letter = x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    out = kron(out, pauli_2x2(letter));
  }
  return p.display_phase() * out;
}

inline Mat dense_from_sum(const PauliSum& s) {
  Mat out = Mat::Zero(std::int64_t(1) << s.n_sites(),
                      std::int64_t(1) << s.n_sites());
  // stored coefficients multiply bare X^x Z^z, which dense_from_string
  // reproduces for a phase-free key string
  for (const auto& [key, c] : s.terms())
    out += c * dense_from_string(PauliString(s.n_sites(), key.first, key.second));
  return out;
}

inline CheckResult pass_fail(const std::string& name, double err, double tol,
                             std::string detail = {}) {
  return {name, err <= tol ? "pass" : "fail", err, std::move(detail)};
}

}  // namespace verify_detail

// Product/adjoint/commutation of random strings vs dense matrices.
inline CheckResult check_pauli_dense(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0;
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    auto rand_string = [&] {
      PauliString p(n);
      for (int s = 0; s < n; ++s) {
        int a = static_cast<int>(rng() % 4);
        if (a) p = p * PauliString::single(n, "IXYZ"[a], s);
      }
      return p;
    };
    PauliString a = rand_string(), b = rand_string();
    Mat da = verify_detail::dense_from_string(a);
    Mat db = verify_detail::dense_from_string(b);
    PauliString ab = a * b;
    worst = std::max(worst,
                     (da * db - verify_detail::dense_from_string(ab)).cwiseAbs().maxCoeff());
    worst = std::max(worst,
                     (da.adjoint() - verify_detail::dense_from_string(a.adjoint()))
                         .cwiseAbs()
                         .maxCoeff());
    bool comm = (da * db - db * da).cwiseAbs().maxCoeff() < 1e-12;
    if (comm != commutes(a, b)) worst = std::max(worst, 1.0);
  }
  return verify_detail::pass_fail("pauli_dense", worst, 1e-12,
                                  "40 random pairs, n <= 4");
}

// All generators of one H_(N,K) commute pairwise; terms all carry
// amplitude +1 (the chosen fault-injection target).
inline CheckResult check_generator_algebra(int n_cap, bool inject_fault) {
  double worst = 0;
  std::string detail;
  for (int n = 3; n <= n_cap; ++n) {
    for (int k = 2; k <= k_max(n); k += 2) {
      auto gens = stabilizer_generators(n, k);
      for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
          if (!commutes(gens[i], gens[j])) worst = std::max(worst, 1.0);
      PauliSum h = stabilizer_hamiltonian(n, k);
      if (inject_fault && n == n_cap && k == 2)
        h.add(gens[0], -2.0);  // flips one generator's sign
      for (const auto& [key, c] : h.terms()) {
        worst = std::max(worst, std::abs(c - 1.0));
        if (std::popcount(key.first | key.second) != k + 1)
          worst = std::max(worst, 1.0);
      }
    }
  }
  if (inject_fault) detail = "fault injected";
  return verify_detail::pass_fail("generator_algebra", worst, 1e-14, detail);
}

// Commutator structure across regularities: [H_(N,K), H_(N,K)] = 0 while
// distinct regularities fail to commute.
inline CheckResult check_cross_k_commutators(int n_cap) {
  double worst = 0;
  int n = std::min(n_cap, 8);
  for (int k = 2; k <= k_max(n); k += 2) {
    PauliSum h = stabilizer_hamiltonian(n, k);
    if (!pauli_sum_commutator(h, h).empty()) worst = 1.0;
  }
  if (k_max(n) >= 4) {
    PauliSum c = pauli_sum_commutator(stabilizer_hamiltonian(n, 2),
                                      stabilizer_hamiltonian(n, 4));
    if (c.empty()) worst = 1.0;
  }
  return verify_detail::pass_fail("cross_k_commutators", worst, 0.0,
                                  "N = " + std::to_string(n));
}

// Entanglement-sharing circuits map H_(N,K') onto H_(N,K) exactly, and
// applying a circuit twice is the identity.
inline CheckResult check_clifford_equivalence(int n_cap, std::uint64_t seed) {
  double worst = 0;
  for (int n = 3; n <= n_cap; ++n)
    for (int k_from = 2; k_from <= k_max(n); k_from += 2)
      for (int k_to = k_from + 2; k_to <= k_max(n); k_to += 2) {
        auto circ = cz_equivalence_circuit(n, k_from, k_to);
        PauliSum mapped =
            conjugate_by_clifford(stabilizer_hamiltonian(n, k_from), circ);
        PauliSum diff = mapped - stabilizer_hamiltonian(n, k_to);
        diff.prune();
        if (!diff.empty()) worst = std::max(worst, 1.0);
      }
  std::mt19937_64 rng(seed);
  int n = std::min(n_cap, 8);
  auto circ = cz_equivalence_circuit(n, 2, std::max(4, k_max(n) - 2));
  for (int trial = 0; trial < 20; ++trial) {
    PauliString p(n);
    for (int s = 0; s < n; ++s) {
      int a = static_cast<int>(rng() % 4);
      if (a) p = p * PauliString::single(n, "IXYZ"[a], s);
    }
    PauliString q = conjugate_by_clifford(conjugate_by_clifford(p, circ), circ);
    if (!(q == p)) worst = std::max(worst, 1.0);
  }
  return verify_detail::pass_fail("clifford_equivalence", worst, 0.0);
}

// Heisenberg rotation vs dense conjugation by the exact exponential.
inline CheckResult check_heisenberg_dense(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-2.0, 2.0);
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3 + static_cast<int>(rng() % 2);
    int k = 2;
    auto gens = stabilizer_generators(n, k);
    const PauliString& g = gens[rng() % gens.size()];
    PauliString p(n);
    for (int s = 0; s < n; ++s) {
      int a = static_cast<int>(rng() % 4);
      if (a) p = p * PauliString::single(n, "IXYZ"[a], s);
    }
    double theta = angle(rng);
    PauliSum rotated = heisenberg_rotate(p, g, theta);
    Mat dg = verify_detail::dense_from_string(g);
    Mat dp = verify_detail::dense_from_string(p);
    Mat u = (cplx(0, theta) * dg).exp();
    Mat expected = u * dp * u.adjoint();
    worst = std::max(
        worst,
        (verify_detail::dense_from_sum(rotated) - expected).cwiseAbs().maxCoeff());
  }
  return verify_detail::pass_fail("heisenberg_dense", worst, 1e-12);
}

// Simulated stored work vs the closed-form law in its regime of validity.
inline CheckResult check_work_law(int n_cap) {
  double worst = 0;
  for (Axis axis : {Axis::X, Axis::Y, Axis::Z})
    for (int n = 4; n <= n_cap; ++n)
      for (int k = 2; k <= k_max(n); k += 2) {
        if (axis != Axis::Z && k >= k_max(n)) continue;
        TGrid grid{0, std::numbers::pi, 51};
        ModelSpec spec{n, LocalBattery{axis}, RegularCharger{k}, grid};
        TimeSeries w = work_series(spec);
        for (std::size_t j = 0; j < w.size(); ++j)
          worst = std::max(
              worst, std::abs(w.values[j] -
                              closed_form_work(axis, n, k, w.ts[j])));
      }
  return verify_detail::pass_fail("work_law", worst, 1e-9);
}

// W^X depends on K only through the exponent, so charging with K' batteries
// read through K-regular eyes interchanges (proposition-level identity).
inline CheckResult check_interchange(int n_cap) {
  double worst = 0;
  std::vector<std::array<int, 3>> tuples = {
      {6, 2, 4}, {8, 2, 4}, {8, 2, 6}, {8, 4, 6}};
  TGrid grid{0, std::numbers::pi, 41};
  for (auto [n, ka, kb] : tuples) {
    if (n > n_cap) continue;
    auto ts = grid.sample();
    TimeSeries wa = general_work(n, ka, kb, ts);
    TimeSeries wb = general_work(n, kb, ka, ts);
    for (std::size_t j = 0; j < ts.size(); ++j)
      worst = std::max(worst, std::abs(wa.values[j] - wb.values[j]));
  }
  return verify_detail::pass_fail("interchange", worst, 1e-9);
}

// Quadrature of the simulated orbit vs the Gamma-function closed form of
// the time-averaged work per site.
inline CheckResult check_average_work(int n_cap) {
  double worst = 0;
  for (int k : {2, 4, 6, 8}) {
    int n = std::min(n_cap, std::max(6, k + 2));
    if (k >= k_max(n)) n = k + 3;
    for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
      double period = closed_form_period(axis);
      double sim = average_work_fn(
          [&](double t) { return closed_form_work(axis, n, k, t); }, period, n);
      worst = std::max(worst, std::abs(sim - closed_form_average_work(axis, k)));
    }
  }
  return verify_detail::pass_fail("average_work", worst, 1e-6);
}

// The printed average-work constant 0.625 is reached at K = 4, not K = 2;
// the K = 2 orbit integrates to exactly 1/2. Kept as a frozen discrepancy.
inline CheckResult check_average_work_printed_constant() {
  double sim =
      average_work_fn([&](double t) { return closed_form_work(Axis::X, 5, 2, t); },
                      closed_form_period(Axis::X), 5);
  double err = std::abs(sim - 0.625);
  return {"average_work_printed_constant", "expected_discrepancy", err,
          "K=2 integrates to 0.5; 0.625 is the K=4 value"};
}

// Z battery at t = pi/2: full decorrelation onto the all-up product state,
// and block ergotropy equals block stored work for every block size.
inline CheckResult check_decorrelation(int n_cap) {
  double worst = 0;
  const double t_star = std::numbers::pi / 2;
  for (int n = 3; n <= std::min(n_cap, 8); ++n)
    for (int k = 2; k <= k_max(n); k += 2) {
      ModelSpec spec{n, LocalBattery{Axis::Z}, RegularCharger{k},
                     TGrid{0, t_star, 2}};
      QuantumState psi0 = ground_state(spec);
      QuantumState psit = evolve_stabilizer_product(
          stabilizer_generators(n, k), psi0, t_star);
      worst = std::max(worst, std::abs(std::abs(psit.vector()(0)) - 1.0));
      PauliSum h_b = spec.battery_hamiltonian();
      for (int m = 1; m <= n; ++m) {
        QuantumState rho0 = partial_trace_block(psi0, m);
        QuantumState rhot = partial_trace_block(psit, m);
        PauliSum h_m = local_battery(m, Axis::Z);
        double w_m = stored_work(h_m, rho0, rhot);
        HermitianOperator hm_op = to_dense(h_m);
        double e_m = ergotropy(rhot, hm_op) - ergotropy(rho0, hm_op);
        worst = std::max(worst, std::abs(e_m - w_m));
      }
    }
  return verify_detail::pass_fail("decorrelation", worst, 1e-9);
}

// Anomalous periods at K = K_max: X work at (6,4) halves its period to
// pi/2; at (8,6) it does not.
inline CheckResult check_period_anomaly() {
  auto max_half_shift = [](int n, int k) {
    TGrid grid{0, std::numbers::pi / 4, 41};
    ModelSpec spec{n, LocalBattery{Axis::X}, RegularCharger{k}, grid};
    WorkFunction w(spec);
    double worst = 0;
    for (double t : grid.sample())
      worst = std::max(worst,
                       std::abs(w(t + std::numbers::pi / 4) - w(t)));
    return worst;
  };
  double halved = max_half_shift(6, 4);
  double not_halved = max_half_shift(8, 6);
  bool ok = halved <= 1e-9 && not_halved > 0.1 * 8;
  std::ostringstream d;
  d << "shift(6,4)=" << halved << " shift(8,6)=" << not_halved;
  return {"period_anomaly", ok ? "pass" : "fail", halved, d.str()};
}

// Special orbit W^Y for three sites: 6 sin^2(3t).
inline CheckResult check_special_y32() {
  ModelSpec spec{3, LocalBattery{Axis::Y}, RegularCharger{2},
                 TGrid{0, std::numbers::pi, 61}};
  TimeSeries w = work_series(spec);
  double worst = 0;
  for (std::size_t j = 0; j < w.size(); ++j)
    worst = std::max(worst,
                     std::abs(w.values[j] - special_case_work(
                                                SpecialCase::Y_N3_K2, w.ts[j])));
  return verify_detail::pass_fail("special_y32", worst, 1e-9);
}

// The printed four-site X orbit 4(1 + cos^2 2t) disagrees with the dense
// simulation (it is not even zero at t = 0). Frozen as a discrepancy.
inline CheckResult check_special_x42() {
  ModelSpec spec{4, LocalBattery{Axis::X}, RegularCharger{2},
                 TGrid{0, std::numbers::pi, 61}};
  TimeSeries w = work_series(spec);
  double worst = 0;
  for (std::size_t j = 0; j < w.size(); ++j)
    worst = std::max(worst,
                     std::abs(w.values[j] - special_case_work(
                                                SpecialCase::X_N4_K2, w.ts[j])));
  return {"special_x42_printed_formula", "expected_discrepancy", worst,
          "printed orbit is nonzero at t=0; simulator is authoritative"};
}

// Product-formula engine vs spectral decomposition on random states.
inline CheckResult check_cross_engine(int n_cap, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double worst = 0;
  for (int n = 3; n <= std::min(n_cap, 8); ++n)
    for (int k = 2; k <= k_max(n); k += 2) {
      PauliSum h = stabilizer_hamiltonian(n, k);
      HermitianOperator h_op = to_dense(h);
      auto gens = stabilizer_generators(n, k);
      for (int trial = 0; trial < 5; ++trial) {
        Vec v(std::int64_t(1) << n);
        for (Eigen::Index i = 0; i < v.size(); ++i)
          v(i) = cplx(gauss(rng), gauss(rng));
        v.normalize();
        QuantumState psi = QuantumState::pure(n, v);
        double t = 0.1 + 0.25 * trial;
        QuantumState a = evolve_stabilizer_product(gens, psi, t);
        QuantumState b = evolve_spectral(h_op, psi, t);
        worst = std::max(
            worst, (a.vector() - b.vector()).cwiseAbs().maxCoeff());
      }
    }
  return verify_detail::pass_fail("cross_engine", worst, 1e-10);
}

inline std::vector<CheckResult> run_all_checks(const ExperimentConfig& cfg) {
  int n_cap = std::min(cfg.n_cap, 12);
  auto want = [&](const std::string& name) {
    if (cfg.checks.empty()) return true;
    for (const auto& c : cfg.checks)
      if (c == name) return true;
    return false;
  };
  std::vector<CheckResult> results;
  if (want("pauli_dense")) results.push_back(check_pauli_dense(cfg.seed));
  if (want("generator_algebra"))
    results.push_back(check_generator_algebra(n_cap, cfg.inject_fault));
  if (want("cross_k_commutators"))
    results.push_back(check_cross_k_commutators(n_cap));
  if (want("clifford_equivalence"))
    results.push_back(check_clifford_equivalence(n_cap, cfg.seed));
  if (want("heisenberg_dense"))
    results.push_back(check_heisenberg_dense(cfg.seed));
  if (want("work_law")) results.push_back(check_work_law(std::min(n_cap, 8)));
  if (want("interchange")) results.push_back(check_interchange(n_cap));
  if (want("average_work")) results.push_back(check_average_work(n_cap));
  if (want("average_work_printed_constant"))
    results.push_back(check_average_work_printed_constant());
  if (want("decorrelation")) results.push_back(check_decorrelation(n_cap));
  if (want("period_anomaly")) results.push_back(check_period_anomaly());
  if (want("special_y32")) results.push_back(check_special_y32());
  if (want("special_x42_printed_formula")) results.push_back(check_special_x42());
  if (want("cross_engine"))
    results.push_back(check_cross_engine(n_cap, cfg.seed));
  if (results.empty()) throw ValidationError("no matching checks selected");
  return results;
}

inline ResultTable run_verify(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  auto results = run_all_checks(cfg);
  ResultTable table;
  table.columns = {"check", "status", "measured_error", "detail"};
  for (const auto& r : results)
    table.add_row({r.name, r.status, detail::num(r.measured_error), r.detail});
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail::stamp_metadata(table, "verify", cfg, wall);
  return table;
}

inline bool verify_passed(const ResultTable& table) {
  for (const auto& row : table.rows)
    if (std::get<std::string>(row[1]) == "fail") return false;
  return true;
}

}  // namespace qbat
