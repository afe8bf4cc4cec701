#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qbat/clifford.hpp"
#include "qbat/graph.hpp"
#include "qbat/pauli_sum.hpp"
#include "qbat/state.hpp"

namespace qbat {

// --- stabilizer Hamiltonians -----------------------------------------------

// Graph generator of node i: X_i dressed with Z on every neighbor.
inline PauliString stabilizer_generator(int n, int k, int i) {
  validate_nk(n, k);
  if (i < 0 || i >= n) throw ValidationError("stabilizer_generator: bad site");
  std::uint64_t x = 1ull << i, z = 0;
  for (int j = 1; j <= k / 2; ++j) {
    z |= 1ull << ((i + j) % n);
    z |= 1ull << (((i - j) % n + n) % n);
  }
  return PauliString(n, x, z);
}

inline std::vector<PauliString> stabilizer_generators(int n, int k) {
  std::vector<PauliString> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(stabilizer_generator(n, k, i));
  return out;
}

inline PauliSum stabilizer_hamiltonian(int n, int k) {
  PauliSum h(n);
  for (int i = 0; i < n; ++i) h.add(stabilizer_generator(n, k, i));
  return h;
}

enum class Axis { X, Y, Z };

inline char axis_letter(Axis a) {
  return a == Axis::X ? 'X' : (a == Axis::Y ? 'Y' : 'Z');
}

inline Axis axis_from_string(const std::string& s) {
  if (s == "X" || s == "x") return Axis::X;
  if (s == "Y" || s == "y") return Axis::Y;
  if (s == "Z" || s == "z") return Axis::Z;
  throw ValidationError("bad axis: " + s);
}

// H_B^A = sum_i A_i.
inline PauliSum local_battery(int n, Axis axis) {
  if (n < 1) throw ValidationError("local_battery: N must be >= 1");
  PauliSum h(n);
  for (int i = 0; i < n; ++i)
    h.add(PauliString::single(n, axis_letter(axis), i));
  return h;
}

// CZ circuit mapping H_(N,K_from) onto H_(N,K_to), K_from < K_to:
// gates CZ(i, i + j/2) over j = K_from+2, ..., K_to and all i.
inline CliffordCircuit cz_equivalence_circuit(int n, int k_from, int k_to) {
  validate_nk(n, k_from);
  validate_nk(n, k_to);
  if (k_from >= k_to)
    throw ValidationError("cz_equivalence_circuit: need K_from < K_to");
  CliffordCircuit c;
  for (int j = k_from + 2; j <= k_to; j += 2)
    for (int i = 0; i < n; ++i) c.cz(i, (i + j / 2) % n);
  return c;
}

// --- collective charger ------------------------------------------------------

struct WeightVector {
  std::vector<int> ks;          // K = 2, 4, ..., K_max
  std::vector<double> weights;  // J_K
  double alpha = 0.0;
};

// J_K = (K/2)^-alpha, normalized to sum 1 unless `normalized` is false
// (the unit-weight convention H_N^0 = sum_K H_(N,K)).
inline WeightVector collective_weights(int n, double alpha,
                                       bool normalized = true) {
  if (n <= 2) throw ValidationError("collective charger: N must exceed 2");
  if (alpha < 0) throw ValidationError("collective charger: alpha must be >= 0");
  WeightVector w;
  w.alpha = alpha;
  double sum = 0.0;
  for (int k = 2; k <= k_max(n); k += 2) {
    w.ks.push_back(k);
    w.weights.push_back(std::pow(k / 2.0, -alpha));
    sum += w.weights.back();
  }
  if (normalized)
    for (double& jk : w.weights) jk /= sum;
  return w;
}

inline std::pair<PauliSum, WeightVector> collective_charger(
    int n, double alpha, bool normalized = true) {
  WeightVector w = collective_weights(n, alpha, normalized);
  PauliSum h(n);
  for (std::size_t idx = 0; idx < w.ks.size(); ++idx)
    h.add(stabilizer_hamiltonian(n, w.ks[idx]), w.weights[idx]);
  return {std::move(h), std::move(w)};
}

// --- model specification -----------------------------------------------------

struct LocalBattery {
  Axis axis;
};
struct RegularBattery {
  int k;
};
using BatterySpec = std::variant<LocalBattery, RegularBattery>;

struct RegularCharger {
  int k;
};
struct CollectiveCharger {
  double alpha;
  bool normalized = true;
};
using ChargerSpec = std::variant<RegularCharger, CollectiveCharger>;

struct TGrid {
  double t_min = 0.0;
  double t_max = std::numbers::pi;
  int n_points = 101;

  std::vector<double> sample() const {
    if (n_points < 2) throw ValidationError("t grid needs >= 2 points");
    std::vector<double> ts(n_points);
    for (int i = 0; i < n_points; ++i)
      ts[i] = t_min + (t_max - t_min) * i / (n_points - 1);
    return ts;
  }
};

struct ModelSpec {
  int n_sites = 0;
  BatterySpec battery{LocalBattery{Axis::Z}};
  ChargerSpec charger{RegularCharger{2}};
  TGrid t_grid;

  void validate() const {
    if (n_sites <= 2) throw ValidationError("ModelSpec: n_sites must exceed 2");
    if (t_grid.n_points < 2)
      throw ValidationError("ModelSpec: t_points must be >= 2");
    if (const auto* rb = std::get_if<RegularBattery>(&battery))
      validate_nk(n_sites, rb->k);
    if (const auto* rc = std::get_if<RegularCharger>(&charger)) {
      validate_nk(n_sites, rc->k);
      if (const auto* rb = std::get_if<RegularBattery>(&battery))
        if (rb->k == rc->k)
          throw ValidationError(
              "ModelSpec: battery and charger K must differ");
    }
  }

  PauliSum battery_hamiltonian() const {
    if (const auto* lb = std::get_if<LocalBattery>(&battery))
      return local_battery(n_sites, lb->axis);
    return stabilizer_hamiltonian(n_sites, std::get<RegularBattery>(battery).k);
  }

  PauliSum charger_hamiltonian() const {
    if (const auto* rc = std::get_if<RegularCharger>(&charger))
      return stabilizer_hamiltonian(n_sites, rc->k);
    const auto& cc = std::get<CollectiveCharger>(charger);
    return collective_charger(n_sites, cc.alpha, cc.normalized).first;
  }
};

// --- ground states -----------------------------------------------------------

namespace detail {

// Product state with per-site amplitudes (a0 for bit 0 / spin up,
// a1 for bit 1 / spin down).
inline Vec product_state(int n, cplx a0, cplx a1) {
  Eigen::Index dim = 1ll << n;
  Vec v(dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    cplx amp = 1.0;
    for (int j = 0; j < n; ++j) amp *= ((b >> j) & 1) ? a1 : a0;
    v[b] = amp;
  }
  return v;
}

}  // namespace detail

// Ground state of the battery Hamiltonian, energy -N in every case.
// LocalZ: all spins down. LocalX/LocalY: per-site -1 eigenstates of X/Y.
// Regular(K): the CZ-equivalence circuit applied to the LocalX ground
// state (exact construction, no diagonalization).
inline QuantumState ground_state(const BatterySpec& battery, int n) {
  const double r = 1.0 / std::sqrt(2.0);
  if (const auto* lb = std::get_if<LocalBattery>(&battery)) {
    switch (lb->axis) {
      case Axis::Z:
        return QuantumState::basis(n, (1ull << n) - 1);
      case Axis::X:
        return QuantumState::pure(n, detail::product_state(n, r, -r));
      case Axis::Y:
        return QuantumState::pure(n, detail::product_state(n, r, cplx(0, -r)));
    }
  }
  int k = std::get<RegularBattery>(battery).k;
  validate_nk(n, k);
  Vec v = detail::product_state(n, r, -r);  // H_(N,0) ground
  if (k > 0) {
    CliffordCircuit c = cz_equivalence_circuit(n, 0, k);
    for (const auto& g : c.gates()) {
      // CZ is diagonal: flip the sign where both controls are down.
      std::uint64_t mask = (1ull << g.a) | (1ull << g.b);
      for (Eigen::Index b = 0; b < v.size(); ++b)
        if ((static_cast<std::uint64_t>(b) & mask) == mask) v[b] = -v[b];
    }
  }
  return QuantumState::pure(n, std::move(v));
}

inline QuantumState ground_state(const ModelSpec& spec) {
  return ground_state(spec.battery, spec.n_sites);
}

}  // namespace qbat
