#pragma once

#include <cstdint>
#include <vector>

#include "qbat/pauli_sum.hpp"

namespace qbat {

// Gate set needed for the stabilizer-equivalence circuits: CZ, Hadamard,
// and the quarter z-rotation exp(-i pi Z/4) (X -> Y, Y -> -X, Z -> Z).
struct CliffordGate {
  enum class Kind { CZ, Hadamard, ZRotationQuarter };
  Kind kind;
  int a;
  int b = -1;  // CZ only
};

class CliffordCircuit {
 public:
  CliffordCircuit() = default;

  void cz(int a, int b) {
    if (a == b) throw ValidationError("CZ: equal site indices");
    gates_.push_back({CliffordGate::Kind::CZ, a, b});
  }
  void hadamard(int a) { gates_.push_back({CliffordGate::Kind::Hadamard, a}); }
  void z_rotation_quarter(int a) {
    gates_.push_back({CliffordGate::Kind::ZRotationQuarter, a});
  }

  const std::vector<CliffordGate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }

 private:
  std::vector<CliffordGate> gates_;
};

namespace detail {

inline void check_site(int site, int n_sites) {
  if (site < 0 || site >= n_sites)
    throw ValidationError("clifford conjugation: gate index out of range");
}

// In-place conjugation of the (x, z, phase_exp) mask triple by one gate.
// Mask convention carries Y as i X Z, which shifts the usual tableau signs;
// every rule below is pinned by the dense-matrix property tests.
inline void conjugate_gate(const CliffordGate& g, std::uint64_t& x,
                           std::uint64_t& z, int& e, int n_sites) {
  switch (g.kind) {
    case CliffordGate::Kind::CZ: {
      check_site(g.a, n_sites);
      check_site(g.b, n_sites);
      std::uint64_t ba = 1ull << g.a, bb = 1ull << g.b;
      bool xa = x & ba, xb = x & bb;
      if (xa) z ^= bb;
      if (xb) z ^= ba;
      if (xa && xb) e += 2;
      break;
    }
    case CliffordGate::Kind::Hadamard: {
      check_site(g.a, n_sites);
      std::uint64_t bit = 1ull << g.a;
      bool xa = x & bit, za = z & bit;
      if (xa != za) {
        x ^= bit;
        z ^= bit;
      } else if (xa && za) {
        e += 2;  // Y -> -Y
      }
      break;
    }
    case CliffordGate::Kind::ZRotationQuarter: {
      check_site(g.a, n_sites);
      std::uint64_t bit = 1ull << g.a;
      if (x & bit) {
        z ^= bit;
        e += 1;  // X -> Y, Y -> -X
      }
      break;
    }
  }
}

}  // namespace detail

// Exact conjugation c P c^dag, integer mask/phase arithmetic only.
inline PauliString conjugate_by_clifford(const PauliString& p,
                                         const CliffordCircuit& c) {
  std::uint64_t x = p.x_mask(), z = p.z_mask();
  int e = p.phase_exp();
  for (const auto& g : c.gates())
    detail::conjugate_gate(g, x, z, e, p.n_sites());
  return PauliString(p.n_sites(), x, z, e);
}

inline PauliSum conjugate_by_clifford(const PauliSum& s,
                                      const CliffordCircuit& c) {
  PauliSum out(s.n_sites());
  for (const auto& [k, coeff] : s.terms()) {
    PauliString p(s.n_sites(), k.first, k.second);
    out.add(conjugate_by_clifford(p, c), coeff);
  }
  return out;
}

}  // namespace qbat
