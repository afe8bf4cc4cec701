#pragma once

#include <cmath>
#include <vector>

#include "qbat/pauli_sum.hpp"

namespace qbat {

// exp(i theta g) p exp(-i theta g) for a Pauli string g with g^2 = +I.
// Commuting case: p unchanged. Anticommuting:
//   exp(2 i theta g) p = cos(2 theta) p + i sin(2 theta) g p.
inline PauliSum heisenberg_rotate(const PauliString& p, const PauliString& g,
                                  double theta) {
  if (p.n_sites() != g.n_sites())
    throw DimensionError("heisenberg_rotate: n_sites mismatch");
  PauliString g2 = g * g;
  if (!(g2.is_identity() && g2.phase_exp() == 0))
    throw PreconditionError("heisenberg_rotate: generator must square to +I");
  PauliSum out(p.n_sites());
  if (commutes(g, p)) {
    out.add(p);
    return out;
  }
  out.add(p, std::cos(2 * theta));
  out.add(g * p, cplx(0, 1) * std::sin(2 * theta));
  return out;
}

inline PauliSum heisenberg_rotate(const PauliSum& s, const PauliString& g,
                                  double theta) {
  if (s.n_sites() != g.n_sites())
    throw DimensionError("heisenberg_rotate: n_sites mismatch");
  PauliSum out(s.n_sites());
  for (const auto& [k, c] : s.terms()) {
    PauliString p(s.n_sites(), k.first, k.second);
    out.add(heisenberg_rotate(p, g, theta), c);
  }
  out.prune();
  return out;
}

// Heisenberg operator U^dag p U for U = exp(-i t sum_g g) with mutually
// commuting generators: one exact rotation per factor.
inline PauliSum heisenberg_evolve_commuting(
    const PauliString& p, const std::vector<PauliString>& generators,
    double t) {
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].n_sites() != p.n_sites())
      throw DimensionError("heisenberg_evolve_commuting: n_sites mismatch");
    for (std::size_t j = i + 1; j < generators.size(); ++j)
      if (!commutes(generators[i], generators[j]))
        throw PreconditionError(
            "heisenberg_evolve_commuting: generators must pairwise commute");
  }
  PauliSum out(p.n_sites());
  out.add(p);
  for (const auto& g : generators) out = heisenberg_rotate(out, g, t);
  return out;
}

}  // namespace qbat
