#pragma once

#include <set>
#include <utility>
#include <vector>

#include "qbat/errors.hpp"

namespace qbat {

// Largest admissible even regularity: N-2 for even N, N-1 for odd N.
inline int k_max(int n_nodes) {
  return (n_nodes % 2 == 0) ? n_nodes - 2 : n_nodes - 1;
}

inline void validate_nk(int n_nodes, int k) {
  if (n_nodes <= 2) throw ValidationError("N must exceed 2");
  if (k < 0 || k % 2 != 0) throw ValidationError("K must be even and >= 0");
  if (k > k_max(n_nodes)) throw ValidationError("K exceeds K_max");
}

// Circulant graph on N nodes: node i linked to i +- j (mod N), j = 1..K/2.
struct CirculantGraph {
  int n_nodes;
  int regularity;
  std::set<std::pair<int, int>> edges;  // normalized (lo, hi) pairs

  std::vector<int> neighbors(int i) const {
    std::vector<int> out;
    for (int j = 1; j <= regularity / 2; ++j) {
      out.push_back(((i - j) % n_nodes + n_nodes) % n_nodes);
      out.push_back((i + j) % n_nodes);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

inline CirculantGraph build_graph(int n_nodes, int k) {
  validate_nk(n_nodes, k);
  CirculantGraph g{n_nodes, k, {}};
  for (int i = 0; i < n_nodes; ++i)
    for (int j = 1; j <= k / 2; ++j) {
      int other = (i + j) % n_nodes;
      g.edges.insert({std::min(i, other), std::max(i, other)});
    }
  return g;
}

}  // namespace qbat
