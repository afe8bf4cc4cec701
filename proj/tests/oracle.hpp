#pragma once

// Independent dense-matrix reference implementations used only by the
// tests. Everything here is built from 2x2 matrices, Kronecker products,
// and Eigen's matrix exponential -- no shared code path with the library's
// mask/phase arithmetic or its product-formula engine.

#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qbat/pauli_sum.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using qbat::cplx;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat sigma(char letter) {
  Mat m(2, 2);
  const cplx i{0, 1};
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad Pauli letter");
  }
  return m;
}

// Letters per site, site 0 = least significant bit = rightmost Kronecker
// factor. letters[s] is the operator on site s.
inline Mat dense_letters(const std::string& letters) {
  Mat out = Mat::Identity(1, 1);
  for (auto it = letters.rbegin(); it != letters.rend(); ++it)
    out = kron(out, sigma(*it));
  return out;
}

inline Mat dense_string(const qbat::PauliString& p) {
  std::string letters;
  for (int s = 0; s < p.n_sites(); ++s) {
    bool x = (p.x_mask() >> s) & 1, z = (p.z_mask() >> s) & 1;
    letters += x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }
  return p.display_phase() * dense_letters(letters);
}

inline Mat dense_sum(const qbat::PauliSum& s) {
  const auto dim = Eigen::Index(1) << s.n_sites();
  Mat out = Mat::Zero(dim, dim);
  for (const auto& [key, c] : s.terms()) {
    qbat::PauliString p(s.n_sites(), key.first, key.second);
    out += c * dense_string(p);  // stored c multiplies bare X^x Z^z = dense_string of a phase-free key
  }
  return out;
}

inline Mat expm(const Mat& a) { return a.exp(); }

inline qbat::PauliString random_string(int n, std::mt19937_64& rng) {
  qbat::PauliString p(n);
  for (int s = 0; s < n; ++s) {
    int a = static_cast<int>(rng() % 4);
    if (a) p = p * qbat::PauliString::single(n, "IXYZ"[a], s);
  }
  return p;
}

inline Vec random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Vec v(Eigen::Index(1) << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(gauss(rng), gauss(rng));
  v.normalize();
  return v;
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
