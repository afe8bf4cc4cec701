#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "qbat/errors.hpp"

namespace qbat {

using cplx = std::complex<double>;

// Maximum number of qubit sites representable in one mask word.
inline constexpr int kMaxSites = 63;

namespace detail {
inline int parity64(std::uint64_t v) { return std::popcount(v) & 1; }

inline cplx i_pow(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}
}  // namespace detail

// A phase-tracked Pauli string: i^phase_exp * X^{x_mask} Z^{z_mask},
// site j occupying bit j of both masks. Y_j is stored as x=z=1 with a
// folded-in factor of i (Y = i X Z), so the phase exponent stays exact.
class PauliString {
 public:
  explicit PauliString(int n_sites)
      : n_sites_(n_sites), x_mask_(0), z_mask_(0), phase_exp_(0) {
    if (n_sites < 1 || n_sites > kMaxSites)
      throw ValidationError("PauliString: n_sites out of range");
  }

  PauliString(int n_sites, std::uint64_t x_mask, std::uint64_t z_mask,
              int phase_exp = 0)
      : n_sites_(n_sites),
        x_mask_(x_mask),
        z_mask_(z_mask),
        phase_exp_(((phase_exp % 4) + 4) % 4) {
    if (n_sites < 1 || n_sites > kMaxSites)
      throw ValidationError("PauliString: n_sites out of range");
    std::uint64_t allowed = (n_sites == 63) ? ~0ull : ((1ull << n_sites) - 1);
    if ((x_mask & ~allowed) || (z_mask & ~allowed))
      throw ValidationError("PauliString: mask bits beyond n_sites");
  }

  static PauliString identity(int n_sites) { return PauliString(n_sites); }

  // Single-site operator, axis in {'X','Y','Z'}.
  static PauliString single(int n_sites, char axis, int site) {
    if (site < 0 || site >= n_sites)
      throw ValidationError("PauliString::single: site out of range");
    std::uint64_t bit = 1ull << site;
    switch (axis) {
      case 'X': return PauliString(n_sites, bit, 0);
      case 'Z': return PauliString(n_sites, 0, bit);
      case 'Y': return PauliString(n_sites, bit, bit, 1);  // Y = i X Z
      default: throw ValidationError("PauliString::single: bad axis");
    }
  }

  int n_sites() const { return n_sites_; }
  std::uint64_t x_mask() const { return x_mask_; }
  std::uint64_t z_mask() const { return z_mask_; }
  int phase_exp() const { return phase_exp_; }
  cplx phase() const { return detail::i_pow(phase_exp_); }

  bool is_identity() const { return x_mask_ == 0 && z_mask_ == 0; }

  // Letter at a site, in the I/X/Y/Z display convention.
  char site_letter(int site) const {
    bool x = (x_mask_ >> site) & 1, z = (z_mask_ >> site) & 1;
    if (x && z) return 'Y';
    if (x) return 'X';
    if (z) return 'Z';
    return 'I';
  }

  // Number of sites carrying Y (x and z bits both set).
  int y_count() const { return std::popcount(x_mask_ & z_mask_); }

  // Display phase relative to the letter form (Y printed as Y, not iXZ):
  // operator = display_phase * prod of letters.
  cplx display_phase() const { return detail::i_pow(phase_exp_ - y_count()); }

  friend bool operator==(const PauliString&, const PauliString&) = default;

  PauliString with_phase_exp(int e) const {
    return PauliString(n_sites_, x_mask_, z_mask_, e);
  }

  // Group product a*b with exact phase tracking.
  friend PauliString operator*(const PauliString& a, const PauliString& b) {
    if (a.n_sites_ != b.n_sites_)
      throw DimensionError("pauli_mul: n_sites mismatch");
    // Z^{za} past X^{xb} costs (-1)^{|za & xb|}.
    int e = a.phase_exp_ + b.phase_exp_ + 2 * detail::parity64(a.z_mask_ & b.x_mask_);
    return PauliString(a.n_sites_, a.x_mask_ ^ b.x_mask_,
                       a.z_mask_ ^ b.z_mask_, e);
  }

  // True iff a b = b a (symplectic overlap parity).
  friend bool commutes(const PauliString& a, const PauliString& b) {
    if (a.n_sites_ != b.n_sites_)
      throw DimensionError("commutes: n_sites mismatch");
    return detail::parity64(a.x_mask_ & b.z_mask_) ==
           detail::parity64(a.z_mask_ & b.x_mask_);
  }

  // Hermitian adjoint: (i^e X^x Z^z)^dag = i^{-e} (-1)^{|x&z|} X^x Z^z.
  PauliString adjoint() const {
    return with_phase_exp(-phase_exp_ + 2 * y_count());
  }

  bool is_hermitian() const { return adjoint() == *this; }

  // Action on a computational basis index: P|b> = coeff |b ^ x_mask>.
  // Bit convention: bit j = 1 is the Z_j = -1 (spin-down) state.
  cplx basis_coeff(std::uint64_t b) const {
    int e = phase_exp_ + 2 * detail::parity64(z_mask_ & b);
    return detail::i_pow(e);
  }
  std::uint64_t basis_image(std::uint64_t b) const { return b ^ x_mask_; }

  // "Z0 X1 Z2" style label; identity prints as "I". Phase not included.
  std::string label() const {
    std::ostringstream out;
    bool first = true;
    for (int j = 0; j < n_sites_; ++j) {
      char c = site_letter(j);
      if (c == 'I') continue;
      if (!first) out << ' ';
      out << c << j;
      first = false;
    }
    if (first) out << 'I';
    return out.str();
  }

 private:
  int n_sites_;
  std::uint64_t x_mask_, z_mask_;
  int phase_exp_;  // mod 4
};

inline PauliString pauli_mul(const PauliString& a, const PauliString& b) {
  return a * b;
}

}  // namespace qbat
