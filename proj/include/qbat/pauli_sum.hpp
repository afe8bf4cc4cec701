#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "qbat/pauli_string.hpp"

namespace qbat {

// Linear combination of Pauli strings. Term keys are phase-free
// (x_mask, z_mask) pairs; the string's phase is folded into the complex
// amplitude, so equal operators always merge.
class PauliSum {
 public:
  using Key = std::pair<std::uint64_t, std::uint64_t>;  // (x_mask, z_mask)
  using TermMap = std::map<Key, cplx>;

  explicit PauliSum(int n_sites) : n_sites_(n_sites) {
    if (n_sites < 1 || n_sites > kMaxSites)
      throw ValidationError("PauliSum: n_sites out of range");
  }

  int n_sites() const { return n_sites_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add(const PauliString& p, cplx coeff = 1.0) {
    if (p.n_sites() != n_sites_)
      throw DimensionError("PauliSum::add: n_sites mismatch");
    terms_[{p.x_mask(), p.z_mask()}] += coeff * p.phase();
  }

  void add(const PauliSum& other, cplx scale = 1.0) {
    if (other.n_sites_ != n_sites_)
      throw DimensionError("PauliSum::add: n_sites mismatch");
    for (const auto& [k, c] : other.terms_) terms_[k] += scale * c;
  }

  PauliSum& operator*=(cplx s) {
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

  friend PauliSum operator+(PauliSum a, const PauliSum& b) {
    a.add(b);
    a.prune();
    return a;
  }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) {
    a.add(b, -1.0);
    a.prune();
    return a;
  }
  friend PauliSum operator*(PauliSum a, cplx s) {
    a *= s;
    return a;
  }

  friend PauliSum operator*(const PauliSum& a, const PauliSum& b) {
    if (a.n_sites_ != b.n_sites_)
      throw DimensionError("PauliSum product: n_sites mismatch");
    PauliSum out(a.n_sites_);
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) {
        PauliString p = PauliString(a.n_sites_, ka.first, ka.second) *
                        PauliString(a.n_sites_, kb.first, kb.second);
        out.add(p, ca * cb);
      }
    out.prune();
    return out;
  }

  // Drop terms below rel_tol relative to the largest amplitude.
  void prune(double rel_tol = 1e-15) {
    double max_amp = 0.0;
    for (const auto& [k, c] : terms_) max_amp = std::max(max_amp, std::abs(c));
    double cut = max_amp * rel_tol;
    for (auto it = terms_.begin(); it != terms_.end();)
      it = (std::abs(it->second) <= cut) ? terms_.erase(it) : std::next(it);
  }

  // Sum is Hermitian iff each amplitude times the term's intrinsic phase
  // i^{|x&z|} is real (the Hermitian basis element is i^{|x&z|} X^x Z^z).
  bool is_hermitian(double tol = 1e-12) const {
    for (const auto& [k, c] : terms_) {
      int m = std::popcount(k.first & k.second);
      if (std::abs(std::imag(c * detail::i_pow(m))) > tol) return false;
    }
    return true;
  }

  cplx coeff_of(const PauliString& p) const {
    auto it = terms_.find({p.x_mask(), p.z_mask()});
    if (it == terms_.end()) return 0.0;
    // report in the basis of p itself (divide out p's phase)
    return it->second / p.phase();
  }

  // One term per line: "coeff_re coeff_im label", coefficients in the
  // letter (I/X/Y/Z) display convention.
  std::string dump() const {
    std::ostringstream out;
    out << std::setprecision(17);
    for (const auto& [k, c] : terms_) {
      PauliString p(n_sites_, k.first, k.second);
      // c multiplies X^x Z^z; letters carry i^{y_count}, so divide it out.
      cplx disp = c / detail::i_pow(p.y_count());
      out << std::real(disp) << ' ' << std::imag(disp) << ' ' << p.label()
          << '\n';
    }
    return out.str();
  }

  friend PauliSum commutator(const PauliSum& a, const PauliSum& b) {
    PauliSum out = a * b - b * a;
    out.prune();
    return out;
  }

 private:
  int n_sites_;
  TermMap terms_;
};

inline PauliSum pauli_sum_commutator(const PauliSum& a, const PauliSum& b) {
  return commutator(a, b);
}

}  // namespace qbat
