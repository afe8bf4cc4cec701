#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <vector>

#include "qbat/lapack.hpp"
#include "qbat/pauli_sum.hpp"
#include "qbat/state.hpp"

namespace qbat {

inline constexpr int kDenseSiteCap = 14;    // spectral work, dim 2^14
inline constexpr int kProductSiteCap = 20;  // pure-state Pauli-action work

// --- sparse Pauli action -------------------------------------------------------

// |out> += coeff * P |in> without forming a matrix.
inline void apply_pauli_accum(const PauliString& p, cplx coeff, const Vec& in,
                              Vec& out) {
  const std::uint64_t x = p.x_mask();
  for (Eigen::Index b = 0; b < in.size(); ++b) {
    std::uint64_t ub = static_cast<std::uint64_t>(b);
    out[static_cast<Eigen::Index>(ub ^ x)] +=
        coeff * p.basis_coeff(ub) * in[b];
  }
}

inline Vec apply_pauli_sum(const PauliSum& s, const Vec& in) {
  Vec out = Vec::Zero(in.size());
  for (const auto& [k, c] : s.terms())
    apply_pauli_accum(PauliString(s.n_sites(), k.first, k.second), c, in, out);
  return out;
}

// --- dense Hermitian operators -------------------------------------------------

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;  // ascending
  Mat eigenvectors;             // columns
};

class HermitianOperator {
 public:
  HermitianOperator(int n_sites, Mat matrix)
      : n_sites_(n_sites), mat_(std::move(matrix)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() != (1ll << n_sites))
      throw DimensionError("HermitianOperator: bad matrix shape");
    if ((mat_ - mat_.adjoint()).norm() > 1e-12 * std::max(1.0, mat_.norm()))
      throw ValidationError("HermitianOperator: matrix not Hermitian");
  }

  int n_sites() const { return n_sites_; }
  Eigen::Index dim() const { return mat_.rows(); }
  const Mat& matrix() const { return mat_; }

  // One decomposition per operator, reused across the whole t grid.
  // Thread-safe; concurrent readers share the cached result.
  std::shared_ptr<const SpectralDecomposition> spectral() const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (!cache_) {
      auto dec = std::make_shared<SpectralDecomposition>();
      if (is_diagonal()) {
        // Common fast path (local Z batteries are diagonal here).
        Eigen::VectorXd d = mat_.diagonal().real();
        std::vector<Eigen::Index> order(d.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](Eigen::Index a, Eigen::Index b) { return d[a] < d[b]; });
        dec->eigenvalues.resize(d.size());
        dec->eigenvectors = Mat::Zero(d.size(), d.size());
        for (Eigen::Index j = 0; j < d.size(); ++j) {
          dec->eigenvalues[j] = d[order[j]];
          dec->eigenvectors(order[j], j) = 1.0;
        }
      } else {
        lapack::eigh(mat_, dec->eigenvalues, dec->eigenvectors);
      }
      cache_ = std::move(dec);
    }
    return cache_;
  }

  double ground_energy() const { return spectral()->eigenvalues[0]; }

 private:
  bool is_diagonal() const {
    for (Eigen::Index j = 0; j < mat_.cols(); ++j)
      for (Eigen::Index i = 0; i < mat_.rows(); ++i)
        if (i != j && std::abs(mat_(i, j)) > 1e-14) return false;
    return true;
  }

  int n_sites_;
  Mat mat_;
  mutable std::mutex cache_mutex_;
  mutable std::shared_ptr<const SpectralDecomposition> cache_;
};

// Dense realization of a Pauli sum. Hermiticity is required by default
// (every evolution/expectation consumer needs it).
inline HermitianOperator to_dense(const PauliSum& s,
                                  int site_cap = kDenseSiteCap) {
  if (s.n_sites() > site_cap)
    throw ResourceError("to_dense: n_sites exceeds dense cap");
  if (!s.is_hermitian())
    throw ValidationError("to_dense: Pauli sum is not Hermitian");
  Eigen::Index dim = 1ll << s.n_sites();
  Mat m = Mat::Zero(dim, dim);
  for (const auto& [k, c] : s.terms()) {
    PauliString p(s.n_sites(), k.first, k.second);
    for (Eigen::Index b = 0; b < dim; ++b) {
      std::uint64_t ub = static_cast<std::uint64_t>(b);
      m(static_cast<Eigen::Index>(p.basis_image(ub)), b) +=
          c * p.basis_coeff(ub);
    }
  }
  return HermitianOperator(s.n_sites(), std::move(m));
}

// --- time evolution ----------------------------------------------------------

// exp(-i H t)|psi0> (or U rho U^dag) for each t, one spectral
// decomposition shared across the grid.
inline std::vector<QuantumState> evolve_spectral(const HermitianOperator& h,
                                                 const QuantumState& psi0,
                                                 const std::vector<double>& ts) {
  if (psi0.n_sites() != h.n_sites())
    throw DimensionError("evolve_spectral: dimension mismatch");
  auto dec = h.spectral();
  const Mat& v = dec->eigenvectors;
  std::vector<QuantumState> out;
  out.reserve(ts.size());
  if (psi0.is_pure()) {
    Vec c = v.adjoint() * psi0.vector();
    for (double t : ts) {
      Vec phased = c;
      for (Eigen::Index j = 0; j < phased.size(); ++j)
        phased[j] *= std::exp(cplx(0, -dec->eigenvalues[j] * t));
      Vec psi = v * phased;
      double norm = psi.norm();
      if (std::abs(norm - 1.0) > 1e-10)
        throw NumericalError("evolve_spectral: norm drift");
      out.push_back(QuantumState::pure(psi0.n_sites(), psi / norm));
    }
  } else {
    Mat r = v.adjoint() * psi0.matrix() * v;
    for (double t : ts) {
      Mat phased = r;
      for (Eigen::Index j = 0; j < phased.rows(); ++j)
        for (Eigen::Index k = 0; k < phased.cols(); ++k)
          phased(j, k) *= std::exp(
              cplx(0, -(dec->eigenvalues[j] - dec->eigenvalues[k]) * t));
      Mat rho = v * phased * v.adjoint();
      rho = 0.5 * (rho + rho.adjoint().eval());
      out.push_back(QuantumState::density(psi0.n_sites(), std::move(rho)));
    }
  }
  return out;
}

inline QuantumState evolve_spectral(const HermitianOperator& h,
                                    const QuantumState& psi0, double t) {
  return evolve_spectral(h, psi0, std::vector<double>{t}).front();
}

namespace detail {
inline void check_commuting(const std::vector<PauliString>& generators) {
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j)
      if (!commutes(generators[i], generators[j]))
        throw PreconditionError(
            "evolve_stabilizer_product: generators must pairwise commute");
}
}  // namespace detail

// exp(-i t sum_g g)|psi0> as the exact product of (cos t I - i sin t g)
// factors; valid because the generators commute and square to +I.
inline QuantumState evolve_stabilizer_product(
    const std::vector<PauliString>& generators, const QuantumState& psi0,
    double t) {
  if (!psi0.is_pure())
    throw PreconditionError("evolve_stabilizer_product: pure states only");
  if (psi0.n_sites() > kProductSiteCap)
    throw ResourceError("evolve_stabilizer_product: site cap exceeded");
  for (const auto& g : generators) {
    if (g.n_sites() != psi0.n_sites())
      throw DimensionError("evolve_stabilizer_product: dimension mismatch");
    PauliString g2 = g * g;
    if (!(g2.is_identity() && g2.phase_exp() == 0))
      throw PreconditionError(
          "evolve_stabilizer_product: generators must square to +I");
  }
  detail::check_commuting(generators);
  Vec psi = psi0.vector();
  const cplx c = std::cos(t), s = cplx(0, -1) * std::sin(t);
  for (const auto& g : generators) {
    Vec next = c * psi;
    apply_pauli_accum(g, s, psi, next);
    psi = std::move(next);
  }
  double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10)
    throw NumericalError("evolve_stabilizer_product: norm drift");
  return QuantumState::pure(psi0.n_sites(), psi / norm);
}

// --- expectation values & partial trace ----------------------------------------

inline double expectation(const PauliSum& op, const QuantumState& state) {
  if (op.n_sites() != state.n_sites())
    throw DimensionError("expectation: dimension mismatch");
  cplx acc = 0.0;
  if (state.is_pure()) {
    const Vec& psi = state.vector();
    Vec opv = apply_pauli_sum(op, psi);
    acc = psi.dot(opv);  // Eigen dot conjugates the left argument
  } else {
    const Mat& rho = state.matrix();
    for (const auto& [k, c] : op.terms()) {
      PauliString p(op.n_sites(), k.first, k.second);
      for (Eigen::Index b = 0; b < rho.rows(); ++b) {
        std::uint64_t ub = static_cast<std::uint64_t>(b);
        acc += c * p.basis_coeff(ub) *
               rho(b, static_cast<Eigen::Index>(p.basis_image(ub)));
      }
    }
  }
  if (std::abs(acc.imag()) > 1e-10)
    throw NumericalError("expectation: non-real value (operator Hermitian?)");
  return acc.real();
}

inline double expectation(const HermitianOperator& op,
                          const QuantumState& state) {
  if (op.n_sites() != state.n_sites())
    throw DimensionError("expectation: dimension mismatch");
  cplx acc;
  if (state.is_pure())
    acc = state.vector().dot(op.matrix() * state.vector());
  else
    acc = (op.matrix() * state.matrix()).trace();
  if (std::abs(acc.imag()) > 1e-10)
    throw NumericalError("expectation: non-real value");
  return acc.real();
}

// Reduced density matrix of the contiguous block {0, ..., m-1}
// (the m least significant bits of the basis index).
inline QuantumState partial_trace_block(const QuantumState& state, int m) {
  const int n = state.n_sites();
  if (m < 1 || m > n) throw ValidationError("partial_trace_block: bad m");
  const Eigen::Index dim_keep = 1ll << m, dim_rest = 1ll << (n - m);
  Mat rho = Mat::Zero(dim_keep, dim_keep);
  if (state.is_pure()) {
    const Vec& psi = state.vector();
    for (Eigen::Index r = 0; r < dim_rest; ++r) {
      Eigen::Index base = r << m;
      for (Eigen::Index a = 0; a < dim_keep; ++a)
        for (Eigen::Index b = 0; b < dim_keep; ++b)
          rho(a, b) += psi[base + a] * std::conj(psi[base + b]);
    }
  } else {
    const Mat& full = state.matrix();
    for (Eigen::Index r = 0; r < dim_rest; ++r) {
      Eigen::Index base = r << m;
      for (Eigen::Index a = 0; a < dim_keep; ++a)
        for (Eigen::Index b = 0; b < dim_keep; ++b)
          rho(a, b) += full(base + a, base + b);
    }
  }
  rho = 0.5 * (rho + rho.adjoint().eval());
  return QuantumState::density(m, std::move(rho));
}

}  // namespace qbat
