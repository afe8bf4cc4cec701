#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <fstream>
#include <string>

#include "qbat/errors.hpp"

namespace qbat {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Pure state vector or density matrix over n qubits. Site 0 is the least
// significant bit of the basis index; bit 1 means spin down (Z = -1).
class QuantumState {
 public:
  enum class Kind { PureVector, DensityMatrix };

  static QuantumState pure(int n_sites, Vec amplitudes) {
    check_dim(n_sites, amplitudes.size());
    QuantumState s;
    s.kind_ = Kind::PureVector;
    s.n_sites_ = n_sites;
    s.vec_ = std::move(amplitudes);
    if (std::abs(s.vec_.norm() - 1.0) > 1e-12)
      throw NumericalError("QuantumState::pure: state not normalized");
    return s;
  }

  static QuantumState density(int n_sites, Mat rho) {
    check_dim(n_sites, rho.rows());
    if (rho.rows() != rho.cols())
      throw DimensionError("QuantumState::density: non-square matrix");
    if ((rho - rho.adjoint()).norm() > 1e-12 * std::max(1.0, rho.norm()))
      throw NumericalError("QuantumState::density: not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-12)
      throw NumericalError("QuantumState::density: trace != 1");
    QuantumState s;
    s.kind_ = Kind::DensityMatrix;
    s.n_sites_ = n_sites;
    s.mat_ = std::move(rho);
    return s;
  }

  // Computational basis state |b>.
  static QuantumState basis(int n_sites, std::uint64_t b) {
    Vec v = Vec::Zero(1ll << n_sites);
    v[static_cast<Eigen::Index>(b)] = 1.0;
    return pure(n_sites, std::move(v));
  }

  Kind kind() const { return kind_; }
  bool is_pure() const { return kind_ == Kind::PureVector; }
  int n_sites() const { return n_sites_; }
  Eigen::Index dim() const { return 1ll << n_sites_; }

  const Vec& vector() const {
    if (!is_pure()) throw PreconditionError("QuantumState: not a pure state");
    return vec_;
  }
  const Mat& matrix() const {
    if (is_pure()) throw PreconditionError("QuantumState: not a density matrix");
    return mat_;
  }

  // rho = |psi><psi| for pure inputs, identity for density inputs.
  Mat as_density() const {
    if (is_pure()) return vec_ * vec_.adjoint();
    return mat_;
  }

  // Debug dump: "qbatstate" magic, kind, n_sites, then raw complex doubles
  // (little-endian host order).
  void dump_binary(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open state dump file: " + path);
    const char magic[8] = {'q','b','a','t','s','t','a','t'};
    f.write(magic, 8);
    std::int32_t k = is_pure() ? 0 : 1, n = n_sites_;
    f.write(reinterpret_cast<const char*>(&k), 4);
    f.write(reinterpret_cast<const char*>(&n), 4);
    const std::complex<double>* data = is_pure() ? vec_.data() : mat_.data();
    std::streamsize count = is_pure() ? vec_.size() : mat_.size();
    f.write(reinterpret_cast<const char*>(data),
            count * static_cast<std::streamsize>(sizeof(std::complex<double>)));
  }

 private:
  QuantumState() = default;
  static void check_dim(int n_sites, Eigen::Index len) {
    if (n_sites < 1 || n_sites > 30)
      throw ValidationError("QuantumState: n_sites out of range");
    if (len != (1ll << n_sites))
      throw DimensionError("QuantumState: length != 2^n_sites");
  }

  Kind kind_ = Kind::PureVector;
  int n_sites_ = 0;
  Vec vec_;
  Mat mat_;
};

}  // namespace qbat
