#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qsense/resources.hpp"

namespace qsense {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr int kMaxPureQubits = 20;
inline constexpr int kMaxDenseQubits = 12;
inline constexpr double kDefaultSupportEps = 1e-10;

/// Normalized pure state over the 2^n computational basis, qubit 0 least
/// significant.
class StateVector {
 public:
  StateVector(CVec amps, int n);

  int qubits() const { return n_; }
  Eigen::Index dim() const { return amps_.size(); }
  const CVec& amps() const { return amps_; }
  Complex amp(Eigen::Index i) const { return amps_[i]; }

  CMat outer() const { return amps_ * amps_.adjoint(); }

 private:
  CVec amps_;
  int n_;
};

/// Hermitian, unit-trace, positive semi-definite matrix over 2^n basis
/// states. Validity is checked on construction.
class DensityMatrix {
 public:
  DensityMatrix(CMat mat, int n);
  static DensityMatrix pure(const StateVector& psi);

  int qubits() const { return n_; }
  Eigen::Index dim() const { return mat_.rows(); }
  const CMat& mat() const { return mat_; }

 private:
  CMat mat_;
  int n_;
};

/// Eigendecomposition with a support mask splitting strictly positive weight
/// from numerical zeros.
struct Spectrum {
  Eigen::VectorXd eigenvalues;   // descending
  CMat eigenvectors;             // orthonormal columns, matching order
  std::vector<bool> support;     // eigenvalue > eps_supp * max eigenvalue
};

StateVector basis_state(const BitString& s);

/// alpha |0...0> + beta |1...1> on p.total() qubits; |alpha|^2+|beta|^2 = 1.
StateVector ghz(const ResourcePartition& p, Complex alpha, Complex beta);

/// Reduced density matrix after tracing out the given qubits. Remaining
/// qubits keep their relative order and are re-indexed from 0. Tracing all
/// qubits yields the 1x1 matrix [1].
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& qubits);

Spectrum eig_hermitian(const DensityMatrix& rho, double eps_supp = kDefaultSupportEps);

/// In-place application of a 2x2 operator to one qubit of a raw amplitude
/// vector. No normalization is applied, so non-unitary operators are fine.
void apply_single_qubit_raw(CVec& v, const Eigen::Matrix2cd& op, int qubit);

/// In-place application of a 2^m x 2^m operator to the contiguous qubit block
/// [start, start + m) of a raw amplitude vector.
void apply_block_raw(CVec& v, const CMat& op, int start);

/// psi with a 2x2 gate applied to one qubit.
StateVector apply_single_qubit_gate(const StateVector& psi, const Eigen::Matrix2cd& u, int qubit);

/// psi with a dense gate applied to the contiguous qubit block
/// [start, start + m), where the gate is 2^m x 2^m.
StateVector apply_block_gate(const StateVector& psi, const CMat& u, int start);

/// psi with per-qubit unitaries applied, one per qubit.
StateVector apply_local_unitaries(const StateVector& psi, const std::vector<Eigen::Matrix2cd>& us);

}  // namespace qsense
