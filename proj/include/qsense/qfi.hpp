#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsense/hamiltonians.hpp"
#include "qsense/hilbert.hpp"
#include "qsense/resources.hpp"

namespace qsense {

enum class QfiProvenance {
  PureDense,
  StructuredSeparable,
  StructuredGeneral,
  MixedEig,
  MixedSldOracle,
  Stabilizer,
};

std::string provenance_name(QfiProvenance p);

/// k x k real symmetric PSD information matrix, tagged with the formula that
/// produced it and the parameter point it was evaluated at (all unitary
/// encodings here are phase covariant, so the point is informational only).
struct QfiMatrix {
  Eigen::MatrixXd m;
  QfiProvenance provenance = QfiProvenance::PureDense;
  std::vector<double> theta;
  bool rank_change_warning = false;  // set by the finite-difference oracle

  int k() const { return static_cast<int>(m.rows()); }
};

/// Weighted rank-1-corrected diagonal decomposition Q = 4 C (Lambda - vv^T) C^T.
/// Rows of C are symmetrized Hamming-weight vectors (separable dynamics) or
/// local-eigenvalue tuples (general dynamics).
struct StructuredQfi {
  Eigen::MatrixXd C;
  Eigen::VectorXd lambda;
  Eigen::VectorXd v;  // zero for the general-dynamics variant
  QfiMatrix q;
};

QfiMatrix qfi_pure_dense(const StateVector& psi, const SeparableDynamics& d, const ResourcePartition& p);
QfiMatrix qfi_pure_dense(const StateVector& psi, const GeneralDynamics& d, const ResourcePartition& p);

/// Structured decomposition for per-qubit Z dynamics (callers conjugate other
/// separable generators to Z first). Optional per-node control times scale
/// the rows of C.
StructuredQfi qfi_structured_separable(const StateVector& psi, const ResourcePartition& p,
                                       const std::vector<double>& node_times = {});

/// Structured decomposition in the joint eigenbasis of general node
/// Hamiltonians; exact for any input state.
StructuredQfi qfi_structured_general(const StateVector& psi, const GeneralDynamics& d,
                                     const ResourcePartition& p);

QfiMatrix qfi_mixed_eig(const DensityMatrix& rho, const SeparableDynamics& d, const ResourcePartition& p,
                        double eps_supp = kDefaultSupportEps);
QfiMatrix qfi_mixed_eig(const DensityMatrix& rho, const GeneralDynamics& d, const ResourcePartition& p,
                        double eps_supp = kDefaultSupportEps);

/// Grouped form over an explicit decomposition rho = sum_j w_j |psi_j><psi_j|.
/// States must be orthonormal within 1e-10; non-orthogonal inputs are
/// re-diagonalized first.
QfiMatrix qfi_mixed_grouped(const std::vector<double>& weights, const std::vector<StateVector>& states,
                            const SeparableDynamics& d, const ResourcePartition& p);

using ParametricChannel = std::function<DensityMatrix(const std::vector<double>&)>;

/// Independent check of every other path: central finite differences for the
/// derivatives, symmetric logarithmic derivatives by pseudo-inversion on the
/// support subspace, then Q_{mu nu} = tr[rho (L_mu L_nu + L_nu L_mu)/2].
QfiMatrix qfi_sld_oracle(const ParametricChannel& channel, const std::vector<double>& theta0,
                         double h_fd = 1e-5);

/// Channel theta -> U_theta rho U_theta^dag for use with qfi_sld_oracle.
ParametricChannel unitary_channel(const DensityMatrix& rho, const SeparableDynamics& d,
                                  const ResourcePartition& p);
ParametricChannel unitary_channel(const DensityMatrix& rho, const GeneralDynamics& d,
                                  const ResourcePartition& p);

}  // namespace qsense
