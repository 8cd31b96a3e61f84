#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qsense/hamiltonians.hpp"
#include "qsense/hilbert.hpp"
#include "qsense/qfi.hpp"
#include "qsense/resources.hpp"

namespace qsense {

/// Raised when the QFI carries no information at all (trace below 1e-14);
/// privacy is undefined there, not zero.
struct ZeroInformationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PrivacyReport {
  double privacy = 0.0;            // a^T Q a / tr Q with unit a
  IntVec target;                   // canonical coefficients
  std::optional<Zone> zone;        // separable dynamics with positive targets only
  Eigen::VectorXd qfi_eigenvalues; // descending
  Eigen::MatrixXd qfi_eigenvectors;
  double residual = 0.0;           // Frobenius distance to the aligned rank-1 part
  double trace_q = 0.0;

  /// Float-safe reading of P = 1.
  bool is_private() const { return privacy >= 1.0 - 1e-9 && residual <= 1e-8 * trace_q; }
};

PrivacyReport privacy_measure(const QfiMatrix& q, const TargetFunction& a);

/// Superposition of a weight-d class and a weight-(a+d) class. Empty
/// amplitude lists mean uniform amplitudes over the class.
struct FamilySpec {
  ResourcePartition partition;
  TargetFunction a;
  IntVec d;
  Complex alpha{1.0 / std::sqrt(2.0), 0.0};
  Complex beta{1.0 / std::sqrt(2.0), 0.0};
  std::vector<Complex> amps_low;   // over class_representatives(partition, d)
  std::vector<Complex> amps_high;  // over class_representatives(partition, a + d)
};

StateVector build_family_state(const FamilySpec& f);

/// All valid ancilla weight vectors d with 0 <= d <= n - a; the count is
/// prod_mu (n_mu - a_mu + 1).
std::vector<IntVec> enumerate_family_specs(const ResourcePartition& p, const TargetFunction& a);

/// One logical qubit: a private family over its own block of qubits, with
/// the two classes serving as |0_L> and |1_L>.
struct LogicalBlock {
  ResourcePartition partition;  // per-node sizes of this block's qubits
  IntVec d;
  std::vector<Complex> amps_low;
  std::vector<Complex> amps_high;
};

/// Multi-block state sum_j alpha_j |j_1 ... j_d> over logical bit strings.
/// Blocks are interleaved node-major: node mu holds every block's node-mu
/// qubits, blocks in order.
struct LogicalSpec {
  TargetFunction a;
  std::vector<LogicalBlock> blocks;
  std::vector<Complex> amplitudes;  // 2^(block count), logical bit 0 = block 0

  ResourcePartition total_partition() const;
};

StateVector build_logical_state(const LogicalSpec& l);

PrivacyReport verify_private(const StateVector& psi, const SeparableDynamics& d,
                             const ResourcePartition& p, const TargetFunction& a);
PrivacyReport verify_private(const StateVector& psi, const GeneralDynamics& d,
                             const ResourcePartition& p, const TargetFunction& a);
PrivacyReport verify_private(const DensityMatrix& rho, const SeparableDynamics& d,
                             const ResourcePartition& p, const TargetFunction& a);
PrivacyReport verify_private(const DensityMatrix& rho, const GeneralDynamics& d,
                             const ResourcePartition& p, const TargetFunction& a);

struct SearchOptions {
  int restarts = 200;
  int budget = 5000;  // objective evaluations per restart
  std::uint64_t seed = 0;
};

struct SearchResult {
  double best_privacy = 0.0;
  std::optional<StateVector> best_state;
  bool converged = false;  // every restart finished shrinking within budget
};

/// Multi-restart pattern search over normalized state vectors: random
/// starting points, coordinate steps with shrinking step size, accept on
/// improvement. Deterministic for a fixed seed.
SearchResult search_max_privacy(const ResourcePartition& p, const SeparableDynamics& d,
                                const TargetFunction& a, const SearchOptions& opt = {});

/// Maximum squared overlap between psi and the local-unitary orbit of the
/// family F(p, a, d), found with the same pattern search.
double max_fidelity_to_family_orbit(const StateVector& psi, const ResourcePartition& p,
                                    const TargetFunction& a, const IntVec& d,
                                    const SearchOptions& opt = {});

struct MeasurePropertyReport {
  double max_range_violation = 0.0;        // outside [0, 1]
  double max_aligned_deviation = 0.0;      // |P - 1| on exact rank-1 aligned inputs
  double max_misaligned_privacy = 0.0;     // P on inputs carrying orthogonal information
  double max_invariance_deviation = 0.0;   // |P(BQB^T, Ba) - P(Q, a)|
  bool continuity_bound_holds = true;      // |P(Q+eps A) - P(Q)| <= 2 eps trA / trQ
  bool all_passed = false;
};

/// Randomized verification of the five measure properties.
MeasurePropertyReport check_measure_properties(int samples, std::uint64_t seed = 0);

}  // namespace qsense
