#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qsense/hilbert.hpp"
#include "qsense/resources.hpp"

namespace qsense {

enum class PauliLetter : unsigned char { I, X, Y, Z };

char pauli_char(PauliLetter l);
PauliLetter pauli_from_char(char c);

/// Pauli string with a scalar phase in {+1, -1, +i, -i}, stored as i^phase_pow.
class PauliString {
 public:
  PauliString(std::vector<PauliLetter> letters, int phase_pow = 0);
  static PauliString identity(int n);
  /// Single non-identity letter at one position.
  static PauliString single(int n, int qubit, PauliLetter l, int phase_pow = 0);
  /// Parses e.g. "+XXZ", "-YI", "iZZ"; leftmost letter is qubit 0.
  static PauliString parse(std::string_view text);

  int size() const { return static_cast<int>(letters_.size()); }
  PauliLetter letter(int q) const { return letters_[static_cast<std::size_t>(q)]; }
  const std::vector<PauliLetter>& letters() const { return letters_; }
  int phase_pow() const { return phase_pow_; }
  Complex phase() const;
  bool is_identity_letters() const;

  PauliString times(const PauliString& other) const;
  bool commutes_with(const PauliString& other) const;
  PauliString with_phase_pow(int p) const;

  /// x/z symplectic bits for qubit q: X -> (1,0), Z -> (0,1), Y -> (1,1).
  bool x_bit(int q) const;
  bool z_bit(int q) const;

  CMat to_matrix() const;
  std::string str() const;

  friend bool operator==(const PauliString& a, const PauliString& b) = default;

 private:
  std::vector<PauliLetter> letters_;
  int phase_pow_;
};

/// Per-qubit encoding generators G_j = x.sigma with an optional per-node
/// control time; node mu imprints theta_mu through exp(-i theta_mu t_mu G_j)
/// on each of its qubits.
struct SeparableDynamics {
  std::vector<Eigen::Vector3d> axes;  // unit vectors, one per qubit
  std::vector<double> node_times;     // empty means all ones

  static SeparableDynamics all_z(int n);
  static SeparableDynamics all_letter(PauliLetter l, int n);

  void validate(const ResourcePartition& p) const;
  double time_for_node(int mu) const;
  /// Pauli letter and sign when the axis is a signed coordinate direction.
  std::optional<std::pair<PauliLetter, int>> pauli_axis(int qubit) const;
};

struct LocalPauliTerm {
  double coeff;
  std::string letters;  // over the node's local qubits, leftmost is local qubit 0
};

/// Hermitian Pauli-sum Hamiltonian supported on one node's qubits; the local
/// eigendecomposition is computed once at construction.
class NodeHamiltonian {
 public:
  NodeHamiltonian(int local_qubits, std::vector<LocalPauliTerm> terms);
  /// Text format: one term per line, "coeff LETTERS" (e.g. "0.5 ZZ").
  static NodeHamiltonian parse(int local_qubits, std::string_view text);

  int local_qubits() const { return local_qubits_; }
  const std::vector<LocalPauliTerm>& terms() const { return terms_; }
  CMat local_matrix() const;
  const Eigen::VectorXd& eigenvalues() const { return evals_; }
  const CMat& eigenvectors() const { return evecs_; }

 private:
  int local_qubits_;
  std::vector<LocalPauliTerm> terms_;
  Eigen::VectorXd evals_;
  CMat evecs_;
};

/// One Hamiltonian per node, covering the whole partition.
struct GeneralDynamics {
  std::vector<NodeHamiltonian> nodes;

  void validate(const ResourcePartition& p) const;
};

/// Joint local-eigenvalue structure of a set of node Hamiltonians: the set O
/// of eigenvalue tuples (deduplicated as vectors), its difference set O2minus,
/// and the bounding orthotope.
struct Orthotope {
  struct Point {
    Eigen::VectorXd c;
    std::vector<int> label;  // one local eigenbasis index per node
  };
  std::vector<Point> points;             // O
  std::vector<Eigen::VectorXd> diffs;    // O^2_-, deduplicated
  Eigen::VectorXd box_min, box_max;
};

struct OrthotopeWitness {
  Orthotope::Point ci, cj;
  double alpha;  // c_i - c_j = alpha * a, alpha != 0
};

/// Dense embedded generator of node mu: for separable dynamics
/// t_mu * sum_{j in mu} x_j.sigma_j, for general dynamics the node
/// Hamiltonian, both padded with identities elsewhere.
CMat collective_generator(const SeparableDynamics& d, const ResourcePartition& p, int node);
CMat collective_generator(const GeneralDynamics& d, const ResourcePartition& p, int node);

/// G_mu v without forming the dense generator. The result is a raw
/// (unnormalized) amplitude vector.
CVec apply_node_generator(const CVec& v, const SeparableDynamics& d, const ResourcePartition& p,
                          int node);
CVec apply_node_generator(const CVec& v, const GeneralDynamics& d, const ResourcePartition& p,
                          int node);

StateVector encode(const StateVector& psi, const SeparableDynamics& d, const ResourcePartition& p,
                   const std::vector<double>& theta);
StateVector encode(const StateVector& psi, const GeneralDynamics& d, const ResourcePartition& p,
                   const std::vector<double>& theta);
DensityMatrix encode(const DensityMatrix& rho, const SeparableDynamics& d, const ResourcePartition& p,
                     const std::vector<double>& theta);
DensityMatrix encode(const DensityMatrix& rho, const GeneralDynamics& d, const ResourcePartition& p,
                     const std::vector<double>& theta);

/// Local eigenvalues/eigenvectors of node mu's Hamiltonian, eigenvalues
/// grouped as equal when within 1e-9.
std::pair<Eigen::VectorXd, CMat> local_eigensystem(const GeneralDynamics& d, int node);

Orthotope build_orthotope(const GeneralDynamics& d, double dedup_tol = 1e-9);

/// Searches O x O for a pair whose difference is collinear with a (nonzero
/// multiple, tolerance 1e-9).
std::optional<OrthotopeWitness> target_in_O2minus(const TargetFunction& a, const Orthotope& o);

/// Joint eigenstate of all node Hamiltonians for the given per-node local
/// basis labels.
StateVector joint_eigenstate(const GeneralDynamics& d, const ResourcePartition& p,
                             const std::vector<int>& label);

/// Node-local Pauli string anticommuting with every term of the node
/// Hamiltonian, if one exists (exhaustive scan over the node's Pauli strings).
std::optional<PauliString> has_anticommuting_pauli(const GeneralDynamics& d, int node);

/// Single-qubit unitary W with W^dag (g.sigma) W = g'.sigma. The antiparallel
/// case uses the axis closest to x (or y when g is along x).
Eigen::Matrix2cd conjugating_rotation(const Eigen::Vector3d& g, const Eigen::Vector3d& gp);

}  // namespace qsense
