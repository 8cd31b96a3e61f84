#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qsense/hamiltonians.hpp"
#include "qsense/hilbert.hpp"
#include "qsense/qfi.hpp"
#include "qsense/resources.hpp"

namespace qsense {

enum class CliffordGate { H, S, X, Y, Z };

/// Stabilizer group of an n-qubit state, held as n signed generator rows in
/// binary symplectic form. Rows pairwise commute and are independent over F2.
class Tableau {
 public:
  explicit Tableau(std::vector<PauliString> generators);

  /// Generators {X..X, Z_0 Z_1, Z_0 Z_2, ...}.
  static Tableau ghz(int n);
  /// Row j = X_j prod_{k: adj(j,k)=1} Z_k for a simple graph.
  static Tableau graph(const Eigen::MatrixXi& adj);
  /// One generator per line, sign prefix plus letters, e.g. "+XXX".
  static Tableau parse(std::string_view text);

  int qubits() const { return n_; }
  const std::vector<PauliString>& generators() const { return rows_; }

  Tableau applied(CliffordGate g, int qubit) const;

  /// +1 if p is in the generated group, -1 if -p is, 0 otherwise. The phase
  /// of p must be real.
  int signed_membership(const PauliString& p) const;

  /// Unique representative of the stabilizer group: reduced row echelon form
  /// over F2 with tracked signs.
  Tableau canonical() const;
  /// Canonical text form, usable as a deduplication key.
  std::string key() const;

  /// Dense stabilized state, for cross-checks at small n.
  StateVector to_state() const;

  std::string to_text() const;

 private:
  int n_;
  std::vector<PauliString> rows_;
};

/// Stabilizer-formalism QFI: 4 sum_{j in mu, k in nu} [id(G_j G_k) -
/// id(G_j) id(G_k)] with the signed membership indicator, scaled by the node
/// control times. Every per-qubit generator must be a signed Pauli axis.
QfiMatrix qfi_stabilizer(const Tableau& t, const ResourcePartition& p, const SeparableDynamics& d);

/// All n-qubit stabilizer states (n <= 3 supported), generated as the local
/// Clifford orbit of product/Bell/GHZ seeds with canonical-form dedup.
std::vector<Tableau> enumerate_stabilizer_states(int n);

}  // namespace qsense
