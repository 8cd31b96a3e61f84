#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qsense {

/// Integer vectors over network nodes (resource counts, target coefficients,
/// Hamming weights). Component mu refers to node mu.
using IntVec = std::vector<long long>;

/// gcd of the absolute values of all entries. gcd of the all-zero vector is
/// defined as 0. Throws std::invalid_argument on an empty vector.
long long gcd_vec(const IntVec& v);

/// Outcome of comparing two vectors in the product (component-wise) order.
enum class Ordering { Equal, Less, Greater, Incomparable };

Ordering product_order(const IntVec& u, const IntVec& v);

/// u component-wise <= v.
bool vec_leq(const IntVec& u, const IntVec& v);
/// u component-wise <= v with at least one strict coordinate.
bool vec_lt(const IntVec& u, const IntVec& v);

IntVec vec_add(const IntVec& u, const IntVec& v);
IntVec vec_sub(const IntVec& u, const IntVec& v);
IntVec vec_scale(long long c, const IntVec& u);

/// Assignment of qubits to network nodes. Node mu owns a contiguous block of
/// qubit indices, node 0 owning the lowest ones; qubit 0 is the least
/// significant bit of all dense encodings.
class ResourcePartition {
 public:
  explicit ResourcePartition(IntVec node_sizes);

  int node_count() const { return static_cast<int>(sizes_.size()); }
  int total() const { return total_; }
  const IntVec& node_sizes() const { return sizes_; }

  /// Half-open qubit index range [first, last) owned by node mu.
  std::pair<int, int> node_range(int mu) const;
  int node_of(int qubit) const;

 private:
  IntVec sizes_;
  std::vector<int> starts_;
  int total_ = 0;
};

/// Linear target function f(theta) = a . theta, stored in canonical form with
/// gcd(a) = 1. Rational inputs are scaled by the lcm of denominators before
/// reduction; the applied scale is kept so callers can account for the
/// resource overhead.
class TargetFunction {
 public:
  static TargetFunction from_integers(IntVec a);
  /// Each coefficient given as numerator/denominator.
  static TargetFunction from_rationals(const std::vector<std::pair<long long, long long>>& a);

  const IntVec& coeffs() const { return coeffs_; }
  int size() const { return static_cast<int>(coeffs_.size()); }
  /// a / ||a||_2.
  Eigen::VectorXd normalized() const;
  /// Multiplier that took the raw input to the canonical integer vector.
  double canonical_scale() const { return scale_; }

 private:
  TargetFunction() = default;
  IntVec coeffs_;
  double scale_ = 1.0;
};

/// Length-n bit string with dense integer encoding; bit i of the encoding is
/// qubit i. String literals read left to right as qubit 0, 1, ... (node
/// order), which is the transpose of ket notation.
class BitString {
 public:
  BitString(std::uint64_t value, int n);
  static BitString from_string(std::string_view bits);

  int size() const { return n_; }
  std::uint64_t value() const { return value_; }
  int bit(int i) const { return static_cast<int>((value_ >> i) & 1u); }
  BitString complement() const;
  std::string str() const;

  friend bool operator==(const BitString& a, const BitString& b) = default;

 private:
  std::uint64_t value_ = 0;
  int n_ = 0;
};

/// Per-node count of ones of s.
IntVec hamming_vec(const BitString& s, const ResourcePartition& p);
/// n - 2 h(s); component mu lies in [-n_mu, n_mu].
IntVec hamming_vec_sym(const BitString& s, const ResourcePartition& p);

/// Resource regimes relative to a target function.
enum class Zone { I, II, III, IV };

std::string zone_name(Zone z);

/// Classifies the resource vector n against the canonical target a:
///   I   insufficient resources somewhere (not a <= n),
///   II  n = a,
///   III a < n but not 2a <= n,
///   IV  2a <= n.
/// Requires every entry of a positive and gcd(a) = 1.
Zone classify_zone(const TargetFunction& a, const IntVec& n);

/// All bit strings whose vectorial Hamming weight equals w, in increasing
/// integer-encoding order. The class size is prod_mu C(n_mu, w_mu).
std::vector<BitString> class_representatives(const ResourcePartition& p, const IntVec& w);

}  // namespace qsense
