#pragma once

#include <optional>
#include <vector>

#include "qsense/hilbert.hpp"
#include "qsense/privacy.hpp"
#include "qsense/qfi.hpp"
#include "qsense/resources.hpp"

namespace qsense {

enum class ChannelKind { Dephasing, BitFlip, Depolarizing, AmplitudeDamping, Loss };

std::string channel_name(ChannelKind k);

/// Per-qubit noise applied before the encoding dynamics. For loss, the mask
/// selects the qubits traced out; the depolarizing probability follows the
/// keep-with-p parameterization (p = 1 is noiseless).
struct ChannelSpec {
  ChannelKind kind = ChannelKind::Dephasing;
  std::vector<double> probs;      // one entry per qubit (ignored for loss)
  std::vector<bool> loss_mask;    // loss only
  bool allow_total_loss = false;

  static ChannelSpec uniform(ChannelKind kind, int n, double p);
  void validate(int n) const;
};

DensityMatrix apply_channel(const DensityMatrix& rho, const ChannelSpec& c);

/// prod_i p_i^{j_i} (1 - p_i)^{1 - j_i}; sums to 1 over all strings j.
double weight_function_g(const std::vector<double>& p, const BitString& j);

/// Closed forms for GHZ probes with n = a resources. Each is cross-checked
/// against apply_channel followed by qfi_mixed_eig in the tests.
QfiMatrix predict_dephasing_qfi(const std::vector<double>& p, const TargetFunction& a);
QfiMatrix predict_bitflip_qfi(const std::vector<double>& p, const ResourcePartition& part);
QfiMatrix predict_depolarizing_qfi(const std::vector<double>& p, const TargetFunction& a);
QfiMatrix predict_amplitude_damping_qfi(const std::vector<double>& p, const TargetFunction& a);

struct LossReport {
  bool zero_information = false;
  bool below_minimal = false;  // surviving resources dropped under the target somewhere
  double trace_q = 0.0;
  std::optional<PrivacyReport> report;  // absent when no information remains
  ResourcePartition surviving;
};

/// Builds the family state, traces out the lost qubits, and evaluates the
/// mixed-state QFI and privacy on the surviving partition (same target).
LossReport loss_analysis(const FamilySpec& f, const std::vector<int>& lost_qubits);

struct RobustnessPoint {
  double p = 0.0;
  double privacy = 0.0;        // NaN when no information remains
  double trace_qfi = 0.0;
  double q_along_a = 0.0;      // a^T Q a with unit a
  Eigen::MatrixXd qfi;
};

struct RobustnessCurve {
  ChannelKind kind;
  std::vector<RobustnessPoint> points;
};

/// Sweeps a uniform channel probability over the grid. For loss, grid values
/// are whole numbers of qubits traced from the front of loss_order.
RobustnessCurve robustness_scan(const DensityMatrix& probe, ChannelKind kind,
                                const std::vector<double>& grid, const SeparableDynamics& dyn,
                                const ResourcePartition& p, const TargetFunction& a,
                                const std::vector<int>& loss_order = {});

}  // namespace qsense
