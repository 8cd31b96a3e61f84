#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qsense/noise.hpp"
#include "qsense/privacy.hpp"
#include "qsense/qfi.hpp"
#include "qsense/stabilizer.hpp"

namespace qsense {

/// Scenario validation failure; the message names the offending field.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScanSpec {
  ChannelKind kind = ChannelKind::Dephasing;
  std::vector<double> grid;
  std::vector<int> loss_order;
};

/// Parsed and cross-checked scenario file contents.
struct Scenario {
  ResourcePartition partition{IntVec{1}};
  TargetFunction target = TargetFunction::from_integers({1});
  std::variant<SeparableDynamics, GeneralDynamics> dynamics;

  enum class StateKind { None, Ghz, Family, Logical, Explicit, Stabilizer };
  StateKind state_kind = StateKind::None;
  Complex ghz_alpha{1.0 / std::sqrt(2.0), 0.0};
  Complex ghz_beta{1.0 / std::sqrt(2.0), 0.0};
  std::optional<FamilySpec> family;
  std::optional<LogicalSpec> logical;
  std::optional<StateVector> explicit_state;
  std::optional<Tableau> tableau;

  std::optional<ChannelSpec> noise;
  std::optional<ScanSpec> scan;
  SearchOptions search;
  std::uint64_t seed = 0;

  bool has_state() const { return state_kind != StateKind::None; }
  bool separable() const { return std::holds_alternative<SeparableDynamics>(dynamics); }
};

Scenario parse_scenario_json(const nlohmann::json& j);
Scenario parse_scenario_file(const std::string& path);

/// Pure probe state named by the scenario.
StateVector build_probe_state(const Scenario& s);

nlohmann::json qfi_to_json(const QfiMatrix& q);
nlohmann::json privacy_to_json(const PrivacyReport& r);
nlohmann::json curve_to_json(const RobustnessCurve& c);
std::string curve_to_csv(const RobustnessCurve& c);

/// 17-significant-digit decimal form, stable across runs.
std::string format_double(double x);

}  // namespace qsense
