#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsense/scenario.hpp"

namespace {

using nlohmann::json;
using namespace qsense;

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitZeroInformation = 3;
constexpr int kExitInfeasible = 4;

struct CommonOpts {
  std::string scenario_path;
  std::string out_path;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::string grid_spec;
};

void emit(const CommonOpts& opts, const std::string& payload) {
  if (opts.out_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + opts.out_path);
    out << payload;
  }
}

void emit_json(const CommonOpts& opts, const json& j) { emit(opts, j.dump(2) + "\n"); }

std::vector<double> parse_grid_spec(const std::string& spec) {
  std::vector<double> grid;
  auto colon = spec.find(':');
  if (colon != std::string::npos) {
    // start:stop:step
    auto colon2 = spec.find(':', colon + 1);
    if (colon2 == std::string::npos) throw SchemaError("schema error at --grid: expected start:stop:step");
    double start = std::stod(spec.substr(0, colon));
    double stop = std::stod(spec.substr(colon + 1, colon2 - colon - 1));
    double step = std::stod(spec.substr(colon2 + 1));
    if (!(step > 0)) throw SchemaError("schema error at --grid: step must be positive");
    for (double v = start; v <= stop + 1e-12; v += step) grid.push_back(v);
    return grid;
  }
  std::size_t pos = 0;
  while (pos < spec.size()) {
    auto comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    grid.push_back(std::stod(spec.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return grid;
}

Scenario load_scenario(CommonOpts& opts) {
  if (opts.scenario_path.empty()) throw SchemaError("schema error at --scenario: a scenario file is required");
  Scenario s = parse_scenario_file(opts.scenario_path);
  if (opts.seed) {
    s.seed = *opts.seed;
    s.search.seed = *opts.seed;
  }
  if (opts.restarts) s.search.restarts = *opts.restarts;
  if (!opts.grid_spec.empty()) {
    if (!s.scan) s.scan = ScanSpec{};
    s.scan->grid = parse_grid_spec(opts.grid_spec);
  }
  return s;
}

json scenario_header(const Scenario& s) {
  json out;
  out["partition"] = s.partition.node_sizes();
  out["target"] = s.target.coeffs();
  return out;
}

// QFI matrices over every path that applies to the scenario, the privacy
// report, and the zone label.
int cmd_qfi(CommonOpts& opts) {
  Scenario s = load_scenario(opts);
  json out = scenario_header(s);
  json paths = json::array();
  QfiMatrix main_q;

  if (s.noise) {
    StateVector psi = build_probe_state(s);
    DensityMatrix rho = DensityMatrix::pure(psi);
    DensityMatrix noisy = apply_channel(rho, *s.noise);
    if (s.noise->kind == ChannelKind::Loss) {
      IntVec survivors = s.partition.node_sizes();
      for (int q = 0; q < s.partition.total(); ++q)
        if (s.noise->loss_mask[static_cast<std::size_t>(q)])
          --survivors[static_cast<std::size_t>(s.partition.node_of(q))];
      ResourcePartition sp(survivors);
      main_q = qfi_mixed_eig(noisy, SeparableDynamics::all_z(sp.total()), sp);
      out["surviving_partition"] = sp.node_sizes();
    } else if (s.separable()) {
      main_q = qfi_mixed_eig(noisy, std::get<SeparableDynamics>(s.dynamics), s.partition);
    } else {
      main_q = qfi_mixed_eig(noisy, std::get<GeneralDynamics>(s.dynamics), s.partition);
    }
    paths.push_back(qfi_to_json(main_q));
  } else {
    StateVector psi = build_probe_state(s);
    if (s.separable()) {
      const auto& dyn = std::get<SeparableDynamics>(s.dynamics);
      main_q = qfi_pure_dense(psi, dyn, s.partition);
      paths.push_back(qfi_to_json(main_q));
      bool all_z = true;
      for (int q = 0; q < s.partition.total(); ++q) {
        auto axis = dyn.pauli_axis(q);
        all_z = all_z && axis && axis->first == PauliLetter::Z && axis->second > 0;
      }
      if (all_z) paths.push_back(qfi_to_json(qfi_structured_separable(psi, s.partition, dyn.node_times).q));
      if (s.state_kind == Scenario::StateKind::Stabilizer) {
        bool pauli = true;
        for (int q = 0; q < s.partition.total(); ++q) pauli = pauli && dyn.pauli_axis(q).has_value();
        if (pauli) paths.push_back(qfi_to_json(qfi_stabilizer(*s.tableau, s.partition, dyn)));
      }
    } else {
      const auto& dyn = std::get<GeneralDynamics>(s.dynamics);
      main_q = qfi_pure_dense(psi, dyn, s.partition);
      paths.push_back(qfi_to_json(main_q));
      paths.push_back(qfi_to_json(qfi_structured_general(psi, dyn, s.partition).q));
    }
  }
  out["paths"] = std::move(paths);

  PrivacyReport rep = privacy_measure(main_q, s.target);
  if (s.separable() && !s.noise) {
    try {
      rep.zone = classify_zone(s.target, s.partition.node_sizes());
    } catch (const std::invalid_argument&) {
    }
  }
  out["privacy"] = privacy_to_json(rep);
  emit_json(opts, out);
  return kExitOk;
}

int cmd_privacy(CommonOpts& opts) { return cmd_qfi(opts); }

int cmd_zone(CommonOpts& opts) {
  Scenario s = load_scenario(opts);
  json out = scenario_header(s);
  out["zone"] = zone_name(classify_zone(s.target, s.partition.node_sizes()));
  emit_json(opts, out);
  return kExitOk;
}

int cmd_families(CommonOpts& opts) {
  Scenario s = load_scenario(opts);
  std::vector<IntVec> specs;
  try {
    specs = enumerate_family_specs(s.partition, s.target);
  } catch (const std::invalid_argument&) {
    std::cerr << "no private family exists in this zone (resources below the target)\n";
    return kExitInfeasible;
  }
  json out = scenario_header(s);
  out["count"] = specs.size();
  json list = json::array();
  for (const IntVec& d : specs) {
    json item;
    item["d"] = d;
    IntVec high = vec_add(s.target.coeffs(), d);
    item["class_sizes"] = {class_representatives(s.partition, d).size(),
                           class_representatives(s.partition, high).size()};
    if (s.partition.total() <= 8) {
      FamilySpec f{s.partition, s.target, d};
      StateVector member = build_family_state(f);
      json amps = json::array();
      for (Eigen::Index i = 0; i < member.dim(); ++i) {
        amps.push_back({member.amp(i).real(), member.amp(i).imag()});
      }
      item["sample_state"] = std::move(amps);
    }
    list.push_back(std::move(item));
  }
  out["families"] = std::move(list);
  emit_json(opts, out);
  return kExitOk;
}

int cmd_scan(CommonOpts& opts) {
  Scenario s = load_scenario(opts);
  if (!s.scan) throw SchemaError("schema error at /scan: scan parameters are required");
  if (!s.separable()) throw SchemaError("schema error at /dynamics: scans need separable dynamics");
  StateVector psi = build_probe_state(s);
  DensityMatrix rho = DensityMatrix::pure(psi);
  RobustnessCurve curve = robustness_scan(rho, s.scan->kind, s.scan->grid,
                                          std::get<SeparableDynamics>(s.dynamics), s.partition,
                                          s.target, s.scan->loss_order);
  if (opts.format == "csv")
    emit(opts, curve_to_csv(curve));
  else
    emit_json(opts, curve_to_json(curve));
  return kExitOk;
}

int cmd_search(CommonOpts& opts) {
  Scenario s = load_scenario(opts);
  if (!s.separable()) throw SchemaError("schema error at /dynamics: search needs separable dynamics");
  SearchResult res = search_max_privacy(s.partition, std::get<SeparableDynamics>(s.dynamics),
                                        s.target, s.search);
  json out = scenario_header(s);
  out["best_privacy"] = res.best_privacy;
  out["converged"] = res.converged;
  out["restarts"] = s.search.restarts;
  out["budget"] = s.search.budget;
  out["seed"] = s.seed;
  json amps = json::array();
  for (Eigen::Index i = 0; i < res.best_state->dim(); ++i)
    amps.push_back({res.best_state->amp(i).real(), res.best_state->amp(i).imag()});
  out["best_state"] = std::move(amps);
  emit_json(opts, out);
  return kExitOk;
}

int cmd_orthotope(CommonOpts& opts) {
  Scenario s = load_scenario(opts);
  if (s.separable()) throw SchemaError("schema error at /dynamics: orthotopes need general dynamics");
  const auto& dyn = std::get<GeneralDynamics>(s.dynamics);
  Orthotope o = build_orthotope(dyn);
  json out = scenario_header(s);
  json pts = json::array();
  for (const auto& pt : o.points) {
    json row = json::array();
    for (Eigen::Index i = 0; i < pt.c.size(); ++i) row.push_back(pt.c[i]);
    pts.push_back(std::move(row));
  }
  out["O"] = std::move(pts);
  json diffs = json::array();
  for (const auto& d : o.diffs) {
    json row = json::array();
    for (Eigen::Index i = 0; i < d.size(); ++i) row.push_back(d[i]);
    diffs.push_back(std::move(row));
  }
  out["O2minus"] = std::move(diffs);

  std::optional<OrthotopeWitness> w = target_in_O2minus(s.target, o);
  if (!w) {
    emit_json(opts, out);
    std::cerr << "no private state exists for this target (outside the difference set)\n";
    return kExitInfeasible;
  }
  json witness;
  witness["alpha"] = w->alpha;
  json ci = json::array(), cj = json::array();
  for (Eigen::Index i = 0; i < w->ci.c.size(); ++i) {
    ci.push_back(w->ci.c[i]);
    cj.push_back(w->cj.c[i]);
  }
  witness["ci"] = std::move(ci);
  witness["cj"] = std::move(cj);
  witness["label_i"] = w->ci.label;
  witness["label_j"] = w->cj.label;
  out["witness"] = std::move(witness);
  emit_json(opts, out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy analysis for distributed quantum sensing probes"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", opts.scenario_path, "Scenario JSON file")->required();
    cmd->add_option("--out", opts.out_path, "Output file (default stdout)");
    cmd->add_option("--format", opts.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", opts.seed, "Override the scenario RNG seed");
    cmd->add_option("--restarts", opts.restarts, "Override search restarts");
    cmd->add_option("--grid", opts.grid_spec, "Override scan grid: v1,v2,... or start:stop:step");
  };

  auto* qfi = app.add_subcommand("qfi", "QFI matrices, privacy and zone for a scenario");
  auto* privacy = app.add_subcommand("privacy", "Privacy report for a scenario");
  auto* families = app.add_subcommand("families", "Enumerate private families");
  auto* scan = app.add_subcommand("scan", "Robustness sweep over a noise grid");
  auto* search = app.add_subcommand("search", "Randomized search for the most private state");
  auto* orthotope = app.add_subcommand("orthotope", "Eigenvalue orthotope and target witness");
  auto* zone = app.add_subcommand("zone", "Resource zone classification");
  for (auto* c : {qfi, privacy, families, scan, search, orthotope, zone}) add_common(c);

  CLI11_PARSE(app, argc, argv);

  try {
    if (qfi->parsed()) return cmd_qfi(opts);
    if (privacy->parsed()) return cmd_privacy(opts);
    if (families->parsed()) return cmd_families(opts);
    if (scan->parsed()) return cmd_scan(opts);
    if (search->parsed()) return cmd_search(opts);
    if (orthotope->parsed()) return cmd_orthotope(opts);
    if (zone->parsed()) return cmd_zone(opts);
  } catch (const SchemaError& e) {
    std::cerr << e.what() << "\n";
    return kExitSchema;
  } catch (const ZeroInformationError& e) {
    std::cerr << e.what() << "\n";
    return kExitZeroInformation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
