#include "qsense/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace qsense {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw SchemaError("schema error at " + field + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) fail(ctx + "/" + key, "missing field");
  return j.at(key);
}

Complex parse_complex(const json& j, const std::string& ctx) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  fail(ctx, "expected a number or [re, im]");
}

std::vector<Complex> parse_complex_list(const json& j, const std::string& ctx) {
  if (!j.is_array()) fail(ctx, "expected an array");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_complex(j[i], ctx + "[" + std::to_string(i) + "]"));
  return out;
}

IntVec parse_int_vec(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty()) fail(ctx, "expected a non-empty integer array");
  IntVec out;
  for (const auto& e : j) {
    if (!e.is_number_integer()) fail(ctx, "expected integers");
    out.push_back(e.get<long long>());
  }
  return out;
}

TargetFunction parse_target(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty()) fail(ctx, "expected a non-empty array");
  bool rational = false;
  for (const auto& e : j)
    if (e.is_string()) rational = true;
  try {
    if (!rational) return TargetFunction::from_integers(parse_int_vec(j, ctx));
    std::vector<std::pair<long long, long long>> fracs;
    for (const auto& e : j) {
      if (e.is_number_integer()) {
        fracs.emplace_back(e.get<long long>(), 1);
      } else if (e.is_string()) {
        std::string s = e.get<std::string>();
        auto slash = s.find('/');
        if (slash == std::string::npos) fail(ctx, "rational entries use the form \"p/q\"");
        fracs.emplace_back(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
      } else {
        fail(ctx, "expected integers or \"p/q\" strings");
      }
    }
    return TargetFunction::from_rationals(fracs);
  } catch (const std::invalid_argument& e) {
    fail(ctx, e.what());
  }
}

std::variant<SeparableDynamics, GeneralDynamics> parse_dynamics(const json& j,
                                                                const ResourcePartition& p,
                                                                const std::string& ctx) {
  if (!j.is_object()) fail(ctx, "expected an object");
  std::string kind = require(j, "kind", ctx).get<std::string>();
  try {
    if (kind == "separable") {
      SeparableDynamics d;
      const json& axes = require(j, "axes", ctx);
      if (axes.is_string()) {
        std::string s = axes.get<std::string>();
        if (s.size() != 1) fail(ctx + "/axes", "expected one of X, Y, Z");
        d = SeparableDynamics::all_letter(pauli_from_char(s[0]), p.total());
      } else if (axes.is_array()) {
        for (std::size_t q = 0; q < axes.size(); ++q) {
          const json& a = axes[q];
          if (a.is_string()) {
            std::string s = a.get<std::string>();
            SeparableDynamics one = SeparableDynamics::all_letter(pauli_from_char(s.at(0)), 1);
            d.axes.push_back(one.axes[0]);
          } else if (a.is_array() && a.size() == 3) {
            d.axes.emplace_back(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
            d.axes.back().normalize();
          } else {
            fail(ctx + "/axes", "expected letters or [x, y, z] triples");
          }
        }
      } else {
        fail(ctx + "/axes", "expected a letter or an array");
      }
      if (j.contains("node_times")) {
        for (const auto& t : j.at("node_times")) d.node_times.push_back(t.get<double>());
      }
      d.validate(p);
      return d;
    }
    if (kind == "general") {
      const json& nodes = require(j, "nodes", ctx);
      if (!nodes.is_array() || static_cast<int>(nodes.size()) != p.node_count())
        fail(ctx + "/nodes", "expected one Pauli-sum text per node");
      GeneralDynamics d;
      for (int mu = 0; mu < p.node_count(); ++mu)
        d.nodes.push_back(NodeHamiltonian::parse(static_cast<int>(p.node_sizes()[static_cast<std::size_t>(mu)]),
                                                 nodes[static_cast<std::size_t>(mu)].get<std::string>()));
      d.validate(p);
      return d;
    }
  } catch (const std::invalid_argument& e) {
    fail(ctx, e.what());
  }
  fail(ctx + "/kind", "expected \"separable\" or \"general\"");
}

ChannelKind parse_channel_kind(const std::string& s, const std::string& ctx) {
  if (s == "dephasing") return ChannelKind::Dephasing;
  if (s == "bitflip") return ChannelKind::BitFlip;
  if (s == "depolarizing") return ChannelKind::Depolarizing;
  if (s == "amplitude-damping") return ChannelKind::AmplitudeDamping;
  if (s == "loss") return ChannelKind::Loss;
  fail(ctx, "unknown channel kind: " + s);
}

ChannelSpec parse_noise(const json& j, const ResourcePartition& p, const std::string& ctx) {
  ChannelSpec c;
  c.kind = parse_channel_kind(require(j, "kind", ctx).get<std::string>(), ctx + "/kind");
  if (c.kind == ChannelKind::Loss) {
    c.loss_mask.assign(static_cast<std::size_t>(p.total()), false);
    const json& lost = require(j, "lost", ctx);
    for (const auto& e : lost) {
      long long q = e.get<long long>();
      if (q < 0 || q >= p.total()) fail(ctx + "/lost", "qubit index out of range");
      c.loss_mask[static_cast<std::size_t>(q)] = true;
    }
  } else {
    const json& pj = require(j, "p", ctx);
    if (pj.is_number()) {
      c.probs.assign(static_cast<std::size_t>(p.total()), pj.get<double>());
    } else if (pj.is_array()) {
      for (const auto& e : pj) c.probs.push_back(e.get<double>());
    } else {
      fail(ctx + "/p", "expected a number or an array");
    }
    // Depolarizing defaults to the keep-probability convention; an explicit
    // flag switches to the complementary error rate.
    if (c.kind == ChannelKind::Depolarizing && j.value("error_rate", false))
      for (double& v : c.probs) v = 1.0 - v;
  }
  try {
    c.validate(p.total());
  } catch (const std::invalid_argument& e) {
    fail(ctx, e.what());
  }
  return c;
}

}  // namespace

Scenario parse_scenario_json(const json& j) {
  if (!j.is_object()) throw SchemaError("schema error at /: expected an object");
  Scenario s;
  try {
    s.partition = ResourcePartition(parse_int_vec(require(j, "partition", ""), "/partition"));
  } catch (const std::invalid_argument& e) {
    fail("/partition", e.what());
  }
  s.target = parse_target(require(j, "target", ""), "/target");
  if (s.target.size() != s.partition.node_count())
    fail("/target", "length does not match the partition");

  if (j.contains("dynamics")) {
    s.dynamics = parse_dynamics(j.at("dynamics"), s.partition, "/dynamics");
  } else {
    s.dynamics = SeparableDynamics::all_z(s.partition.total());
  }

  if (j.contains("state")) {
    const json& st = j.at("state");
    std::string kind = require(st, "kind", "/state").get<std::string>();
    try {
      if (kind == "ghz") {
        s.state_kind = Scenario::StateKind::Ghz;
        if (st.contains("alpha")) s.ghz_alpha = parse_complex(st.at("alpha"), "/state/alpha");
        if (st.contains("beta")) s.ghz_beta = parse_complex(st.at("beta"), "/state/beta");
        double norm = std::sqrt(std::norm(s.ghz_alpha) + std::norm(s.ghz_beta));
        if (norm < 1e-12) fail("/state", "alpha and beta are both zero");
        s.ghz_alpha /= norm;
        s.ghz_beta /= norm;
      } else if (kind == "family") {
        s.state_kind = Scenario::StateKind::Family;
        FamilySpec f{s.partition, s.target, parse_int_vec(require(st, "d", "/state"), "/state/d")};
        if (st.contains("alpha") || st.contains("beta")) {
          f.alpha = parse_complex(require(st, "alpha", "/state"), "/state/alpha");
          f.beta = parse_complex(require(st, "beta", "/state"), "/state/beta");
          double norm = std::sqrt(std::norm(f.alpha) + std::norm(f.beta));
          if (norm < 1e-12) fail("/state", "alpha and beta are both zero");
          f.alpha /= norm;
          f.beta /= norm;
        }
        if (st.contains("amps_low")) f.amps_low = parse_complex_list(st.at("amps_low"), "/state/amps_low");
        if (st.contains("amps_high")) f.amps_high = parse_complex_list(st.at("amps_high"), "/state/amps_high");
        build_family_state(f);  // validates bounds and amplitude counts
        s.family = std::move(f);
      } else if (kind == "logical") {
        s.state_kind = Scenario::StateKind::Logical;
        LogicalSpec l{s.target, {}, {}};
        const json& blocks = require(st, "blocks", "/state");
        for (std::size_t b = 0; b < blocks.size(); ++b) {
          std::string ctx = "/state/blocks[" + std::to_string(b) + "]";
          LogicalBlock bl{ResourcePartition(parse_int_vec(require(blocks[b], "partition", ctx), ctx + "/partition")),
                          parse_int_vec(require(blocks[b], "d", ctx), ctx + "/d")};
          if (blocks[b].contains("amps_low"))
            bl.amps_low = parse_complex_list(blocks[b].at("amps_low"), ctx + "/amps_low");
          if (blocks[b].contains("amps_high"))
            bl.amps_high = parse_complex_list(blocks[b].at("amps_high"), ctx + "/amps_high");
          l.blocks.push_back(std::move(bl));
        }
        l.amplitudes = parse_complex_list(require(st, "amplitudes", "/state"), "/state/amplitudes");
        if (l.total_partition().node_sizes() != s.partition.node_sizes())
          fail("/state/blocks", "block resources do not sum to the partition");
        build_logical_state(l);  // validates
        s.logical = std::move(l);
      } else if (kind == "explicit") {
        s.state_kind = Scenario::StateKind::Explicit;
        std::vector<Complex> amps =
            parse_complex_list(require(st, "amplitudes", "/state"), "/state/amplitudes");
        if (static_cast<Eigen::Index>(amps.size()) != (Eigen::Index{1} << s.partition.total()))
          fail("/state/amplitudes", "expected 2^n amplitudes");
        CVec v(static_cast<Eigen::Index>(amps.size()));
        for (std::size_t i = 0; i < amps.size(); ++i) v[static_cast<Eigen::Index>(i)] = amps[i];
        s.explicit_state = StateVector(std::move(v), s.partition.total());
      } else if (kind == "stabilizer") {
        s.state_kind = Scenario::StateKind::Stabilizer;
        Tableau t = Tableau::parse(require(st, "tableau", "/state").get<std::string>());
        if (t.qubits() != s.partition.total()) fail("/state/tableau", "qubit count does not match partition");
        s.tableau = std::move(t);
      } else {
        fail("/state/kind", "unknown state kind: " + kind);
      }
    } catch (const std::invalid_argument& e) {
      fail("/state", e.what());
    }
  }

  if (j.contains("noise")) s.noise = parse_noise(j.at("noise"), s.partition, "/noise");

  if (j.contains("scan")) {
    const json& sc = j.at("scan");
    ScanSpec spec;
    spec.kind = parse_channel_kind(require(sc, "kind", "/scan").get<std::string>(), "/scan/kind");
    for (const auto& g : require(sc, "grid", "/scan")) spec.grid.push_back(g.get<double>());
    if (sc.contains("loss_order"))
      for (const auto& q : sc.at("loss_order")) spec.loss_order.push_back(q.get<int>());
    s.scan = std::move(spec);
  }

  if (j.contains("search")) {
    const json& se = j.at("search");
    if (se.contains("restarts")) s.search.restarts = se.at("restarts").get<int>();
    if (se.contains("budget")) s.search.budget = se.at("budget").get<int>();
    if (s.search.restarts < 1 || s.search.budget < 1) fail("/search", "restarts and budget must be positive");
  }
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  s.search.seed = s.seed;
  return s;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("schema error at /: cannot open scenario file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("schema error at /: ") + e.what());
  }
  return parse_scenario_json(j);
}

StateVector build_probe_state(const Scenario& s) {
  switch (s.state_kind) {
    case Scenario::StateKind::Ghz:
      return ghz(s.partition, s.ghz_alpha, s.ghz_beta);
    case Scenario::StateKind::Family:
      return build_family_state(*s.family);
    case Scenario::StateKind::Logical:
      return build_logical_state(*s.logical);
    case Scenario::StateKind::Explicit:
      return *s.explicit_state;
    case Scenario::StateKind::Stabilizer:
      return s.tableau->to_state();
    case Scenario::StateKind::None:
      break;
  }
  throw SchemaError("schema error at /state: a state is required for this command");
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

nlohmann::json qfi_to_json(const QfiMatrix& q) {
  json out;
  out["k"] = q.k();
  out["provenance"] = provenance_name(q.provenance);
  json entries = json::array();
  for (int i = 0; i < q.k(); ++i)
    for (int j = 0; j < q.k(); ++j) entries.push_back(q.m(i, j));
  out["entries"] = std::move(entries);
  if (q.rank_change_warning) out["rank_change_warning"] = true;
  return out;
}

nlohmann::json privacy_to_json(const PrivacyReport& r) {
  json out;
  out["value"] = r.privacy;
  out["trace_qfi"] = r.trace_q;
  out["residual"] = r.residual;
  out["private"] = r.is_private();
  out["target"] = r.target;
  if (r.zone) out["zone"] = zone_name(*r.zone);
  json evs = json::array();
  for (Eigen::Index i = 0; i < r.qfi_eigenvalues.size(); ++i) evs.push_back(r.qfi_eigenvalues[i]);
  out["qfi_eigenvalues"] = std::move(evs);
  return out;
}

nlohmann::json curve_to_json(const RobustnessCurve& c) {
  json out;
  out["channel"] = channel_name(c.kind);
  json pts = json::array();
  for (const auto& pt : c.points) {
    json row;
    row["p"] = pt.p;
    if (std::isnan(pt.privacy))
      row["privacy"] = nullptr;
    else
      row["privacy"] = pt.privacy;
    row["trace_qfi"] = pt.trace_qfi;
    row["q_along_a"] = pt.q_along_a;
    json entries = json::array();
    for (Eigen::Index i = 0; i < pt.qfi.rows(); ++i)
      for (Eigen::Index j = 0; j < pt.qfi.cols(); ++j) entries.push_back(pt.qfi(i, j));
    row["qfi"] = std::move(entries);
    pts.push_back(std::move(row));
  }
  out["points"] = std::move(pts);
  return out;
}

std::string curve_to_csv(const RobustnessCurve& c) {
  std::string out = "p,privacy,trace_qfi,q_along_a\n";
  for (const auto& pt : c.points) {
    out += format_double(pt.p);
    out += ',';
    out += std::isnan(pt.privacy) ? "nan" : format_double(pt.privacy);
    out += ',';
    out += format_double(pt.trace_qfi);
    out += ',';
    out += format_double(pt.q_along_a);
    out += '\n';
  }
  return out;
}

}  // namespace qsense
