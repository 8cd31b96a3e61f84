#include "qsense/noise.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qsense/parallel.hpp"

namespace qsense {

namespace {

Eigen::MatrixXd outer_from(const Eigen::VectorXd& v) { return v * v.transpose(); }

Eigen::VectorXd as_double(const IntVec& v) {
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = static_cast<double>(v[i]);
  return out;
}

// Applies a one-qubit Kraus set to the density matrix.
CMat apply_kraus(const CMat& rho, const std::vector<Eigen::Matrix2cd>& kraus, int qubit, int n) {
  Eigen::Index dim = Eigen::Index{1} << n;
  CMat out = CMat::Zero(dim, dim);
  for (const auto& k : kraus) {
    CMat term = rho;
    // K rho K^dag: K on the columns, then conj(K) on the rows.
    for (Eigen::Index c = 0; c < dim; ++c) {
      CVec col = term.col(c);
      apply_single_qubit_raw(col, k, qubit);
      term.col(c) = col;
    }
    for (Eigen::Index r = 0; r < dim; ++r) {
      CVec row = term.row(r).transpose();
      apply_single_qubit_raw(row, k.conjugate(), qubit);
      term.row(r) = row.transpose();
    }
    out += term;
  }
  return out;
}

}  // namespace

std::string channel_name(ChannelKind k) {
  switch (k) {
    case ChannelKind::Dephasing: return "dephasing";
    case ChannelKind::BitFlip: return "bitflip";
    case ChannelKind::Depolarizing: return "depolarizing";
    case ChannelKind::AmplitudeDamping: return "amplitude-damping";
    case ChannelKind::Loss: return "loss";
  }
  return "?";
}

ChannelSpec ChannelSpec::uniform(ChannelKind kind, int n, double p) {
  ChannelSpec c;
  c.kind = kind;
  c.probs.assign(static_cast<std::size_t>(n), p);
  return c;
}

void ChannelSpec::validate(int n) const {
  if (kind == ChannelKind::Loss) {
    if (static_cast<int>(loss_mask.size()) != n)
      throw std::invalid_argument("ChannelSpec: loss mask must cover every qubit");
    bool all = true;
    for (bool b : loss_mask) all = all && b;
    if (all && !allow_total_loss) throw std::invalid_argument("ChannelSpec: total loss not allowed");
    return;
  }
  if (static_cast<int>(probs.size()) != n)
    throw std::invalid_argument("ChannelSpec: one probability per qubit required");
  for (double p : probs)
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("ChannelSpec: probabilities must be in [0, 1]");
}

DensityMatrix apply_channel(const DensityMatrix& rho, const ChannelSpec& c) {
  int n = rho.qubits();
  c.validate(n);

  if (c.kind == ChannelKind::Loss) {
    std::vector<int> traced;
    for (int q = 0; q < n; ++q)
      if (c.loss_mask[static_cast<std::size_t>(q)]) traced.push_back(q);
    return partial_trace(rho, traced);
  }

  CMat m = rho.mat();
  for (int q = 0; q < n; ++q) {
    double p = c.probs[static_cast<std::size_t>(q)];
    std::vector<Eigen::Matrix2cd> kraus;
    Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd x, y, z;
    x << 0, 1, 1, 0;
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    z << 1, 0, 0, -1;
    switch (c.kind) {
      case ChannelKind::Dephasing:
        kraus = {std::sqrt(1 - p) * id, std::sqrt(p) * z};
        break;
      case ChannelKind::BitFlip:
        kraus = {std::sqrt(1 - p) * id, std::sqrt(p) * x};
        break;
      case ChannelKind::Depolarizing:
        // Keep with p, each Pauli with (1 - p) / 3.
        kraus = {std::sqrt(p) * id, std::sqrt((1 - p) / 3) * x, std::sqrt((1 - p) / 3) * y,
                 std::sqrt((1 - p) / 3) * z};
        break;
      case ChannelKind::AmplitudeDamping: {
        Eigen::Matrix2cd k0, k1;
        k0 << 1, 0, 0, std::sqrt(1 - p);
        k1 << 0, std::sqrt(p), 0, 0;
        kraus = {k0, k1};
        break;
      }
      case ChannelKind::Loss:
        break;  // handled above
    }
    m = apply_kraus(m, kraus, q, n);
  }
  return DensityMatrix(std::move(m), n);
}

double weight_function_g(const std::vector<double>& p, const BitString& j) {
  if (static_cast<int>(p.size()) != j.size())
    throw std::invalid_argument("weight_function_g: length mismatch");
  double g = 1.0;
  for (int i = 0; i < j.size(); ++i)
    g *= j.bit(i) ? p[static_cast<std::size_t>(i)] : 1.0 - p[static_cast<std::size_t>(i)];
  return g;
}

QfiMatrix predict_dephasing_qfi(const std::vector<double>& p, const TargetFunction& a) {
  // lambda_+ - lambda_- = E(p) - O(p) = prod (1 - 2 p_i).
  double diff = 1.0;
  for (double pi : p) diff *= 1.0 - 2.0 * pi;
  Eigen::VectorXd av = as_double(a.coeffs());
  QfiMatrix q;
  q.m = 4.0 * diff * diff * outer_from(av);
  q.provenance = QfiProvenance::MixedEig;
  q.theta.assign(static_cast<std::size_t>(a.size()), 0.0);
  return q;
}

QfiMatrix predict_bitflip_qfi(const std::vector<double>& p, const ResourcePartition& part) {
  int n = part.total();
  if (static_cast<int>(p.size()) != n)
    throw std::invalid_argument("predict_bitflip_qfi: one probability per qubit required");
  int k = part.node_count();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(k, k);
  for (std::uint64_t j = 0; j < (std::uint64_t{1} << (n - 1)); ++j) {
    BitString s(j, n);
    double lambda = weight_function_g(p, s) + weight_function_g(p, s.complement());
    Eigen::VectorXd h = as_double(hamming_vec_sym(s, part));
    q += 4.0 * lambda * outer_from(h);
  }
  QfiMatrix out;
  out.m = std::move(q);
  out.provenance = QfiProvenance::MixedEig;
  out.theta.assign(static_cast<std::size_t>(k), 0.0);
  return out;
}

QfiMatrix predict_depolarizing_qfi(const std::vector<double>& p, const TargetFunction& a) {
  // Populations and coherence of the surviving GHZ block:
  //   lambda_0^+ + lambda_0^- = prod((1 + 2p_i)/3) + prod(2(1 - p_i)/3)
  //   lambda_0^+ - lambda_0^- = prod((4p_i - 1)/3)
  double sum = 1.0, sum2 = 1.0, diff = 1.0;
  for (double pi : p) {
    sum *= (1.0 + 2.0 * pi) / 3.0;
    sum2 *= 2.0 * (1.0 - pi) / 3.0;
    diff *= (4.0 * pi - 1.0) / 3.0;
  }
  double denom = sum + sum2;
  Eigen::VectorXd av = as_double(a.coeffs());
  QfiMatrix q;
  q.m = denom > 0 ? Eigen::MatrixXd(4.0 * diff * diff / denom * outer_from(av))
                  : Eigen::MatrixXd::Zero(a.size(), a.size());
  q.provenance = QfiProvenance::MixedEig;
  q.theta.assign(static_cast<std::size_t>(a.size()), 0.0);
  return q;
}

QfiMatrix predict_amplitude_damping_qfi(const std::vector<double>& p, const TargetFunction& a) {
  // 2x2 block of the noisy state on span{|0...0>, |1...1>}, including the
  // 1/2 weight of the GHZ branches.
  double prod_p = 1.0, prod_1mp = 1.0, prod_sqrt = 1.0;
  for (double pi : p) {
    prod_p *= pi;
    prod_1mp *= 1.0 - pi;
    prod_sqrt *= std::sqrt(1.0 - pi);
  }
  Eigen::Matrix2d block;
  block << 0.5 * (1.0 + prod_p), 0.5 * prod_sqrt, 0.5 * prod_sqrt, 0.5 * prod_1mp;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(block);
  double lm = es.eigenvalues()[0], lp = es.eigenvalues()[1];
  Eigen::Vector2d vm = es.eigenvectors().col(0), vp = es.eigenvectors().col(1);
  // <g+|sigma_z|g-> in the logical {|0...0>, |1...1>} basis.
  double overlap = vp[0] * vm[0] - vp[1] * vm[1];

  Eigen::VectorXd av = as_double(a.coeffs());
  QfiMatrix q;
  double denom = lp + lm;
  double factor = denom > 1e-15 ? 4.0 * (lp - lm) * (lp - lm) / denom * overlap * overlap : 0.0;
  q.m = factor * outer_from(av);
  q.provenance = QfiProvenance::MixedEig;
  q.theta.assign(static_cast<std::size_t>(a.size()), 0.0);
  return q;
}

LossReport loss_analysis(const FamilySpec& f, const std::vector<int>& lost_qubits) {
  const ResourcePartition& p = f.partition;
  StateVector psi = build_family_state(f);
  DensityMatrix rho = DensityMatrix::pure(psi);

  ChannelSpec loss;
  loss.kind = ChannelKind::Loss;
  loss.loss_mask.assign(static_cast<std::size_t>(p.total()), false);
  for (int q : lost_qubits) {
    if (q < 0 || q >= p.total()) throw std::invalid_argument("loss_analysis: qubit index out of range");
    loss.loss_mask[static_cast<std::size_t>(q)] = true;
  }
  DensityMatrix reduced = apply_channel(rho, loss);

  IntVec survivors = p.node_sizes();
  for (int q = 0; q < p.total(); ++q)
    if (loss.loss_mask[static_cast<std::size_t>(q)]) --survivors[static_cast<std::size_t>(p.node_of(q))];
  ResourcePartition sp(survivors);

  LossReport rep{false, false, 0.0, std::nullopt, sp};
  rep.below_minimal = !vec_leq(f.a.coeffs(), survivors);

  SeparableDynamics dyn = SeparableDynamics::all_z(sp.total());
  QfiMatrix q = qfi_mixed_eig(reduced, dyn, sp);
  rep.trace_q = q.m.trace();
  try {
    rep.report = privacy_measure(q, f.a);
  } catch (const ZeroInformationError&) {
    rep.zero_information = true;
  }
  return rep;
}

RobustnessCurve robustness_scan(const DensityMatrix& probe, ChannelKind kind,
                                const std::vector<double>& grid, const SeparableDynamics& dyn,
                                const ResourcePartition& p, const TargetFunction& a,
                                const std::vector<int>& loss_order) {
  dyn.validate(p);
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("robustness_scan: grid must increase");

  std::vector<int> order = loss_order;
  if (kind == ChannelKind::Loss) {
    if (order.empty())
      for (int q = 0; q < p.total(); ++q) order.push_back(q);
    for (double g : grid) {
      int count = static_cast<int>(std::llround(g));
      if (count < 0 || count > static_cast<int>(order.size()))
        throw std::invalid_argument("robustness_scan: loss count out of range");
    }
  } else {
    for (double g : grid)
      if (!(g >= 0.0 && g <= 1.0))
        throw std::invalid_argument("robustness_scan: probabilities must be in [0, 1]");
  }

  Eigen::VectorXd a_hat = a.normalized();
  RobustnessCurve curve;
  curve.kind = kind;
  curve.points.resize(grid.size());

  parallel_for(grid.size(), [&](std::size_t i) {
    double g = grid[i];
    DensityMatrix noisy = probe;
    ResourcePartition sp = p;
    SeparableDynamics sd = dyn;
    if (kind == ChannelKind::Loss) {
      int count = static_cast<int>(std::llround(g));
      std::vector<int> lost(order.begin(), order.begin() + count);
      ChannelSpec c;
      c.kind = ChannelKind::Loss;
      c.loss_mask.assign(static_cast<std::size_t>(p.total()), false);
      for (int q : lost) c.loss_mask[static_cast<std::size_t>(q)] = true;
      noisy = apply_channel(probe, c);
      IntVec survivors = p.node_sizes();
      for (int q : lost) --survivors[static_cast<std::size_t>(p.node_of(q))];
      sp = ResourcePartition(survivors);
      sd = SeparableDynamics::all_z(sp.total());
    } else {
      noisy = apply_channel(probe, ChannelSpec::uniform(kind, p.total(), g));
    }
    QfiMatrix q = qfi_mixed_eig(noisy, sd, sp);
    RobustnessPoint pt;
    pt.p = g;
    pt.qfi = q.m;
    pt.trace_qfi = q.m.trace();
    pt.q_along_a = a_hat.dot(q.m * a_hat);
    pt.privacy = pt.trace_qfi > 1e-14 ? pt.q_along_a / pt.trace_qfi
                                      : std::numeric_limits<double>::quiet_NaN();
    curve.points[i] = std::move(pt);
  });
  return curve;
}

}  // namespace qsense
