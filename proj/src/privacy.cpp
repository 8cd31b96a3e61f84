#include "qsense/privacy.hpp"

#include <array>
#include <cmath>
#include <random>

#include "qsense/parallel.hpp"

namespace qsense {

namespace {

constexpr double kZeroInformation = 1e-14;

// Reusable derivative-free maximizer: coordinate pattern search with step
// halving, accept-if-improve. Runs entirely on the given parameter vector.
struct PatternSearch {
  int budget;
  double initial_step = 0.5;
  double min_step = 1e-10;

  template <typename F>
  std::pair<double, bool> maximize(std::vector<double>& x, F&& objective) const {
    int evals = 0;
    double best = objective(x);
    ++evals;
    double step = initial_step;
    while (evals < budget && step > min_step) {
      bool improved = false;
      for (std::size_t i = 0; i < x.size() && evals < budget; ++i) {
        for (double sign : {1.0, -1.0}) {
          double saved = x[i];
          x[i] = saved + sign * step;
          double cand = objective(x);
          ++evals;
          if (cand > best) {
            best = cand;
            improved = true;
            break;
          }
          x[i] = saved;
          if (evals >= budget) break;
        }
      }
      if (!improved) step *= 0.5;
    }
    return {best, step <= min_step};
  }
};

StateVector params_to_state(const std::vector<double>& x, int n) {
  Eigen::Index dim = Eigen::Index{1} << n;
  CVec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    v[i] = Complex(x[static_cast<std::size_t>(2 * i)], x[static_cast<std::size_t>(2 * i + 1)]);
  if (v.norm() < 1e-9) v[0] = 1.0;
  return StateVector(std::move(v), n);
}

double privacy_value_or_zero(const QfiMatrix& q, const Eigen::VectorXd& a_hat) {
  double tr = q.m.trace();
  if (tr <= kZeroInformation) return 0.0;
  return a_hat.dot(q.m * a_hat) / tr;
}

Eigen::Matrix2cd su2_from_params(double ax, double ay, double az) {
  Eigen::Vector3d axis(ax, ay, az);
  double angle = axis.norm();
  if (angle < 1e-14) return Eigen::Matrix2cd::Identity();
  axis /= angle;
  Eigen::Matrix2cd sigma;
  sigma << axis.z(), Complex(axis.x(), -axis.y()), Complex(axis.x(), axis.y()), -axis.z();
  return std::cos(angle / 2) * Eigen::Matrix2cd::Identity() -
         Complex(0, 1) * std::sin(angle / 2) * sigma;
}

template <typename Dyn>
PrivacyReport verify_private_impl(const StateVector& psi, const Dyn& d, const ResourcePartition& p,
                                  const TargetFunction& a) {
  return privacy_measure(qfi_pure_dense(psi, d, p), a);
}

template <typename Dyn>
PrivacyReport verify_private_impl(const DensityMatrix& rho, const Dyn& d, const ResourcePartition& p,
                                  const TargetFunction& a) {
  return privacy_measure(qfi_mixed_eig(rho, d, p), a);
}

void attach_zone(PrivacyReport& r, const TargetFunction& a, const ResourcePartition& p) {
  try {
    r.zone = classify_zone(a, p.node_sizes());
  } catch (const std::invalid_argument&) {
    r.zone = std::nullopt;  // negative or improper targets carry no zone label
  }
}

}  // namespace

PrivacyReport privacy_measure(const QfiMatrix& q, const TargetFunction& a) {
  if (q.k() != a.size()) throw std::invalid_argument("privacy_measure: dimension mismatch");
  double tr = q.m.trace();
  if (tr <= kZeroInformation)
    throw ZeroInformationError("privacy_measure: no information available (tr Q ~ 0)");

  Eigen::VectorXd a_hat = a.normalized();
  PrivacyReport r;
  r.privacy = a_hat.dot(q.m * a_hat) / tr;
  r.target = a.coeffs();
  r.trace_q = tr;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.m);
  Eigen::Index k = q.m.rows();
  r.qfi_eigenvalues.resize(k);
  r.qfi_eigenvectors.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    r.qfi_eigenvalues[i] = es.eigenvalues()[k - 1 - i];
    r.qfi_eigenvectors.col(i) = es.eigenvectors().col(k - 1 - i);
  }
  Eigen::MatrixXd aligned = (a_hat.dot(q.m * a_hat)) * (a_hat * a_hat.transpose());
  r.residual = (q.m - aligned).norm();
  return r;
}

StateVector build_family_state(const FamilySpec& f) {
  const ResourcePartition& p = f.partition;
  const IntVec& n = p.node_sizes();
  if (f.a.size() != p.node_count() || static_cast<int>(f.d.size()) != p.node_count())
    throw std::invalid_argument("build_family_state: dimension mismatch");
  IntVec high = vec_add(f.a.coeffs(), f.d);
  for (int mu = 0; mu < p.node_count(); ++mu) {
    if (f.d[static_cast<std::size_t>(mu)] < 0)
      throw std::invalid_argument("build_family_state: d must be non-negative");
    if (high[static_cast<std::size_t>(mu)] > n[static_cast<std::size_t>(mu)])
      throw std::invalid_argument("build_family_state: a + d exceeds the resources");
  }
  if (std::abs(std::norm(f.alpha) + std::norm(f.beta) - 1.0) > 1e-10)
    throw std::invalid_argument("build_family_state: |alpha|^2 + |beta|^2 must be 1");
  if (std::abs(f.alpha) < 1e-12 || std::abs(f.beta) < 1e-12)
    throw std::invalid_argument("build_family_state: alpha and beta must be nonzero");

  auto class_sum = [&](const IntVec& w, const std::vector<Complex>& amps) {
    std::vector<BitString> strings = class_representatives(p, w);
    if (!amps.empty() && amps.size() != strings.size())
      throw std::invalid_argument("build_family_state: class amplitude count mismatch");
    CVec v = CVec::Zero(Eigen::Index{1} << p.total());
    double norm2 = 0.0;
    for (std::size_t i = 0; i < strings.size(); ++i) {
      Complex c = amps.empty() ? Complex(1.0, 0.0) : amps[i];
      v[static_cast<Eigen::Index>(strings[i].value())] = c;
      norm2 += std::norm(c);
    }
    if (norm2 < 1e-24) throw std::invalid_argument("build_family_state: class amplitudes all zero");
    return CVec(v / std::sqrt(norm2));
  };

  CVec v = f.alpha * class_sum(f.d, f.amps_low) + f.beta * class_sum(high, f.amps_high);
  return StateVector(std::move(v), p.total());
}

std::vector<IntVec> enumerate_family_specs(const ResourcePartition& p, const TargetFunction& a) {
  if (a.size() != p.node_count()) throw std::invalid_argument("enumerate_family_specs: dimension mismatch");
  IntVec b = vec_sub(p.node_sizes(), a.coeffs());
  for (long long x : b)
    if (x < 0)
      throw std::invalid_argument("enumerate_family_specs: resources below the target (no private family)");

  std::vector<IntVec> out{IntVec(b.size(), 0)};
  for (std::size_t mu = 0; mu < b.size(); ++mu) {
    std::vector<IntVec> next;
    next.reserve(out.size() * static_cast<std::size_t>(b[mu] + 1));
    for (const IntVec& prefix : out)
      for (long long dv = 0; dv <= b[mu]; ++dv) {
        IntVec d = prefix;
        d[mu] = dv;
        next.push_back(std::move(d));
      }
    out = std::move(next);
  }
  return out;
}

ResourcePartition LogicalSpec::total_partition() const {
  if (blocks.empty()) throw std::invalid_argument("LogicalSpec: no blocks");
  int k = blocks.front().partition.node_count();
  IntVec total(static_cast<std::size_t>(k), 0);
  for (const auto& bl : blocks) {
    if (bl.partition.node_count() != k) throw std::invalid_argument("LogicalSpec: node count mismatch");
    total = vec_add(total, bl.partition.node_sizes());
  }
  return ResourcePartition(total);
}

StateVector build_logical_state(const LogicalSpec& l) {
  std::size_t nblocks = l.blocks.size();
  if (nblocks == 0 || nblocks > 20) throw std::invalid_argument("build_logical_state: bad block count");
  if (l.amplitudes.size() != (std::size_t{1} << nblocks))
    throw std::invalid_argument("build_logical_state: need 2^blocks amplitudes");

  ResourcePartition total = l.total_partition();
  int k = total.node_count();

  // Global qubit index of block bl's local qubit q: node-major layout with
  // blocks kept in order inside each node.
  std::vector<std::vector<int>> block_to_global(nblocks);
  {
    std::vector<int> node_fill(static_cast<std::size_t>(k), 0);
    for (std::size_t bl = 0; bl < nblocks; ++bl) {
      const ResourcePartition& bp = l.blocks[bl].partition;
      block_to_global[bl].resize(static_cast<std::size_t>(bp.total()));
      for (int q = 0; q < bp.total(); ++q) {
        int mu = bp.node_of(q);
        auto [bfirst, blast] = bp.node_range(mu);
        (void)blast;
        int offset = q - bfirst;
        block_to_global[bl][static_cast<std::size_t>(q)] =
            total.node_range(mu).first + node_fill[static_cast<std::size_t>(mu)] + offset;
      }
      for (int mu = 0; mu < k; ++mu)
        node_fill[static_cast<std::size_t>(mu)] += static_cast<int>(bp.node_sizes()[static_cast<std::size_t>(mu)]);
    }
  }

  // Class strings and normalized amplitudes of each block's logical levels.
  struct Level {
    std::vector<BitString> strings;
    std::vector<Complex> amps;
  };
  auto make_level = [](const ResourcePartition& bp, const IntVec& w, const std::vector<Complex>& amps) {
    Level lv;
    lv.strings = class_representatives(bp, w);
    if (!amps.empty() && amps.size() != lv.strings.size())
      throw std::invalid_argument("build_logical_state: class amplitude count mismatch");
    double norm2 = 0.0;
    lv.amps.resize(lv.strings.size());
    for (std::size_t i = 0; i < lv.strings.size(); ++i) {
      lv.amps[i] = amps.empty() ? Complex(1.0, 0.0) : amps[i];
      norm2 += std::norm(lv.amps[i]);
    }
    if (norm2 < 1e-24) throw std::invalid_argument("build_logical_state: class amplitudes all zero");
    for (auto& c : lv.amps) c /= std::sqrt(norm2);
    return lv;
  };

  std::vector<std::array<Level, 2>> levels;
  levels.reserve(nblocks);
  for (const auto& bl : l.blocks) {
    IntVec high = vec_add(l.a.coeffs(), bl.d);
    if (!vec_leq(high, bl.partition.node_sizes()))
      throw std::invalid_argument("build_logical_state: block resources below a + d");
    levels.push_back({make_level(bl.partition, bl.d, bl.amps_low),
                      make_level(bl.partition, high, bl.amps_high)});
  }

  CVec v = CVec::Zero(Eigen::Index{1} << total.total());
  for (std::size_t j = 0; j < l.amplitudes.size(); ++j) {
    if (l.amplitudes[j] == Complex(0.0, 0.0)) continue;
    // Expand the product of the chosen level of every block.
    std::vector<std::size_t> idx(nblocks, 0);
    bool done = false;
    while (!done) {
      std::uint64_t global_bits = 0;
      Complex amp = l.amplitudes[j];
      for (std::size_t bl = 0; bl < nblocks; ++bl) {
        const Level& lv = levels[bl][(j >> bl) & 1];
        const BitString& s = lv.strings[idx[bl]];
        amp *= lv.amps[idx[bl]];
        for (int q = 0; q < s.size(); ++q)
          if (s.bit(q)) global_bits |= std::uint64_t{1} << block_to_global[bl][static_cast<std::size_t>(q)];
      }
      v[static_cast<Eigen::Index>(global_bits)] += amp;
      done = true;
      for (std::size_t bl = 0; bl < nblocks; ++bl) {
        if (++idx[bl] < levels[bl][(j >> bl) & 1].strings.size()) {
          done = false;
          break;
        }
        idx[bl] = 0;
      }
    }
  }
  return StateVector(std::move(v), total.total());
}

PrivacyReport verify_private(const StateVector& psi, const SeparableDynamics& d,
                             const ResourcePartition& p, const TargetFunction& a) {
  PrivacyReport r = verify_private_impl(psi, d, p, a);
  attach_zone(r, a, p);
  return r;
}

PrivacyReport verify_private(const StateVector& psi, const GeneralDynamics& d,
                             const ResourcePartition& p, const TargetFunction& a) {
  return verify_private_impl(psi, d, p, a);
}

PrivacyReport verify_private(const DensityMatrix& rho, const SeparableDynamics& d,
                             const ResourcePartition& p, const TargetFunction& a) {
  PrivacyReport r = verify_private_impl(rho, d, p, a);
  attach_zone(r, a, p);
  return r;
}

PrivacyReport verify_private(const DensityMatrix& rho, const GeneralDynamics& d,
                             const ResourcePartition& p, const TargetFunction& a) {
  return verify_private_impl(rho, d, p, a);
}

SearchResult search_max_privacy(const ResourcePartition& p, const SeparableDynamics& d,
                                const TargetFunction& a, const SearchOptions& opt) {
  d.validate(p);
  int n = p.total();
  if (n > 6) throw std::invalid_argument("search_max_privacy: capped at 6 qubits");
  Eigen::VectorXd a_hat = a.normalized();
  std::size_t dim = std::size_t{2} << n;  // 2 * 2^n real parameters

  auto objective = [&](const std::vector<double>& x) {
    StateVector psi = params_to_state(x, n);
    return privacy_value_or_zero(qfi_pure_dense(psi, d, p), a_hat);
  };

  struct RestartOutcome {
    double value = -1.0;
    std::vector<double> params;
    bool converged = false;
  };
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(opt.restarts));
  parallel_for(static_cast<std::size_t>(opt.restarts), [&](std::size_t r) {
    std::mt19937_64 rng(opt.seed * 0x9e3779b97f4a7c15ull + r);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(dim);
    for (double& xi : x) xi = gauss(rng);
    PatternSearch search{opt.budget};
    auto [value, converged] = search.maximize(x, objective);
    outcomes[r] = {value, std::move(x), converged};
  });

  SearchResult result;
  result.converged = true;
  std::size_t best_idx = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (outcomes[r].value > outcomes[best_idx].value) best_idx = r;
    result.converged = result.converged && outcomes[r].converged;
  }
  result.best_privacy = outcomes[best_idx].value;
  result.best_state = params_to_state(outcomes[best_idx].params, n);
  return result;
}

double max_fidelity_to_family_orbit(const StateVector& psi, const ResourcePartition& p,
                                    const TargetFunction& a, const IntVec& d,
                                    const SearchOptions& opt) {
  int n = p.total();
  if (psi.qubits() != n) throw std::invalid_argument("max_fidelity_to_family_orbit: qubit mismatch");
  // Parameters: 3 rotation parameters per qubit plus the (alpha, beta) split
  // (mixing angle and relative phase).
  std::size_t dim = static_cast<std::size_t>(3 * n) + 2;

  auto objective = [&](const std::vector<double>& x) {
    double chi = x[static_cast<std::size_t>(3 * n)];
    double phi = x[static_cast<std::size_t>(3 * n) + 1];
    Complex alpha = std::cos(chi);
    Complex beta = std::sin(chi) * std::exp(Complex(0, phi));
    if (std::abs(alpha) < 1e-6 || std::abs(beta) < 1e-6) return 0.0;
    FamilySpec f{p, a, d, alpha, beta, {}, {}};
    StateVector member = build_family_state(f);
    std::vector<Eigen::Matrix2cd> us;
    us.reserve(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q)
      us.push_back(su2_from_params(x[static_cast<std::size_t>(3 * q)], x[static_cast<std::size_t>(3 * q) + 1],
                                   x[static_cast<std::size_t>(3 * q) + 2]));
    StateVector rotated = apply_local_unitaries(member, us);
    return std::norm(psi.amps().dot(rotated.amps()));
  };

  std::vector<double> best_of(static_cast<std::size_t>(opt.restarts), 0.0);
  parallel_for(static_cast<std::size_t>(opt.restarts), [&](std::size_t r) {
    std::mt19937_64 rng(opt.seed * 0x9e3779b97f4a7c15ull + 0x5851f42d4c957f2dull + r);
    std::uniform_real_distribution<double> uni(-1.5, 1.5);
    std::vector<double> x(dim);
    for (double& xi : x) xi = uni(rng);
    PatternSearch search{opt.budget};
    best_of[r] = search.maximize(x, objective).first;
  });
  double best = 0.0;
  for (double v : best_of) best = std::max(best, v);
  return best;
}

MeasurePropertyReport check_measure_properties(int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> kdist(2, 5);

  MeasurePropertyReport rep;
  rep.continuity_bound_holds = true;

  auto random_psd = [&](int k) {
    Eigen::MatrixXd m(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m(i, j) = gauss(rng);
    return Eigen::MatrixXd(m * m.transpose());
  };
  auto random_unit = [&](int k) {
    Eigen::VectorXd v(k);
    do {
      for (int i = 0; i < k; ++i) v[i] = gauss(rng);
    } while (v.norm() < 1e-6);
    return Eigen::VectorXd(v.normalized());
  };
  auto privacy_of = [](const Eigen::MatrixXd& q, const Eigen::VectorXd& a_hat) {
    return a_hat.dot(q * a_hat) / q.trace();
  };

  for (int s = 0; s < samples; ++s) {
    int k = kdist(rng);
    Eigen::MatrixXd q = random_psd(k);
    Eigen::VectorXd a_hat = random_unit(k);

    // Property 2: range.
    double pv = privacy_of(q, a_hat);
    rep.max_range_violation = std::max({rep.max_range_violation, -pv, pv - 1.0});

    // Property 3, forward: exact alignment gives P = 1.
    double scale = 0.1 + std::abs(gauss(rng));
    Eigen::MatrixXd aligned = scale * a_hat * a_hat.transpose();
    rep.max_aligned_deviation = std::max(rep.max_aligned_deviation, std::abs(privacy_of(aligned, a_hat) - 1.0));

    // Property 3, reverse: any orthogonal component keeps P strictly below 1.
    Eigen::VectorXd b = random_unit(k);
    b = (b - b.dot(a_hat) * a_hat);
    if (b.norm() > 1e-6) {
      b.normalize();
      Eigen::MatrixXd mixed = aligned + 0.5 * b * b.transpose();
      rep.max_misaligned_privacy = std::max(rep.max_misaligned_privacy, privacy_of(mixed, a_hat));
    }

    // Property 4: orthogonal reparameterization invariance, via QR.
    Eigen::MatrixXd gauss_mat(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) gauss_mat(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss_mat);
    Eigen::MatrixXd bmat = qr.householderQ();
    double rotated = privacy_of(bmat * q * bmat.transpose(), bmat * a_hat);
    rep.max_invariance_deviation = std::max(rep.max_invariance_deviation, std::abs(rotated - pv));

    // Property 5: perturbation bound. With unit a and PSD A,
    // |P(Q + eps A) - P(Q)| = eps |trQ . aAa - aQa . trA| / (trQ (trQ + eps trA))
    // which is at most eps trA / trQ; assert twice that for slack.
    Eigen::MatrixXd pert = random_psd(k);
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      double moved = privacy_of(q + eps * pert, a_hat);
      double bound = 2.0 * eps * pert.trace() / q.trace();
      if (std::abs(moved - pv) > bound) rep.continuity_bound_holds = false;
    }
  }

  rep.all_passed = rep.max_range_violation <= 1e-12 && rep.max_aligned_deviation <= 1e-12 &&
                   rep.max_misaligned_privacy < 1.0 - 1e-8 && rep.max_invariance_deviation <= 1e-10 &&
                   rep.continuity_bound_holds;
  return rep;
}

}  // namespace qsense
