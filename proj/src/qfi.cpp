#include "qsense/qfi.hpp"

#include <cmath>
#include <stdexcept>

namespace qsense {

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& q) { return 0.5 * (q + q.transpose()); }

// Covariance form shared by both pure-state paths: given G_mu psi for all mu,
// Q_{mu nu} = 4 Re(<G_mu psi|G_nu psi> - <psi|G_mu psi><psi|G_nu psi>).
template <typename Dyn>
QfiMatrix qfi_pure_impl(const StateVector& psi, const Dyn& d, const ResourcePartition& p) {
  int k = p.node_count();
  std::vector<CVec> gpsi;
  gpsi.reserve(static_cast<std::size_t>(k));
  for (int mu = 0; mu < k; ++mu) gpsi.push_back(apply_node_generator(psi.amps(), d, p, mu));

  std::vector<Complex> means(static_cast<std::size_t>(k));
  for (int mu = 0; mu < k; ++mu) means[static_cast<std::size_t>(mu)] = psi.amps().dot(gpsi[static_cast<std::size_t>(mu)]);

  Eigen::MatrixXd q(k, k);
  for (int mu = 0; mu < k; ++mu)
    for (int nu = 0; nu < k; ++nu) {
      Complex second = gpsi[static_cast<std::size_t>(mu)].dot(gpsi[static_cast<std::size_t>(nu)]);
      Complex first = means[static_cast<std::size_t>(mu)] * means[static_cast<std::size_t>(nu)];
      q(mu, nu) = 4.0 * (second - first).real();
    }
  QfiMatrix out;
  out.m = symmetrized(q);
  out.provenance = QfiProvenance::PureDense;
  out.theta.assign(static_cast<std::size_t>(k), 0.0);
  return out;
}

template <typename Dyn>
QfiMatrix qfi_mixed_eig_impl(const DensityMatrix& rho, const Dyn& d, const ResourcePartition& p,
                             double eps_supp) {
  int k = p.node_count();
  Spectrum s = eig_hermitian(rho, eps_supp);
  Eigen::Index dim = rho.dim();

  // Matrix elements <G_n|G_mu|G_k> for all eigenvector pairs.
  std::vector<CMat> elems(static_cast<std::size_t>(k));
  for (int mu = 0; mu < k; ++mu) {
    CMat gv(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col)
      gv.col(col) = apply_node_generator(s.eigenvectors.col(col), d, p, mu);
    elems[static_cast<std::size_t>(mu)] = s.eigenvectors.adjoint() * gv;
  }

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index n = 0; n < dim; ++n)
    for (Eigen::Index kk = 0; kk < dim; ++kk) {
      bool n_supp = s.support[static_cast<std::size_t>(n)];
      bool k_supp = s.support[static_cast<std::size_t>(kk)];
      if (!k_supp) continue;
      double ln = std::max(s.eigenvalues[n], 0.0);
      double lk = s.eigenvalues[kk];
      double w;
      if (n_supp) {
        w = 2.0 * (ln - lk) * (ln - lk) / (ln + lk);
      } else {
        w = 4.0 * lk;
      }
      if (w == 0.0) continue;
      for (int mu = 0; mu < k; ++mu)
        for (int nu = 0; nu < k; ++nu)
          q(mu, nu) += w * (elems[static_cast<std::size_t>(mu)](n, kk) *
                            elems[static_cast<std::size_t>(nu)](kk, n))
                               .real();
    }

  QfiMatrix out;
  out.m = symmetrized(q);
  out.provenance = QfiProvenance::MixedEig;
  out.theta.assign(static_cast<std::size_t>(k), 0.0);
  return out;
}

}  // namespace

std::string provenance_name(QfiProvenance p) {
  switch (p) {
    case QfiProvenance::PureDense: return "pure-dense";
    case QfiProvenance::StructuredSeparable: return "structured-separable";
    case QfiProvenance::StructuredGeneral: return "structured-general";
    case QfiProvenance::MixedEig: return "mixed-eig";
    case QfiProvenance::MixedSldOracle: return "mixed-sld-oracle";
    case QfiProvenance::Stabilizer: return "stabilizer";
  }
  return "?";
}

QfiMatrix qfi_pure_dense(const StateVector& psi, const SeparableDynamics& d, const ResourcePartition& p) {
  d.validate(p);
  return qfi_pure_impl(psi, d, p);
}

QfiMatrix qfi_pure_dense(const StateVector& psi, const GeneralDynamics& d, const ResourcePartition& p) {
  d.validate(p);
  return qfi_pure_impl(psi, d, p);
}

StructuredQfi qfi_structured_separable(const StateVector& psi, const ResourcePartition& p,
                                       const std::vector<double>& node_times) {
  int n = p.total();
  int k = p.node_count();
  if (n < 1) throw std::invalid_argument("qfi_structured_separable: empty system");
  if (psi.qubits() != n) throw std::invalid_argument("qfi_structured_separable: qubit count mismatch");
  if (!node_times.empty() && static_cast<int>(node_times.size()) != k)
    throw std::invalid_argument("qfi_structured_separable: node time count mismatch");

  Eigen::Index half = Eigen::Index{1} << (n - 1);
  std::uint64_t mask = (std::uint64_t{1} << n) - 1;

  StructuredQfi s;
  s.C.resize(half, k);
  s.lambda.resize(half);
  s.v.resize(half);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index m = 0; m < half; ++m) {
    std::uint64_t mbar = ~static_cast<std::uint64_t>(m) & mask;
    Complex ap = (psi.amp(m) + psi.amp(static_cast<Eigen::Index>(mbar))) * inv_sqrt2;
    Complex am = (psi.amp(m) - psi.amp(static_cast<Eigen::Index>(mbar))) * inv_sqrt2;
    s.lambda[m] = std::norm(ap) + std::norm(am);
    s.v[m] = 2.0 * (std::conj(ap) * am).real();
    IntVec h = hamming_vec_sym(BitString(static_cast<std::uint64_t>(m), n), p);
    for (int mu = 0; mu < k; ++mu) {
      double t = node_times.empty() ? 1.0 : node_times[static_cast<std::size_t>(mu)];
      s.C(m, mu) = t * static_cast<double>(h[static_cast<std::size_t>(mu)]);
    }
  }
  // Rows of C are the weight vectors, so the contraction is C^T core C.
  Eigen::MatrixXd core = Eigen::MatrixXd(s.lambda.asDiagonal()) - s.v * s.v.transpose();
  s.q.m = symmetrized(4.0 * s.C.transpose() * core * s.C);
  s.q.provenance = QfiProvenance::StructuredSeparable;
  s.q.theta.assign(static_cast<std::size_t>(k), 0.0);
  return s;
}

StructuredQfi qfi_structured_general(const StateVector& psi, const GeneralDynamics& d,
                                     const ResourcePartition& p) {
  d.validate(p);
  int n = p.total();
  int k = p.node_count();
  if (psi.qubits() != n) throw std::invalid_argument("qfi_structured_general: qubit count mismatch");

  // Rotate into the joint eigenbasis node by node.
  CVec coeffs = psi.amps();
  for (int mu = 0; mu < k; ++mu) {
    auto [first, last] = p.node_range(mu);
    (void)last;
    apply_block_raw(coeffs, d.nodes[static_cast<std::size_t>(mu)].eigenvectors().adjoint(), first);
  }

  std::vector<Eigen::VectorXd> node_vals;
  node_vals.reserve(static_cast<std::size_t>(k));
  for (int mu = 0; mu < k; ++mu) node_vals.push_back(local_eigensystem(d, mu).first);

  Eigen::Index dim = coeffs.size();
  StructuredQfi s;
  s.C.resize(dim, k);
  s.lambda.resize(dim);
  s.v = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    s.lambda[j] = std::norm(coeffs[j]);
    std::uint64_t rest = static_cast<std::uint64_t>(j);
    for (int mu = 0; mu < k; ++mu) {
      auto [first, last] = p.node_range(mu);
      int m = last - first;
      std::uint64_t local = rest & ((std::uint64_t{1} << m) - 1);
      rest >>= m;
      s.C(j, mu) = node_vals[static_cast<std::size_t>(mu)][static_cast<Eigen::Index>(local)];
    }
  }
  Eigen::MatrixXd core =
      Eigen::MatrixXd(s.lambda.asDiagonal()) - s.lambda * s.lambda.transpose();
  s.q.m = symmetrized(4.0 * s.C.transpose() * core * s.C);
  s.q.provenance = QfiProvenance::StructuredGeneral;
  s.q.theta.assign(static_cast<std::size_t>(k), 0.0);
  return s;
}

QfiMatrix qfi_mixed_eig(const DensityMatrix& rho, const SeparableDynamics& d, const ResourcePartition& p,
                        double eps_supp) {
  d.validate(p);
  return qfi_mixed_eig_impl(rho, d, p, eps_supp);
}

QfiMatrix qfi_mixed_eig(const DensityMatrix& rho, const GeneralDynamics& d, const ResourcePartition& p,
                        double eps_supp) {
  d.validate(p);
  return qfi_mixed_eig_impl(rho, d, p, eps_supp);
}

QfiMatrix qfi_mixed_grouped(const std::vector<double>& weights, const std::vector<StateVector>& states,
                            const SeparableDynamics& d, const ResourcePartition& p) {
  d.validate(p);
  if (weights.size() != states.size() || states.empty())
    throw std::invalid_argument("qfi_mixed_grouped: weights/states mismatch");
  int k = p.node_count();
  std::size_t r = states.size();

  // Orthonormality of the supplied decomposition.
  bool orthonormal = true;
  for (std::size_t i = 0; i < r && orthonormal; ++i)
    for (std::size_t j = 0; j < r && orthonormal; ++j) {
      Complex g = states[i].amps().dot(states[j].amps());
      double want = i == j ? 1.0 : 0.0;
      if (std::abs(g - want) > 1e-10) orthonormal = false;
    }
  if (!orthonormal) {
    // Re-diagonalize the implied density matrix and restart from its
    // orthonormal support decomposition.
    Eigen::Index dim = states.front().dim();
    CMat rho = CMat::Zero(dim, dim);
    double total = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      rho += weights[i] * states[i].outer();
      total += weights[i];
    }
    rho /= total;
    Spectrum s = eig_hermitian(DensityMatrix(std::move(rho), states.front().qubits()));
    std::vector<double> w2;
    std::vector<StateVector> st2;
    for (Eigen::Index i = 0; i < dim; ++i)
      if (s.support[static_cast<std::size_t>(i)]) {
        w2.push_back(s.eigenvalues[i]);
        st2.emplace_back(s.eigenvectors.col(i), states.front().qubits());
      }
    return qfi_mixed_grouped(w2, st2, d, p);
  }

  double wsum = 0.0;
  for (double w : weights) {
    if (w < -1e-12) throw std::invalid_argument("qfi_mixed_grouped: negative weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9) throw std::invalid_argument("qfi_mixed_grouped: weights must sum to 1");

  // Per-state generator images and matrix elements a^mu_{nk} = <n|G_mu|k>.
  std::vector<std::vector<CVec>> gpsi(r);
  for (std::size_t i = 0; i < r; ++i) {
    gpsi[i].reserve(static_cast<std::size_t>(k));
    for (int mu = 0; mu < k; ++mu) gpsi[i].push_back(apply_node_generator(states[i].amps(), d, p, mu));
  }
  auto elem = [&](int mu, std::size_t n, std::size_t kk) {
    return states[n].amps().dot(gpsi[kk][static_cast<std::size_t>(mu)]);
  };

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t n = 0; n < r; ++n) {
    QfiMatrix pure = qfi_pure_impl(states[n], d, p);
    q += weights[n] * pure.m;
  }
  for (std::size_t n = 0; n < r; ++n)
    for (std::size_t kk = 0; kk < n; ++kk) {
      double ln = weights[n], lk = weights[kk];
      if (ln + lk <= 0) continue;
      double w = 4.0 * ((ln - lk) * (ln - lk) / (ln + lk) - (ln + lk));
      for (int mu = 0; mu < k; ++mu)
        for (int nu = 0; nu < k; ++nu)
          q(mu, nu) += w * (elem(nu, n, kk) * elem(mu, kk, n)).real();
    }

  QfiMatrix out;
  out.m = symmetrized(q);
  out.provenance = QfiProvenance::MixedEig;
  out.theta.assign(static_cast<std::size_t>(k), 0.0);
  return out;
}

QfiMatrix qfi_sld_oracle(const ParametricChannel& channel, const std::vector<double>& theta0,
                         double h_fd) {
  int k = static_cast<int>(theta0.size());
  if (k == 0) throw std::invalid_argument("qfi_sld_oracle: empty parameter vector");
  if (!(h_fd > 0)) throw std::invalid_argument("qfi_sld_oracle: step must be positive");

  DensityMatrix rho0 = channel(theta0);
  Eigen::Index dim = rho0.dim();
  Spectrum s = eig_hermitian(rho0);
  auto rank_of = [](const Spectrum& sp) {
    int r = 0;
    for (bool b : sp.support) r += b ? 1 : 0;
    return r;
  };
  int rank0 = rank_of(s);

  bool rank_changed = false;
  std::vector<CMat> sld(static_cast<std::size_t>(k));
  double lmax = std::max(s.eigenvalues[0], 0.0);
  double pinv_cut = 1e-12 * std::max(lmax, 1.0);
  for (int mu = 0; mu < k; ++mu) {
    std::vector<double> tp = theta0, tm = theta0;
    tp[static_cast<std::size_t>(mu)] += h_fd;
    tm[static_cast<std::size_t>(mu)] -= h_fd;
    DensityMatrix rp = channel(tp);
    DensityMatrix rm = channel(tm);
    if (rank_of(eig_hermitian(rp)) != rank0 || rank_of(eig_hermitian(rm)) != rank0) rank_changed = true;
    CMat deriv = (rp.mat() - rm.mat()) / (2.0 * h_fd);
    // SLD in the eigenbasis of rho0: L_{jk} = 2 D_{jk} / (lambda_j + lambda_k)
    // on the subspace where the denominator is meaningful.
    CMat d_eig = s.eigenvectors.adjoint() * deriv * s.eigenvectors;
    CMat l = CMat::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) {
        double denom = std::max(s.eigenvalues[i], 0.0) + std::max(s.eigenvalues[j], 0.0);
        if (denom > pinv_cut) l(i, j) = 2.0 * d_eig(i, j) / denom;
      }
    sld[static_cast<std::size_t>(mu)] = std::move(l);
  }

  Eigen::VectorXd lam = s.eigenvalues.cwiseMax(0.0);
  Eigen::MatrixXd q(k, k);
  for (int mu = 0; mu < k; ++mu)
    for (int nu = 0; nu < k; ++nu) {
      const CMat& a = sld[static_cast<std::size_t>(mu)];
      const CMat& b = sld[static_cast<std::size_t>(nu)];
      Complex acc = 0.0;
      for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) acc += lam[i] * a(i, j) * b(j, i);
      q(mu, nu) = acc.real();
    }

  QfiMatrix out;
  out.m = symmetrized(q);
  out.provenance = QfiProvenance::MixedSldOracle;
  out.theta = theta0;
  out.rank_change_warning = rank_changed;
  return out;
}

ParametricChannel unitary_channel(const DensityMatrix& rho, const SeparableDynamics& d,
                                  const ResourcePartition& p) {
  d.validate(p);
  return [rho, d, p](const std::vector<double>& theta) { return encode(rho, d, p, theta); };
}

ParametricChannel unitary_channel(const DensityMatrix& rho, const GeneralDynamics& d,
                                  const ResourcePartition& p) {
  d.validate(p);
  return [rho, d, p](const std::vector<double>& theta) { return encode(rho, d, p, theta); };
}

}  // namespace qsense
