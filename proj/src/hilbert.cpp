#include "qsense/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsense {

namespace {

int check_qubit_count(Eigen::Index dim, int n, int cap, const char* what) {
  if (n < 0 || n > cap) throw std::invalid_argument(std::string(what) + ": qubit count out of range");
  if (dim != (Eigen::Index{1} << n)) throw std::invalid_argument(std::string(what) + ": dimension is not 2^n");
  return n;
}

}  // namespace

StateVector::StateVector(CVec amps, int n) : amps_(std::move(amps)), n_(n) {
  check_qubit_count(amps_.size(), n, kMaxPureQubits, "StateVector");
  double norm = amps_.norm();
  if (norm < 1e-12) throw std::invalid_argument("StateVector: zero vector");
  amps_ /= norm;
}

DensityMatrix::DensityMatrix(CMat mat, int n) : mat_(std::move(mat)), n_(n) {
  check_qubit_count(mat_.rows(), n, kMaxDenseQubits, "DensityMatrix");
  if (mat_.rows() != mat_.cols()) throw std::invalid_argument("DensityMatrix: not square");
  if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(mat_.trace().real() - 1.0) > 1e-10 || std::abs(mat_.trace().imag()) > 1e-10)
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  Eigen::SelfAdjointEigenSolver<CMat> es(mat_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("DensityMatrix: not positive semi-definite");
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(psi.outer(), psi.qubits());
}

StateVector basis_state(const BitString& s) {
  CVec v = CVec::Zero(Eigen::Index{1} << s.size());
  v[static_cast<Eigen::Index>(s.value())] = 1.0;
  return StateVector(std::move(v), s.size());
}

StateVector ghz(const ResourcePartition& p, Complex alpha, Complex beta) {
  double w = std::norm(alpha) + std::norm(beta);
  if (std::abs(w - 1.0) > 1e-10) throw std::invalid_argument("ghz: |alpha|^2 + |beta|^2 must be 1");
  int n = p.total();
  CVec v = CVec::Zero(Eigen::Index{1} << n);
  v[0] = alpha;
  v[(Eigen::Index{1} << n) - 1] = beta;
  return StateVector(std::move(v), n);
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& qubits) {
  int n = rho.qubits();
  std::vector<int> traced = qubits;
  std::sort(traced.begin(), traced.end());
  if (std::adjacent_find(traced.begin(), traced.end()) != traced.end())
    throw std::invalid_argument("partial_trace: duplicate qubit index");
  for (int q : traced)
    if (q < 0 || q >= n) throw std::invalid_argument("partial_trace: qubit index out of range");

  int m = static_cast<int>(traced.size());
  int r = n - m;
  std::vector<int> kept;
  kept.reserve(r);
  {
    std::size_t ti = 0;
    for (int q = 0; q < n; ++q) {
      if (ti < traced.size() && traced[ti] == q) {
        ++ti;
      } else {
        kept.push_back(q);
      }
    }
  }

  auto compose = [&](std::uint64_t keep_bits, std::uint64_t trace_bits) {
    std::uint64_t idx = 0;
    for (int i = 0; i < r; ++i) idx |= ((keep_bits >> i) & 1u) << kept[static_cast<std::size_t>(i)];
    for (int i = 0; i < m; ++i) idx |= ((trace_bits >> i) & 1u) << traced[static_cast<std::size_t>(i)];
    return static_cast<Eigen::Index>(idx);
  };

  Eigen::Index rd = Eigen::Index{1} << r;
  Eigen::Index td = Eigen::Index{1} << m;
  CMat out = CMat::Zero(rd, rd);
  for (Eigen::Index i = 0; i < rd; ++i)
    for (Eigen::Index j = 0; j < rd; ++j) {
      Complex acc = 0.0;
      for (Eigen::Index t = 0; t < td; ++t)
        acc += rho.mat()(compose(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(t)),
                          compose(static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(t)));
      out(i, j) = acc;
    }
  return DensityMatrix(std::move(out), r);
}

Spectrum eig_hermitian(const DensityMatrix& rho, double eps_supp) {
  Eigen::SelfAdjointEigenSolver<CMat> es(rho.mat());
  if (es.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: eigensolver failed");

  Eigen::Index d = rho.dim();
  Spectrum s;
  s.eigenvalues.resize(d);
  s.eigenvectors.resize(d, d);
  // Eigen returns ascending order; flip to descending.
  for (Eigen::Index i = 0; i < d; ++i) {
    s.eigenvalues[i] = es.eigenvalues()[d - 1 - i];
    s.eigenvectors.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  double cutoff = eps_supp * std::max(s.eigenvalues[0], 0.0);
  s.support.resize(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) s.support[static_cast<std::size_t>(i)] = s.eigenvalues[i] > cutoff;
  return s;
}

void apply_single_qubit_raw(CVec& v, const Eigen::Matrix2cd& op, int qubit) {
  Eigen::Index stride = Eigen::Index{1} << qubit;
  if (qubit < 0 || 2 * stride > v.size()) throw std::invalid_argument("apply_single_qubit_raw: bad qubit");
  for (Eigen::Index base = 0; base < v.size(); base += 2 * stride)
    for (Eigen::Index off = 0; off < stride; ++off) {
      Eigen::Index i0 = base + off;
      Eigen::Index i1 = i0 + stride;
      Complex a = v[i0], b = v[i1];
      v[i0] = op(0, 0) * a + op(0, 1) * b;
      v[i1] = op(1, 0) * a + op(1, 1) * b;
    }
}

void apply_block_raw(CVec& v, const CMat& op, int start) {
  Eigen::Index bd = op.rows();
  int m = 0;
  while ((Eigen::Index{1} << m) < bd) ++m;
  if ((Eigen::Index{1} << m) != bd || op.cols() != bd)
    throw std::invalid_argument("apply_block_raw: operator dimension is not 2^m");
  if (start < 0 || (Eigen::Index{1} << (start + m)) > v.size())
    throw std::invalid_argument("apply_block_raw: block out of range");

  Eigen::Index low_dim = Eigen::Index{1} << start;
  Eigen::Index high_dim = v.size() >> (start + m);
  CVec block(bd);
  for (Eigen::Index hi = 0; hi < high_dim; ++hi)
    for (Eigen::Index lo = 0; lo < low_dim; ++lo) {
      for (Eigen::Index b = 0; b < bd; ++b) block[b] = v[lo | (b << start) | (hi << (start + m))];
      CVec mixed = op * block;
      for (Eigen::Index b = 0; b < bd; ++b) v[lo | (b << start) | (hi << (start + m))] = mixed[b];
    }
}

StateVector apply_single_qubit_gate(const StateVector& psi, const Eigen::Matrix2cd& u, int qubit) {
  if (qubit < 0 || qubit >= psi.qubits()) throw std::invalid_argument("apply_single_qubit_gate: bad qubit");
  CVec v = psi.amps();
  apply_single_qubit_raw(v, u, qubit);
  return StateVector(std::move(v), psi.qubits());
}

StateVector apply_block_gate(const StateVector& psi, const CMat& u, int start) {
  CVec v = psi.amps();
  apply_block_raw(v, u, start);
  return StateVector(std::move(v), psi.qubits());
}

StateVector apply_local_unitaries(const StateVector& psi, const std::vector<Eigen::Matrix2cd>& us) {
  if (static_cast<int>(us.size()) != psi.qubits())
    throw std::invalid_argument("apply_local_unitaries: one unitary per qubit required");
  StateVector out = psi;
  for (int q = 0; q < psi.qubits(); ++q) out = apply_single_qubit_gate(out, us[static_cast<std::size_t>(q)], q);
  return out;
}

}  // namespace qsense
