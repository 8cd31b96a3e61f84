#include "qsense/hamiltonians.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qsense {

namespace {

const Complex kI(0.0, 1.0);

Eigen::Matrix2cd pauli_matrix(PauliLetter l) {
  Eigen::Matrix2cd m;
  switch (l) {
    case PauliLetter::I: m << 1, 0, 0, 1; break;
    case PauliLetter::X: m << 0, 1, 1, 0; break;
    case PauliLetter::Y: m << 0, -kI, kI, 0; break;
    case PauliLetter::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::Matrix2cd axis_matrix(const Eigen::Vector3d& x) {
  Eigen::Matrix2cd m;
  m << x.z(), Complex(x.x(), -x.y()), Complex(x.x(), x.y()), -x.z();
  return m;
}

// Product of two single-qubit letters: result letter and power of i picked up.
std::pair<PauliLetter, int> letter_product(PauliLetter a, PauliLetter b) {
  if (a == PauliLetter::I) return {b, 0};
  if (b == PauliLetter::I) return {a, 0};
  if (a == b) return {PauliLetter::I, 0};
  // XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i.
  auto cyclic = [](PauliLetter p, PauliLetter q) {
    return (p == PauliLetter::X && q == PauliLetter::Y) ||
           (p == PauliLetter::Y && q == PauliLetter::Z) ||
           (p == PauliLetter::Z && q == PauliLetter::X);
  };
  PauliLetter r;
  if ((a == PauliLetter::X && b == PauliLetter::Y) || (a == PauliLetter::Y && b == PauliLetter::X))
    r = PauliLetter::Z;
  else if ((a == PauliLetter::Y && b == PauliLetter::Z) || (a == PauliLetter::Z && b == PauliLetter::Y))
    r = PauliLetter::X;
  else
    r = PauliLetter::Y;
  return {r, cyclic(a, b) ? 1 : 3};
}

}  // namespace

char pauli_char(PauliLetter l) {
  switch (l) {
    case PauliLetter::I: return 'I';
    case PauliLetter::X: return 'X';
    case PauliLetter::Y: return 'Y';
    case PauliLetter::Z: return 'Z';
  }
  return '?';
}

PauliLetter pauli_from_char(char c) {
  switch (c) {
    case 'I': return PauliLetter::I;
    case 'X': return PauliLetter::X;
    case 'Y': return PauliLetter::Y;
    case 'Z': return PauliLetter::Z;
    default: throw std::invalid_argument("pauli_from_char: invalid letter");
  }
}

PauliString::PauliString(std::vector<PauliLetter> letters, int phase_pow)
    : letters_(std::move(letters)), phase_pow_(((phase_pow % 4) + 4) % 4) {
  if (letters_.empty()) throw std::invalid_argument("PauliString: empty");
}

PauliString PauliString::identity(int n) {
  return PauliString(std::vector<PauliLetter>(static_cast<std::size_t>(n), PauliLetter::I));
}

PauliString PauliString::single(int n, int qubit, PauliLetter l, int phase_pow) {
  std::vector<PauliLetter> v(static_cast<std::size_t>(n), PauliLetter::I);
  v.at(static_cast<std::size_t>(qubit)) = l;
  return PauliString(std::move(v), phase_pow);
}

PauliString PauliString::parse(std::string_view text) {
  int phase = 0;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase += 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase += 1;
    ++pos;
  }
  std::vector<PauliLetter> letters;
  for (; pos < text.size(); ++pos) letters.push_back(pauli_from_char(text[pos]));
  return PauliString(std::move(letters), phase);
}

Complex PauliString::phase() const {
  switch (phase_pow_) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

bool PauliString::is_identity_letters() const {
  for (PauliLetter l : letters_)
    if (l != PauliLetter::I) return false;
  return true;
}

PauliString PauliString::times(const PauliString& other) const {
  if (size() != other.size()) throw std::invalid_argument("PauliString::times: size mismatch");
  std::vector<PauliLetter> out(letters_.size());
  int phase = phase_pow_ + other.phase_pow_;
  for (std::size_t q = 0; q < letters_.size(); ++q) {
    auto [l, p] = letter_product(letters_[q], other.letters_[q]);
    out[q] = l;
    phase += p;
  }
  return PauliString(std::move(out), phase);
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (size() != other.size()) throw std::invalid_argument("PauliString::commutes_with: size mismatch");
  // Symplectic inner product: strings commute iff an even number of positions
  // hold distinct non-identity letters.
  int anti = 0;
  for (std::size_t q = 0; q < letters_.size(); ++q) {
    PauliLetter a = letters_[q], b = other.letters_[q];
    if (a != PauliLetter::I && b != PauliLetter::I && a != b) ++anti;
  }
  return anti % 2 == 0;
}

PauliString PauliString::with_phase_pow(int p) const { return PauliString(letters_, p); }

bool PauliString::x_bit(int q) const {
  PauliLetter l = letter(q);
  return l == PauliLetter::X || l == PauliLetter::Y;
}

bool PauliString::z_bit(int q) const {
  PauliLetter l = letter(q);
  return l == PauliLetter::Z || l == PauliLetter::Y;
}

CMat PauliString::to_matrix() const {
  CMat m = CMat::Ones(1, 1);
  // Qubit 0 is the least significant index, so it is the innermost factor.
  for (int q = size() - 1; q >= 0; --q) {
    const Eigen::Matrix2cd pq = pauli_matrix(letter(q));
    CMat next(m.rows() * 2, m.cols() * 2);
    // Kronecker with the new qubit as the lower bit of the composite index.
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (int bi = 0; bi < 2; ++bi)
          for (int bj = 0; bj < 2; ++bj) next(2 * i + bi, 2 * j + bj) = m(i, j) * pq(bi, bj);
    m = std::move(next);
  }
  return phase() * m;
}

std::string PauliString::str() const {
  std::string s;
  switch (phase_pow_) {
    case 0: s = "+"; break;
    case 1: s = "+i"; break;
    case 2: s = "-"; break;
    default: s = "-i"; break;
  }
  for (PauliLetter l : letters_) s += pauli_char(l);
  return s;
}

SeparableDynamics SeparableDynamics::all_z(int n) { return all_letter(PauliLetter::Z, n); }

SeparableDynamics SeparableDynamics::all_letter(PauliLetter l, int n) {
  Eigen::Vector3d axis;
  switch (l) {
    case PauliLetter::X: axis = Eigen::Vector3d::UnitX(); break;
    case PauliLetter::Y: axis = Eigen::Vector3d::UnitY(); break;
    case PauliLetter::Z: axis = Eigen::Vector3d::UnitZ(); break;
    default: throw std::invalid_argument("SeparableDynamics: identity is not a generator");
  }
  SeparableDynamics d;
  d.axes.assign(static_cast<std::size_t>(n), axis);
  return d;
}

void SeparableDynamics::validate(const ResourcePartition& p) const {
  if (static_cast<int>(axes.size()) != p.total())
    throw std::invalid_argument("SeparableDynamics: one axis per qubit required");
  for (const auto& x : axes)
    if (std::abs(x.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("SeparableDynamics: axis not unit norm");
  if (!node_times.empty()) {
    if (static_cast<int>(node_times.size()) != p.node_count())
      throw std::invalid_argument("SeparableDynamics: one control time per node required");
    for (double t : node_times)
      if (!(t > 0)) throw std::invalid_argument("SeparableDynamics: control times must be positive");
  }
}

double SeparableDynamics::time_for_node(int mu) const {
  return node_times.empty() ? 1.0 : node_times.at(static_cast<std::size_t>(mu));
}

std::optional<std::pair<PauliLetter, int>> SeparableDynamics::pauli_axis(int qubit) const {
  const Eigen::Vector3d& x = axes.at(static_cast<std::size_t>(qubit));
  const double tol = 1e-12;
  for (int c = 0; c < 3; ++c) {
    for (int s : {1, -1}) {
      Eigen::Vector3d cand = Eigen::Vector3d::Zero();
      cand[c] = s;
      if ((x - cand).norm() < tol) {
        PauliLetter l = c == 0 ? PauliLetter::X : (c == 1 ? PauliLetter::Y : PauliLetter::Z);
        return std::make_pair(l, s);
      }
    }
  }
  return std::nullopt;
}

NodeHamiltonian::NodeHamiltonian(int local_qubits, std::vector<LocalPauliTerm> terms)
    : local_qubits_(local_qubits), terms_(std::move(terms)) {
  if (local_qubits_ < 0 || local_qubits_ > kMaxDenseQubits)
    throw std::invalid_argument("NodeHamiltonian: local qubit count out of range");
  for (const auto& t : terms_) {
    if (static_cast<int>(t.letters.size()) != local_qubits_)
      throw std::invalid_argument("NodeHamiltonian: term letter count mismatch");
    for (char c : t.letters) pauli_from_char(c);
    if (!std::isfinite(t.coeff)) throw std::invalid_argument("NodeHamiltonian: non-finite coefficient");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(local_matrix());
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

NodeHamiltonian NodeHamiltonian::parse(int local_qubits, std::string_view text) {
  std::vector<LocalPauliTerm> terms;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    double coeff;
    std::string letters;
    if (!(ls >> coeff)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw std::invalid_argument("NodeHamiltonian: malformed term line: " + line);
    }
    if (!(ls >> letters)) throw std::invalid_argument("NodeHamiltonian: missing letters: " + line);
    terms.push_back({coeff, letters});
  }
  return NodeHamiltonian(local_qubits, std::move(terms));
}

CMat NodeHamiltonian::local_matrix() const {
  Eigen::Index d = Eigen::Index{1} << local_qubits_;
  CMat h = CMat::Zero(d, d);
  for (const auto& t : terms_) {
    std::vector<PauliLetter> letters;
    for (char c : t.letters) letters.push_back(pauli_from_char(c));
    h += t.coeff * PauliString(std::move(letters)).to_matrix();
  }
  return h;
}

void GeneralDynamics::validate(const ResourcePartition& p) const {
  if (static_cast<int>(nodes.size()) != p.node_count())
    throw std::invalid_argument("GeneralDynamics: one Hamiltonian per node required");
  for (int mu = 0; mu < p.node_count(); ++mu)
    if (nodes[static_cast<std::size_t>(mu)].local_qubits() != p.node_sizes()[mu])
      throw std::invalid_argument("GeneralDynamics: node Hamiltonian size mismatch");
}

namespace {

CMat embed_block(const CMat& block, int start, int n) {
  Eigen::Index d = Eigen::Index{1} << n;
  Eigen::Index bd = block.rows();
  int m = 0;
  while ((Eigen::Index{1} << m) < bd) ++m;
  CMat out = CMat::Zero(d, d);
  Eigen::Index low_dim = Eigen::Index{1} << start;
  Eigen::Index high_dim = d >> (start + m);
  for (Eigen::Index hi = 0; hi < high_dim; ++hi)
    for (Eigen::Index lo = 0; lo < low_dim; ++lo)
      for (Eigen::Index bi = 0; bi < bd; ++bi)
        for (Eigen::Index bj = 0; bj < bd; ++bj)
          out(lo | (bi << start) | (hi << (start + m)), lo | (bj << start) | (hi << (start + m))) =
              block(bi, bj);
  return out;
}

}  // namespace

CMat collective_generator(const SeparableDynamics& d, const ResourcePartition& p, int node) {
  d.validate(p);
  int n = p.total();
  if (n > kMaxDenseQubits) throw std::invalid_argument("collective_generator: too many qubits for dense form");
  auto [first, last] = p.node_range(node);
  Eigen::Index dim = Eigen::Index{1} << n;
  CMat g = CMat::Zero(dim, dim);
  for (int q = first; q < last; ++q)
    g += embed_block(axis_matrix(d.axes[static_cast<std::size_t>(q)]), q, n);
  return d.time_for_node(node) * g;
}

CMat collective_generator(const GeneralDynamics& d, const ResourcePartition& p, int node) {
  d.validate(p);
  int n = p.total();
  if (n > kMaxDenseQubits) throw std::invalid_argument("collective_generator: too many qubits for dense form");
  auto [first, last] = p.node_range(node);
  (void)last;
  return embed_block(d.nodes[static_cast<std::size_t>(node)].local_matrix(), first, n);
}

CVec apply_node_generator(const CVec& v, const SeparableDynamics& d, const ResourcePartition& p,
                          int node) {
  auto [first, last] = p.node_range(node);
  CVec acc = CVec::Zero(v.size());
  for (int q = first; q < last; ++q) {
    CVec term = v;
    apply_single_qubit_raw(term, axis_matrix(d.axes[static_cast<std::size_t>(q)]), q);
    acc += term;
  }
  return d.time_for_node(node) * acc;
}

CVec apply_node_generator(const CVec& v, const GeneralDynamics& d, const ResourcePartition& p,
                          int node) {
  auto [first, last] = p.node_range(node);
  (void)last;
  CVec out = v;
  apply_block_raw(out, d.nodes[static_cast<std::size_t>(node)].local_matrix(), first);
  return out;
}

StateVector encode(const StateVector& psi, const SeparableDynamics& d, const ResourcePartition& p,
                   const std::vector<double>& theta) {
  d.validate(p);
  if (static_cast<int>(theta.size()) != p.node_count())
    throw std::invalid_argument("encode: one parameter per node required");
  StateVector out = psi;
  for (int mu = 0; mu < p.node_count(); ++mu) {
    auto [first, last] = p.node_range(mu);
    double phi = theta[static_cast<std::size_t>(mu)] * d.time_for_node(mu);
    for (int q = first; q < last; ++q) {
      // exp(-i phi x.sigma) = cos(phi) I - i sin(phi) x.sigma
      Eigen::Matrix2cd u = std::cos(phi) * Eigen::Matrix2cd::Identity() -
                           kI * std::sin(phi) * axis_matrix(d.axes[static_cast<std::size_t>(q)]);
      out = apply_single_qubit_gate(out, u, q);
    }
  }
  return out;
}

StateVector encode(const StateVector& psi, const GeneralDynamics& d, const ResourcePartition& p,
                   const std::vector<double>& theta) {
  d.validate(p);
  if (static_cast<int>(theta.size()) != p.node_count())
    throw std::invalid_argument("encode: one parameter per node required");
  StateVector out = psi;
  for (int mu = 0; mu < p.node_count(); ++mu) {
    const NodeHamiltonian& h = d.nodes[static_cast<std::size_t>(mu)];
    auto [first, last] = p.node_range(mu);
    (void)last;
    CVec ph = (-kI * theta[static_cast<std::size_t>(mu)] * h.eigenvalues().cast<Complex>().array()).exp().matrix();
    CMat u = h.eigenvectors() * ph.asDiagonal() * h.eigenvectors().adjoint();
    out = apply_block_gate(out, u, first);
  }
  return out;
}

namespace {

template <typename Dyn>
DensityMatrix encode_density(const DensityMatrix& rho, const Dyn& d, const ResourcePartition& p,
                             const std::vector<double>& theta) {
  // Column-wise application of the unitary, then the adjoint from the right.
  Eigen::Index dim = rho.dim();
  CMat u_cols(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    CVec e = CVec::Zero(dim);
    e[c] = 1.0;
    u_cols.col(c) = encode(StateVector(std::move(e), rho.qubits()), d, p, theta).amps();
  }
  CMat out = u_cols * rho.mat() * u_cols.adjoint();
  return DensityMatrix(std::move(out), rho.qubits());
}

}  // namespace

DensityMatrix encode(const DensityMatrix& rho, const SeparableDynamics& d, const ResourcePartition& p,
                     const std::vector<double>& theta) {
  return encode_density(rho, d, p, theta);
}

DensityMatrix encode(const DensityMatrix& rho, const GeneralDynamics& d, const ResourcePartition& p,
                     const std::vector<double>& theta) {
  return encode_density(rho, d, p, theta);
}

std::pair<Eigen::VectorXd, CMat> local_eigensystem(const GeneralDynamics& d, int node) {
  const NodeHamiltonian& h = d.nodes.at(static_cast<std::size_t>(node));
  Eigen::VectorXd vals = h.eigenvalues();
  // Group numerically degenerate eigenvalues to a common representative.
  for (Eigen::Index i = 1; i < vals.size(); ++i)
    if (std::abs(vals[i] - vals[i - 1]) <= 1e-9) vals[i] = vals[i - 1];
  return {vals, h.eigenvectors()};
}

Orthotope build_orthotope(const GeneralDynamics& d, double dedup_tol) {
  int k = static_cast<int>(d.nodes.size());
  if (k == 0) throw std::invalid_argument("build_orthotope: no nodes");

  std::vector<Eigen::VectorXd> local_vals;
  for (int mu = 0; mu < k; ++mu) local_vals.push_back(local_eigensystem(d, mu).first);

  auto push_unique = [&](std::vector<Eigen::VectorXd>& set, const Eigen::VectorXd& v) {
    for (const auto& u : set)
      if ((u - v).cwiseAbs().maxCoeff() <= dedup_tol) return false;
    set.push_back(v);
    return true;
  };

  Orthotope o;
  std::vector<int> label(static_cast<std::size_t>(k), 0);
  std::vector<Eigen::VectorXd> seen;
  bool done = false;
  while (!done) {
    Eigen::VectorXd c(k);
    for (int mu = 0; mu < k; ++mu) c[mu] = local_vals[static_cast<std::size_t>(mu)][label[static_cast<std::size_t>(mu)]];
    if (push_unique(seen, c)) o.points.push_back({c, label});
    // Odometer over joint basis labels.
    done = true;
    for (int mu = 0; mu < k; ++mu) {
      auto& lm = label[static_cast<std::size_t>(mu)];
      if (++lm < local_vals[static_cast<std::size_t>(mu)].size()) {
        done = false;
        break;
      }
      lm = 0;
    }
  }

  std::vector<Eigen::VectorXd> diffs;
  for (const auto& x : o.points)
    for (const auto& y : o.points) push_unique(diffs, x.c - y.c);
  o.diffs = std::move(diffs);

  o.box_min.resize(k);
  o.box_max.resize(k);
  for (int mu = 0; mu < k; ++mu) {
    o.box_min[mu] = local_vals[static_cast<std::size_t>(mu)].minCoeff();
    o.box_max[mu] = local_vals[static_cast<std::size_t>(mu)].maxCoeff();
  }
  return o;
}

std::optional<OrthotopeWitness> target_in_O2minus(const TargetFunction& a, const Orthotope& o) {
  if (o.points.empty()) return std::nullopt;
  if (o.points.front().c.size() != a.size())
    throw std::invalid_argument("target_in_O2minus: dimension mismatch");
  Eigen::VectorXd av(a.size());
  for (int i = 0; i < a.size(); ++i) av[i] = static_cast<double>(a.coeffs()[static_cast<std::size_t>(i)]);
  const double anorm2 = av.squaredNorm();
  const double tol = 1e-9;
  for (const auto& x : o.points)
    for (const auto& y : o.points) {
      Eigen::VectorXd diff = x.c - y.c;
      double alpha = diff.dot(av) / anorm2;
      if (std::abs(alpha) < tol) continue;
      if ((diff - alpha * av).cwiseAbs().maxCoeff() <= tol * std::max(1.0, diff.cwiseAbs().maxCoeff()))
        return OrthotopeWitness{x, y, alpha};
    }
  return std::nullopt;
}

StateVector joint_eigenstate(const GeneralDynamics& d, const ResourcePartition& p,
                             const std::vector<int>& label) {
  d.validate(p);
  if (static_cast<int>(label.size()) != p.node_count())
    throw std::invalid_argument("joint_eigenstate: one label per node required");
  CVec v = CVec::Ones(1);
  // Node k-1 occupies the most significant bits.
  for (int mu = p.node_count() - 1; mu >= 0; --mu) {
    const CMat& vecs = d.nodes[static_cast<std::size_t>(mu)].eigenvectors();
    CVec local = vecs.col(label[static_cast<std::size_t>(mu)]);
    CVec next(v.size() * local.size());
    for (Eigen::Index hi = 0; hi < v.size(); ++hi)
      for (Eigen::Index lo = 0; lo < local.size(); ++lo) next[hi * local.size() + lo] = v[hi] * local[lo];
    v = std::move(next);
  }
  return StateVector(std::move(v), p.total());
}

std::optional<PauliString> has_anticommuting_pauli(const GeneralDynamics& d, int node) {
  const NodeHamiltonian& h = d.nodes.at(static_cast<std::size_t>(node));
  int m = h.local_qubits();

  std::vector<PauliString> terms;
  for (const auto& t : h.terms()) {
    if (t.coeff == 0.0) continue;
    std::vector<PauliLetter> letters;
    for (char c : t.letters) letters.push_back(pauli_from_char(c));
    terms.emplace_back(std::move(letters));
  }
  if (terms.empty()) return std::nullopt;  // zero Hamiltonian

  // A candidate anticommutes with the sum iff it anticommutes with every term.
  std::uint64_t count = 1;
  for (int q = 0; q < m; ++q) count *= 4;
  for (std::uint64_t code = 1; code < count; ++code) {
    std::vector<PauliLetter> letters(static_cast<std::size_t>(m));
    std::uint64_t c = code;
    for (int q = 0; q < m; ++q) {
      letters[static_cast<std::size_t>(q)] = static_cast<PauliLetter>(c % 4);
      c /= 4;
    }
    PauliString cand(std::move(letters));
    bool ok = true;
    for (const auto& t : terms)
      if (cand.commutes_with(t)) {
        ok = false;
        break;
      }
    if (ok) return cand;
  }
  return std::nullopt;
}

Eigen::Matrix2cd conjugating_rotation(const Eigen::Vector3d& g, const Eigen::Vector3d& gp) {
  if (std::abs(g.norm() - 1.0) > 1e-12 || std::abs(gp.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("conjugating_rotation: inputs must be unit vectors");

  Eigen::Vector3d axis;
  double angle;
  Eigen::Vector3d cross = g.cross(gp);
  double s = cross.norm();
  double c = g.dot(gp);
  if (s < 1e-12) {
    if (c > 0) return Eigen::Matrix2cd::Identity();
    // Antiparallel: rotate by pi around a deterministic axis orthogonal to g.
    Eigen::Vector3d seed = std::abs(g.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    axis = (seed - seed.dot(g) * g).normalized();
    angle = M_PI;
  } else {
    axis = cross / s;
    angle = std::atan2(s, c);
  }
  // W^dag (g.sigma) W rotates g by -angle about the axis when
  // W = exp(-i angle/2 axis.sigma), so the conjugator needs the opposite sign.
  Eigen::Matrix2cd w = std::cos(angle / 2) * Eigen::Matrix2cd::Identity() +
                       kI * std::sin(angle / 2) * axis_matrix(axis);

  Eigen::Matrix2cd residual = w.adjoint() * axis_matrix(g) * w - axis_matrix(gp);
  if (residual.cwiseAbs().maxCoeff() > 1e-10)
    throw std::runtime_error("conjugating_rotation: residual check failed");
  return w;
}

}  // namespace qsense
