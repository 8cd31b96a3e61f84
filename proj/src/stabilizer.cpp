#include "qsense/stabilizer.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qsense {

namespace {

// Conjugation action of the local Clifford gates on one letter of a
// generator row, with the sign flip it picks up.
std::pair<PauliLetter, bool> conjugate_letter(CliffordGate g, PauliLetter l) {
  using L = PauliLetter;
  if (l == L::I) return {L::I, false};
  switch (g) {
    case CliffordGate::H:
      if (l == L::X) return {L::Z, false};
      if (l == L::Z) return {L::X, false};
      return {L::Y, true};
    case CliffordGate::S:
      if (l == L::X) return {L::Y, false};
      if (l == L::Y) return {L::X, true};
      return {L::Z, false};
    case CliffordGate::X:
      return {l, l != L::X};
    case CliffordGate::Y:
      return {l, l != L::Y};
    case CliffordGate::Z:
      return {l, l != L::Z};
  }
  return {l, false};
}

}  // namespace

Tableau::Tableau(std::vector<PauliString> generators) : rows_(std::move(generators)) {
  if (rows_.empty()) throw std::invalid_argument("Tableau: no generators");
  n_ = rows_.front().size();
  if (static_cast<int>(rows_.size()) != n_)
    throw std::invalid_argument("Tableau: need exactly n generators for n qubits");
  for (const auto& r : rows_) {
    if (r.size() != n_) throw std::invalid_argument("Tableau: generator length mismatch");
    if (r.phase_pow() % 2 != 0) throw std::invalid_argument("Tableau: generator phase must be real");
    if (r.is_identity_letters()) throw std::invalid_argument("Tableau: identity is not a generator");
  }
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (std::size_t j = i + 1; j < rows_.size(); ++j)
      if (!rows_[i].commutes_with(rows_[j]))
        throw std::invalid_argument("Tableau: generators must commute");
  // Independence over F2: the canonical form must keep n nonzero rows.
  // (Checked cheaply here by rank of the symplectic bit matrix.)
  std::vector<std::uint64_t> bits;
  for (const auto& r : rows_) {
    std::uint64_t v = 0;
    for (int q = 0; q < n_; ++q) {
      if (r.x_bit(q)) v |= std::uint64_t{1} << q;
      if (r.z_bit(q)) v |= std::uint64_t{1} << (n_ + q);
    }
    bits.push_back(v);
  }
  int rank = 0;
  for (int col = 0; col < 2 * n_ && rank < static_cast<int>(bits.size()); ++col) {
    std::uint64_t mask = std::uint64_t{1} << col;
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(bits.size()); ++r)
      if (bits[static_cast<std::size_t>(r)] & mask) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(bits[static_cast<std::size_t>(rank)], bits[static_cast<std::size_t>(pivot)]);
    for (int r = 0; r < static_cast<int>(bits.size()); ++r)
      if (r != rank && (bits[static_cast<std::size_t>(r)] & mask))
        bits[static_cast<std::size_t>(r)] ^= bits[static_cast<std::size_t>(rank)];
    ++rank;
  }
  if (rank != n_) throw std::invalid_argument("Tableau: generators must be independent");
}

Tableau Tableau::ghz(int n) {
  if (n < 1) throw std::invalid_argument("Tableau::ghz: n >= 1 required");
  std::vector<PauliString> rows;
  rows.push_back(PauliString(std::vector<PauliLetter>(static_cast<std::size_t>(n), PauliLetter::X)));
  for (int q = 1; q < n; ++q) {
    std::vector<PauliLetter> letters(static_cast<std::size_t>(n), PauliLetter::I);
    letters[0] = PauliLetter::Z;
    letters[static_cast<std::size_t>(q)] = PauliLetter::Z;
    rows.emplace_back(std::move(letters));
  }
  return Tableau(std::move(rows));
}

Tableau Tableau::graph(const Eigen::MatrixXi& adj) {
  int n = static_cast<int>(adj.rows());
  if (adj.cols() != n) throw std::invalid_argument("Tableau::graph: adjacency matrix not square");
  for (int i = 0; i < n; ++i) {
    if (adj(i, i) != 0) throw std::invalid_argument("Tableau::graph: diagonal must be zero");
    for (int j = 0; j < n; ++j) {
      if (adj(i, j) != adj(j, i)) throw std::invalid_argument("Tableau::graph: adjacency not symmetric");
      if (adj(i, j) != 0 && adj(i, j) != 1) throw std::invalid_argument("Tableau::graph: entries must be 0/1");
    }
  }
  std::vector<PauliString> rows;
  for (int j = 0; j < n; ++j) {
    std::vector<PauliLetter> letters(static_cast<std::size_t>(n), PauliLetter::I);
    letters[static_cast<std::size_t>(j)] = PauliLetter::X;
    for (int k = 0; k < n; ++k)
      if (adj(j, k)) letters[static_cast<std::size_t>(k)] = PauliLetter::Z;
    rows.emplace_back(std::move(letters));
  }
  return Tableau(std::move(rows));
}

Tableau Tableau::parse(std::string_view text) {
  std::vector<PauliString> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string trimmed;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
    if (trimmed.empty()) continue;
    rows.push_back(PauliString::parse(trimmed));
  }
  return Tableau(std::move(rows));
}

Tableau Tableau::applied(CliffordGate g, int qubit) const {
  if (qubit < 0 || qubit >= n_) throw std::invalid_argument("Tableau::applied: qubit out of range");
  std::vector<PauliString> rows;
  rows.reserve(rows_.size());
  for (const auto& r : rows_) {
    std::vector<PauliLetter> letters = r.letters();
    auto [l, flip] = conjugate_letter(g, letters[static_cast<std::size_t>(qubit)]);
    letters[static_cast<std::size_t>(qubit)] = l;
    rows.emplace_back(std::move(letters), r.phase_pow() + (flip ? 2 : 0));
  }
  return Tableau(std::move(rows));
}

int Tableau::signed_membership(const PauliString& p) const {
  if (p.size() != n_) throw std::invalid_argument("signed_membership: size mismatch");
  if (p.phase_pow() % 2 != 0) throw std::invalid_argument("signed_membership: phase must be real");

  // Solve for the generator subset reproducing p's symplectic bits.
  std::vector<std::uint64_t> bits(rows_.size());
  auto row_bits = [&](const PauliString& r) {
    std::uint64_t v = 0;
    for (int q = 0; q < n_; ++q) {
      if (r.x_bit(q)) v |= std::uint64_t{1} << q;
      if (r.z_bit(q)) v |= std::uint64_t{1} << (n_ + q);
    }
    return v;
  };
  for (std::size_t i = 0; i < rows_.size(); ++i) bits[i] = row_bits(rows_[i]);
  std::uint64_t target = row_bits(p);

  // Row-reduce the generator bit matrix, tracking which original generators
  // make up each reduced row.
  std::vector<std::uint64_t> basis = bits;
  std::vector<std::uint64_t> combo(rows_.size());
  for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = std::uint64_t{1} << i;

  std::vector<int> pivot_col;
  std::size_t rank = 0;
  for (int col = 0; col < 2 * n_ && rank < basis.size(); ++col) {
    std::uint64_t mask = std::uint64_t{1} << col;
    std::size_t pivot = rank;
    while (pivot < basis.size() && !(basis[pivot] & mask)) ++pivot;
    if (pivot == basis.size()) continue;
    std::swap(basis[rank], basis[pivot]);
    std::swap(combo[rank], combo[pivot]);
    for (std::size_t r = 0; r < basis.size(); ++r)
      if (r != rank && (basis[r] & mask)) {
        basis[r] ^= basis[rank];
        combo[r] ^= combo[rank];
      }
    pivot_col.push_back(col);
    ++rank;
  }

  std::uint64_t residual = target, acc_combo = 0;
  for (std::size_t i = 0; i < rank; ++i) {
    std::uint64_t mask = std::uint64_t{1} << pivot_col[i];
    if (residual & mask) {
      residual ^= basis[i];
      acc_combo ^= combo[i];
    }
  }
  if (residual != 0) return 0;

  PauliString prod = PauliString::identity(n_);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (acc_combo & (std::uint64_t{1} << i)) prod = prod.times(rows_[i]);
  // Same symplectic bits, so letters match; compare phases.
  int diff = (prod.phase_pow() - p.phase_pow() + 4) % 4;
  if (diff == 0) return 1;
  if (diff == 2) return -1;
  throw std::logic_error("signed_membership: imaginary phase ratio");
}

Tableau Tableau::canonical() const {
  std::vector<PauliString> rows = rows_;
  std::size_t rank = 0;
  for (int col = 0; col < 2 * n_ && rank < rows.size(); ++col) {
    // Column order: x bits first, then z bits, both by qubit index.
    auto bit_at = [&](const PauliString& r) {
      int q = col % n_;
      return col < n_ ? r.x_bit(q) : r.z_bit(q);
    };
    std::size_t pivot = rank;
    while (pivot < rows.size() && !bit_at(rows[pivot])) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && bit_at(rows[r])) rows[r] = rows[r].times(rows[rank]);
    ++rank;
  }
  return Tableau(std::move(rows));
}

std::string Tableau::key() const {
  Tableau c = canonical();
  std::vector<std::string> lines;
  for (const auto& r : c.rows_) lines.push_back(r.str());
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

StateVector Tableau::to_state() const {
  if (n_ > 10) throw std::invalid_argument("Tableau::to_state: too many qubits for dense form");
  Eigen::Index dim = Eigen::Index{1} << n_;
  CMat proj = CMat::Identity(dim, dim);
  for (const auto& r : rows_) proj = proj * 0.5 * (CMat::Identity(dim, dim) + r.to_matrix());
  // The projector has rank 1; pick its largest column as the state.
  Eigen::Index best = 0;
  double best_norm = 0.0;
  for (Eigen::Index c = 0; c < dim; ++c) {
    double nc = proj.col(c).norm();
    if (nc > best_norm) {
      best_norm = nc;
      best = c;
    }
  }
  if (best_norm < 1e-9) throw std::logic_error("Tableau::to_state: projector vanished");
  return StateVector(proj.col(best), n_);
}

std::string Tableau::to_text() const {
  std::string out;
  for (const auto& r : rows_) {
    out += r.str();
    out += '\n';
  }
  return out;
}

QfiMatrix qfi_stabilizer(const Tableau& t, const ResourcePartition& p, const SeparableDynamics& d) {
  d.validate(p);
  if (t.qubits() != p.total()) throw std::invalid_argument("qfi_stabilizer: qubit count mismatch");
  int n = p.total();
  int k = p.node_count();

  std::vector<PauliString> gens;
  gens.reserve(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) {
    auto axis = d.pauli_axis(q);
    if (!axis) throw std::invalid_argument("qfi_stabilizer: generator is not a Pauli axis; use the dense path");
    auto [letter, sign] = *axis;
    gens.push_back(PauliString::single(n, q, letter, sign < 0 ? 2 : 0));
  }

  std::vector<int> single(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) single[static_cast<std::size_t>(q)] = t.signed_membership(gens[static_cast<std::size_t>(q)]);

  Eigen::MatrixXd q_out = Eigen::MatrixXd::Zero(k, k);
  for (int mu = 0; mu < k; ++mu) {
    auto [mu_first, mu_last] = p.node_range(mu);
    for (int nu = 0; nu < k; ++nu) {
      auto [nu_first, nu_last] = p.node_range(nu);
      double acc = 0.0;
      for (int j = mu_first; j < mu_last; ++j)
        for (int l = nu_first; l < nu_last; ++l) {
          int pair = t.signed_membership(
              gens[static_cast<std::size_t>(j)].times(gens[static_cast<std::size_t>(l)]));
          acc += pair - single[static_cast<std::size_t>(j)] * single[static_cast<std::size_t>(l)];
        }
      q_out(mu, nu) = 4.0 * d.time_for_node(mu) * d.time_for_node(nu) * acc;
    }
  }

  QfiMatrix out;
  out.m = 0.5 * (q_out + q_out.transpose());
  out.provenance = QfiProvenance::Stabilizer;
  out.theta.assign(static_cast<std::size_t>(k), 0.0);
  return out;
}

std::vector<Tableau> enumerate_stabilizer_states(int n) {
  if (n < 1 || n > 3)
    throw std::invalid_argument("enumerate_stabilizer_states: supported for n in {1, 2, 3}");

  std::vector<Tableau> seeds;
  // Product seed |0...0>.
  {
    std::vector<PauliString> rows;
    for (int q = 0; q < n; ++q) rows.push_back(PauliString::single(n, q, PauliLetter::Z));
    seeds.emplace_back(std::move(rows));
  }
  if (n >= 2) seeds.push_back(Tableau::ghz(n));
  if (n == 3) {
    // Bell pair on {a, b} with |0> on the remaining qubit; local gates cannot
    // change the pairing, so all three pairings seed separately.
    auto bell_pair = [&](int a, int b, int c) {
      std::vector<PauliLetter> xx(3, PauliLetter::I), zz(3, PauliLetter::I);
      xx[static_cast<std::size_t>(a)] = PauliLetter::X;
      xx[static_cast<std::size_t>(b)] = PauliLetter::X;
      zz[static_cast<std::size_t>(a)] = PauliLetter::Z;
      zz[static_cast<std::size_t>(b)] = PauliLetter::Z;
      std::vector<PauliString> rows{PauliString(xx), PauliString(zz),
                                    PauliString::single(3, c, PauliLetter::Z)};
      return Tableau(std::move(rows));
    };
    seeds.push_back(bell_pair(0, 1, 2));
    seeds.push_back(bell_pair(0, 2, 1));
    seeds.push_back(bell_pair(1, 2, 0));
  }

  std::set<std::string> seen;
  std::vector<Tableau> out;
  std::deque<Tableau> frontier;
  for (const auto& s : seeds) {
    std::string key = s.key();
    if (seen.insert(key).second) {
      out.push_back(s);
      frontier.push_back(s);
    }
  }
  while (!frontier.empty()) {
    Tableau t = std::move(frontier.front());
    frontier.pop_front();
    for (int q = 0; q < n; ++q)
      for (CliffordGate g : {CliffordGate::H, CliffordGate::S}) {
        Tableau next = t.applied(g, q);
        std::string key = next.key();
        if (seen.insert(key).second) {
          out.push_back(next);
          frontier.push_back(next);
        }
      }
  }
  return out;
}

}  // namespace qsense
