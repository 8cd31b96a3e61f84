#include "qsense/resources.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qsense {

long long gcd_vec(const IntVec& v) {
  if (v.empty()) throw std::invalid_argument("gcd_vec: empty vector");
  long long g = 0;
  for (long long x : v) g = std::gcd(g, std::llabs(x));
  return g;
}

Ordering product_order(const IntVec& u, const IntVec& v) {
  if (u.size() != v.size()) throw std::invalid_argument("product_order: length mismatch");
  bool some_less = false, some_greater = false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < v[i]) some_less = true;
    if (u[i] > v[i]) some_greater = true;
  }
  if (some_less && some_greater) return Ordering::Incomparable;
  if (some_less) return Ordering::Less;
  if (some_greater) return Ordering::Greater;
  return Ordering::Equal;
}

bool vec_leq(const IntVec& u, const IntVec& v) {
  Ordering o = product_order(u, v);
  return o == Ordering::Equal || o == Ordering::Less;
}

bool vec_lt(const IntVec& u, const IntVec& v) { return product_order(u, v) == Ordering::Less; }

IntVec vec_add(const IntVec& u, const IntVec& v) {
  if (u.size() != v.size()) throw std::invalid_argument("vec_add: length mismatch");
  IntVec r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] + v[i];
  return r;
}

IntVec vec_sub(const IntVec& u, const IntVec& v) {
  if (u.size() != v.size()) throw std::invalid_argument("vec_sub: length mismatch");
  IntVec r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] - v[i];
  return r;
}

IntVec vec_scale(long long c, const IntVec& u) {
  IntVec r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = c * u[i];
  return r;
}

ResourcePartition::ResourcePartition(IntVec node_sizes) : sizes_(std::move(node_sizes)) {
  if (sizes_.empty()) throw std::invalid_argument("ResourcePartition: at least one node required");
  starts_.reserve(sizes_.size());
  for (long long s : sizes_) {
    if (s < 0) throw std::invalid_argument("ResourcePartition: negative node size");
    starts_.push_back(total_);
    total_ += static_cast<int>(s);
  }
}

std::pair<int, int> ResourcePartition::node_range(int mu) const {
  if (mu < 0 || mu >= node_count()) throw std::invalid_argument("ResourcePartition: node out of range");
  return {starts_[mu], starts_[mu] + static_cast<int>(sizes_[mu])};
}

int ResourcePartition::node_of(int qubit) const {
  if (qubit < 0 || qubit >= total_) throw std::invalid_argument("ResourcePartition: qubit out of range");
  for (int mu = node_count() - 1; mu >= 0; --mu)
    if (qubit >= starts_[mu]) return mu;
  return 0;
}

TargetFunction TargetFunction::from_integers(IntVec a) {
  if (a.empty()) throw std::invalid_argument("TargetFunction: empty coefficient vector");
  long long g = gcd_vec(a);
  if (g == 0) throw std::invalid_argument("TargetFunction: zero target function");
  TargetFunction t;
  t.coeffs_.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) t.coeffs_[i] = a[i] / g;
  t.scale_ = 1.0 / static_cast<double>(g);
  return t;
}

TargetFunction TargetFunction::from_rationals(const std::vector<std::pair<long long, long long>>& a) {
  if (a.empty()) throw std::invalid_argument("TargetFunction: empty coefficient vector");
  long long l = 1;
  for (auto [num, den] : a) {
    if (den == 0) throw std::invalid_argument("TargetFunction: zero denominator");
    (void)num;
    l = std::lcm(l, std::llabs(den));
  }
  IntVec scaled(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) scaled[i] = a[i].first * (l / a[i].second);
  TargetFunction t = from_integers(scaled);
  t.scale_ *= static_cast<double>(l);
  return t;
}

Eigen::VectorXd TargetFunction::normalized() const {
  Eigen::VectorXd v(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) v[static_cast<int>(i)] = static_cast<double>(coeffs_[i]);
  return v / v.norm();
}

BitString::BitString(std::uint64_t value, int n) : value_(value), n_(n) {
  if (n < 0 || n > 63) throw std::invalid_argument("BitString: length out of range");
  if (n < 64 && (value >> n) != 0) throw std::invalid_argument("BitString: value exceeds length");
}

BitString BitString::from_string(std::string_view bits) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      v |= (std::uint64_t{1} << i);
    else if (bits[i] != '0')
      throw std::invalid_argument("BitString: invalid character");
  }
  return BitString(v, static_cast<int>(bits.size()));
}

BitString BitString::complement() const {
  std::uint64_t mask = (n_ == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1);
  return BitString(~value_ & mask, n_);
}

std::string BitString::str() const {
  std::string s(n_, '0');
  for (int i = 0; i < n_; ++i)
    if (bit(i)) s[i] = '1';
  return s;
}

IntVec hamming_vec(const BitString& s, const ResourcePartition& p) {
  if (s.size() != p.total()) throw std::invalid_argument("hamming_vec: length mismatch");
  IntVec h(p.node_count(), 0);
  for (int mu = 0; mu < p.node_count(); ++mu) {
    auto [first, last] = p.node_range(mu);
    for (int q = first; q < last; ++q) h[mu] += s.bit(q);
  }
  return h;
}

IntVec hamming_vec_sym(const BitString& s, const ResourcePartition& p) {
  IntVec h = hamming_vec(s, p);
  return vec_sub(p.node_sizes(), vec_scale(2, h));
}

std::string zone_name(Zone z) {
  switch (z) {
    case Zone::I: return "I";
    case Zone::II: return "II";
    case Zone::III: return "III";
    case Zone::IV: return "IV";
  }
  return "?";
}

Zone classify_zone(const TargetFunction& a, const IntVec& n) {
  const IntVec& av = a.coeffs();
  if (av.size() != n.size()) throw std::invalid_argument("classify_zone: length mismatch");
  for (long long x : av)
    if (x <= 0) throw std::invalid_argument("classify_zone: target entries must be positive");
  // Zone I is insufficiency: some node holds fewer qubits than the target
  // coefficient requires.
  if (!vec_leq(av, n)) return Zone::I;
  if (product_order(av, n) == Ordering::Equal) return Zone::II;
  if (vec_leq(vec_scale(2, av), n)) return Zone::IV;
  return Zone::III;
}

namespace {

void masks_with_popcount(int bits, int ones, std::vector<std::uint64_t>& out) {
  out.clear();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << bits); ++m)
    if (std::popcount(m) == ones) out.push_back(m);
}

}  // namespace

std::vector<BitString> class_representatives(const ResourcePartition& p, const IntVec& w) {
  if (static_cast<int>(w.size()) != p.node_count())
    throw std::invalid_argument("class_representatives: weight length mismatch");
  for (int mu = 0; mu < p.node_count(); ++mu)
    if (w[mu] < 0 || w[mu] > p.node_sizes()[mu])
      throw std::invalid_argument("class_representatives: weight out of bounds");

  std::vector<std::vector<std::uint64_t>> per_node(p.node_count());
  for (int mu = 0; mu < p.node_count(); ++mu)
    masks_with_popcount(static_cast<int>(p.node_sizes()[mu]), static_cast<int>(w[mu]), per_node[mu]);

  std::vector<std::uint64_t> values{0};
  for (int mu = 0; mu < p.node_count(); ++mu) {
    auto [first, last] = p.node_range(mu);
    (void)last;
    std::vector<std::uint64_t> next;
    next.reserve(values.size() * per_node[mu].size());
    for (std::uint64_t base : values)
      for (std::uint64_t m : per_node[mu]) next.push_back(base | (m << first));
    values = std::move(next);
  }
  std::sort(values.begin(), values.end());
  std::vector<BitString> out;
  out.reserve(values.size());
  for (std::uint64_t v : values) out.emplace_back(v, p.total());
  return out;
}

}  // namespace qsense
