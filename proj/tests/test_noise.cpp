#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qsense/noise.hpp"

using namespace qsense;

namespace {

const double kSqrtHalf = 1.0 / std::sqrt(2.0);

DensityMatrix ghz_density(const ResourcePartition& p) {
  return DensityMatrix::pure(ghz(p, kSqrtHalf, kSqrtHalf));
}

// Channel-then-eigendecomposition oracle all closed forms are checked against.
QfiMatrix simulated_qfi(const ResourcePartition& p, const ChannelSpec& c) {
  DensityMatrix noisy = apply_channel(ghz_density(p), c);
  return qfi_mixed_eig(noisy, SeparableDynamics::all_z(p.total()), p);
}

std::vector<double> random_probs(int n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(lo, hi);
  std::vector<double> p(static_cast<std::size_t>(n));
  for (double& v : p) v = uni(rng);
  return p;
}

}  // namespace

TEST_CASE("channels return valid density matrices") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (ChannelKind kind : {ChannelKind::Dephasing, ChannelKind::BitFlip, ChannelKind::Depolarizing,
                           ChannelKind::AmplitudeDamping}) {
    for (int trial = 0; trial < 5; ++trial) {
      int n = 2 + trial % 2;
      CMat g(Eigen::Index{1} << n, 3);
      for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < 3; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
      CMat rho = g * g.adjoint();
      rho /= rho.trace();
      DensityMatrix in(std::move(rho), n);
      ChannelSpec c;
      c.kind = kind;
      c.probs = random_probs(n, 0.0, 1.0, rng);
      // Construction of the output re-validates trace, Hermiticity and PSD.
      CHECK_NOTHROW(apply_channel(in, c));
    }
  }
}

TEST_CASE("channel basics") {
  ResourcePartition p({1, 1, 1});
  DensityMatrix g = ghz_density(p);

  // p = 0 is the identity channel.
  DensityMatrix same = apply_channel(g, ChannelSpec::uniform(ChannelKind::Dephasing, 3, 0.0));
  CHECK((same.mat() - g.mat()).cwiseAbs().maxCoeff() < 1e-14);

  // Full dephasing kills the coherence: equal mixture of the two GHZ signs.
  DensityMatrix dephased = apply_channel(g, ChannelSpec::uniform(ChannelKind::Dephasing, 3, 0.5));
  CHECK(std::abs(dephased.mat()(0, 7)) < 1e-14);
  CHECK(dephased.mat()(0, 0).real() == doctest::Approx(0.5));
  CHECK(dephased.mat()(7, 7).real() == doctest::Approx(0.5));

  // Bit flips on |0...0> weigh strings by g(p, j).
  StateVector zero = ghz(p, 1.0, 0.0);
  std::vector<double> probs{0.1, 0.2, 0.3};
  ChannelSpec bf;
  bf.kind = ChannelKind::BitFlip;
  bf.probs = probs;
  DensityMatrix flipped = apply_channel(DensityMatrix::pure(zero), bf);
  for (std::uint64_t j = 0; j < 8; ++j) {
    double expect = weight_function_g(probs, BitString(j, 3));
    CHECK(flipped.mat()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real() ==
          doctest::Approx(expect));
  }

  ChannelSpec bad;
  bad.kind = ChannelKind::Dephasing;
  bad.probs = {0.1, 1.2, 0.0};
  CHECK_THROWS_AS(apply_channel(g, bad), std::invalid_argument);
}

TEST_CASE("weight function") {
  CHECK(weight_function_g({0.0, 0.0}, BitString(0, 2)) == doctest::Approx(1.0));
  CHECK(weight_function_g({0.5, 0.5}, BitString(2, 2)) == doctest::Approx(0.25));
  // j = "10": first qubit flipped.
  CHECK(weight_function_g({0.1, 0.2}, BitString::from_string("10")) == doctest::Approx(0.08));
  // Normalization over all strings.
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 6; ++n) {
    auto p = random_probs(n, 0.0, 1.0, rng);
    double total = 0.0;
    for (std::uint64_t j = 0; j < (std::uint64_t{1} << n); ++j) total += weight_function_g(p, BitString(j, n));
    CHECK(total == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(weight_function_g({0.5}, BitString(0, 2)), std::invalid_argument);
}

TEST_CASE("even/odd split of the dephasing weights") {
  // E + O = 1 and E - O = prod(1 - 2 p_i): E and O collect the strings with
  // even and odd parity.
  for (int n = 1; n <= 6; ++n) {
    for (double base : {0.0, 0.25, 0.5}) {
      std::vector<double> p(static_cast<std::size_t>(n), base);
      double even = 0.0, odd = 0.0;
      for (std::uint64_t j = 0; j < (std::uint64_t{1} << n); ++j) {
        double w = weight_function_g(p, BitString(j, n));
        if (std::popcount(j) % 2 == 0)
          even += w;
        else
          odd += w;
      }
      CHECK(even + odd == doctest::Approx(1.0));
      double prod = 1.0;
      for (double pi : p) prod *= 1.0 - 2.0 * pi;
      CHECK(even - odd == doctest::Approx(prod));
    }
  }
}

TEST_CASE("dephasing closed form and privacy preservation") {
  ResourcePartition p({1, 1, 1});
  TargetFunction a = TargetFunction::from_integers({1, 1, 1});

  QfiMatrix clean = predict_dephasing_qfi({0, 0, 0}, a);
  CHECK((clean.m - 4.0 * Eigen::MatrixXd::Ones(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

  // Frozen value: uniform p = 0.1 on three qubits gives 4 * 0.8^6.
  QfiMatrix q01 = predict_dephasing_qfi({0.1, 0.1, 0.1}, a);
  CHECK(q01.m(0, 0) == doctest::Approx(1.048576).epsilon(1e-12));

  // Any qubit at p = 1/2 destroys the coherence entirely.
  QfiMatrix dead = predict_dephasing_qfi({0.1, 0.5, 0.2}, a);
  CHECK(dead.m.cwiseAbs().maxCoeff() < 1e-14);

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    auto probs = random_probs(3, 0.0, 0.45, rng);
    ChannelSpec c;
    c.kind = ChannelKind::Dephasing;
    c.probs = probs;
    QfiMatrix sim = simulated_qfi(p, c);
    QfiMatrix pred = predict_dephasing_qfi(probs, a);
    CHECK((sim.m - pred.m).cwiseAbs().maxCoeff() < 1e-8);
    PrivacyReport rep = privacy_measure(sim, a);
    CHECK(rep.privacy >= 1.0 - 1e-9);
  }
}

TEST_CASE("bit flip closed form and privacy loss") {
  std::mt19937_64 rng(43);
  for (const IntVec& sizes : {IntVec{1, 1}, IntVec{2, 1}, IntVec{2, 2}}) {
    ResourcePartition p(sizes);
    TargetFunction a = TargetFunction::from_integers(sizes);
    for (int trial = 0; trial < 10; ++trial) {
      auto probs = random_probs(p.total(), 0.01, 0.49, rng);
      ChannelSpec c;
      c.kind = ChannelKind::BitFlip;
      c.probs = probs;
      QfiMatrix sim = simulated_qfi(p, c);
      QfiMatrix pred = predict_bitflip_qfi(probs, p);
      CHECK((sim.m - pred.m).cwiseAbs().maxCoeff() < 1e-8);
      PrivacyReport rep = privacy_measure(sim, a);
      CHECK(rep.privacy < 1.0 - 1e-6);
    }
  }
  // p = 0 only keeps the j = 0 term: the clean GHZ information.
  ResourcePartition p({1, 1});
  QfiMatrix q0 = predict_bitflip_qfi({0, 0}, p);
  CHECK((q0.m - 4.0 * Eigen::MatrixXd::Ones(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("depolarizing closed form preserves privacy") {
  ResourcePartition p({1, 1, 1});
  TargetFunction a = TargetFunction::from_integers({1, 1, 1});

  // Keep probability 1 is noiseless in this parameterization.
  QfiMatrix clean = predict_depolarizing_qfi({1, 1, 1}, a);
  CHECK((clean.m - 4.0 * Eigen::MatrixXd::Ones(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

  // The coherence factor (4p - 1)/3 vanishes at p = 1/4.
  QfiMatrix dead = predict_depolarizing_qfi({0.25, 0.9, 0.9}, a);
  CHECK(dead.m.cwiseAbs().maxCoeff() < 1e-14);

  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    auto probs = random_probs(3, 0.4, 0.98, rng);
    ChannelSpec c;
    c.kind = ChannelKind::Depolarizing;
    c.probs = probs;
    QfiMatrix sim = simulated_qfi(p, c);
    QfiMatrix pred = predict_depolarizing_qfi(probs, a);
    CHECK((sim.m - pred.m).cwiseAbs().maxCoeff() < 1e-8);
    PrivacyReport rep = privacy_measure(sim, a);
    CHECK(rep.privacy >= 1.0 - 1e-9);
  }
}

TEST_CASE("amplitude damping closed form preserves privacy") {
  std::mt19937_64 rng(53);
  for (const IntVec& sizes : {IntVec{1, 1}, IntVec{1, 1, 1}, IntVec{2, 1}}) {
    ResourcePartition p(sizes);
    TargetFunction a = TargetFunction::from_integers(sizes);

    QfiMatrix clean = predict_amplitude_damping_qfi(std::vector<double>(p.total(), 0.0), a);
    Eigen::VectorXd av = a.normalized() * a.normalized().norm();
    QfiMatrix sim0 = simulated_qfi(p, ChannelSpec::uniform(ChannelKind::AmplitudeDamping, p.total(), 0.0));
    CHECK((clean.m - sim0.m).cwiseAbs().maxCoeff() < 1e-10);

    QfiMatrix gone = predict_amplitude_damping_qfi(std::vector<double>(p.total(), 1.0), a);
    CHECK(gone.m.cwiseAbs().maxCoeff() < 1e-14);

    for (int trial = 0; trial < 20; ++trial) {
      auto probs = random_probs(p.total(), 0.05, 0.85, rng);
      ChannelSpec c;
      c.kind = ChannelKind::AmplitudeDamping;
      c.probs = probs;
      QfiMatrix sim = simulated_qfi(p, c);
      QfiMatrix pred = predict_amplitude_damping_qfi(probs, a);
      CHECK((sim.m - pred.m).cwiseAbs().maxCoeff() < 1e-8);
      PrivacyReport rep = privacy_measure(sim, a);
      CHECK(rep.privacy >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("closed forms hold at five qubits") {
  ResourcePartition p({2, 1, 2});
  TargetFunction a = TargetFunction::from_integers({2, 1, 2});
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 3; ++trial) {
    auto deph = random_probs(5, 0.0, 0.45, rng);
    ChannelSpec cd;
    cd.kind = ChannelKind::Dephasing;
    cd.probs = deph;
    CHECK((simulated_qfi(p, cd).m - predict_dephasing_qfi(deph, a).m).cwiseAbs().maxCoeff() < 1e-8);

    auto keep = random_probs(5, 0.45, 0.95, rng);
    ChannelSpec cp;
    cp.kind = ChannelKind::Depolarizing;
    cp.probs = keep;
    CHECK((simulated_qfi(p, cp).m - predict_depolarizing_qfi(keep, a).m).cwiseAbs().maxCoeff() < 1e-8);

    auto damp = random_probs(5, 0.05, 0.7, rng);
    ChannelSpec ca;
    ca.kind = ChannelKind::AmplitudeDamping;
    ca.probs = damp;
    CHECK((simulated_qfi(p, ca).m - predict_amplitude_damping_qfi(damp, a).m).cwiseAbs().maxCoeff() <
          1e-8);

    auto flip = random_probs(5, 0.05, 0.45, rng);
    ChannelSpec cb;
    cb.kind = ChannelKind::BitFlip;
    cb.probs = flip;
    CHECK((simulated_qfi(p, cb).m - predict_bitflip_qfi(flip, p).m).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("uniform amplitude damping at n = 2 as a spot check") {
  // Cross-check the 2x2 block normalization at p = 0.3 on two qubits.
  ResourcePartition p({1, 1});
  TargetFunction a = TargetFunction::from_integers({1, 1});
  QfiMatrix sim = simulated_qfi(p, ChannelSpec::uniform(ChannelKind::AmplitudeDamping, 2, 0.3));
  QfiMatrix pred = predict_amplitude_damping_qfi({0.3, 0.3}, a);
  CHECK((sim.m - pred.m).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("losing any qubit of a bare GHZ kills all information") {
  ResourcePartition p({1, 1, 1});
  TargetFunction a = TargetFunction::from_integers({1, 1, 1});
  for (int q = 0; q < 3; ++q) {
    FamilySpec f{p, a, {0, 0, 0}};
    LossReport rep = loss_analysis(f, {q});
    CHECK(rep.zero_information);
    CHECK(rep.trace_q < 1e-12);
    CHECK(rep.below_minimal);
  }
}

TEST_CASE("ancilla families survive losses up to the ancilla budget") {
  ResourcePartition p({2, 1, 2});
  TargetFunction a = TargetFunction::from_integers({1, 1, 1});
  FamilySpec f{p, a, {0, 0, 0}};

  // Lose one node-0 qubit: the surviving branches stay in a private family.
  LossReport rep = loss_analysis(f, {0});
  CHECK(!rep.zero_information);
  CHECK(!rep.below_minimal);
  CHECK(rep.trace_q > 0.0);
  REQUIRE(rep.report.has_value());
  CHECK(rep.report->privacy >= 1.0 - 1e-9);

  // Sequential losses within the ancilla budget b = (1, 0, 1): every
  // intermediate state is private or carries no information.
  LossReport two = loss_analysis(f, {0, 4});
  CHECK((two.zero_information || two.report->privacy >= 1.0 - 1e-9));

  // Losing beyond the budget is flagged.
  LossReport deep = loss_analysis(f, {0, 1});
  CHECK(deep.below_minimal);
}

TEST_CASE("robustness scans") {
  ResourcePartition p({1, 1, 1});
  TargetFunction a = TargetFunction::from_integers({1, 1, 1});
  DensityMatrix probe = ghz_density(p);
  SeparableDynamics dyn = SeparableDynamics::all_z(3);

  RobustnessCurve deph = robustness_scan(probe, ChannelKind::Dephasing, {0.0, 0.1, 0.2}, dyn, p, a);
  REQUIRE(deph.points.size() == 3);
  for (const auto& pt : deph.points) CHECK(pt.privacy == doctest::Approx(1.0));
  CHECK(deph.points[1].q_along_a == doctest::Approx(3 * 1.048576));

  RobustnessCurve flip = robustness_scan(probe, ChannelKind::BitFlip, {0.05, 0.15, 0.3}, dyn, p, a);
  for (std::size_t i = 1; i < flip.points.size(); ++i)
    CHECK(flip.points[i].privacy < flip.points[i - 1].privacy - 1e-9);
  CHECK(flip.points[0].privacy < 1.0 - 1e-6);

  RobustnessCurve depol = robustness_scan(probe, ChannelKind::Depolarizing, {0.5, 0.7, 0.9}, dyn, p, a);
  for (const auto& pt : depol.points) CHECK(pt.privacy == doctest::Approx(1.0));

  // Loss sweep over an ancilla family: private, then empty.
  ResourcePartition pf({2, 1, 2});
  FamilySpec f{pf, a, {0, 0, 0}};
  DensityMatrix fam = DensityMatrix::pure(build_family_state(f));
  RobustnessCurve loss = robustness_scan(fam, ChannelKind::Loss, {0.0, 1.0, 2.0},
                                         SeparableDynamics::all_z(5), pf, a, {0, 1});
  CHECK(loss.points[0].privacy == doctest::Approx(1.0));
  CHECK(loss.points[1].privacy == doctest::Approx(1.0));
  CHECK(std::isnan(loss.points[2].privacy));

  CHECK_THROWS_AS(robustness_scan(probe, ChannelKind::Dephasing, {0.2, 0.1}, dyn, p, a),
                  std::invalid_argument);
}

TEST_CASE("logical basis privacy survives channels that keep it private") {
  // Dephasing on the GHZ logical basis: every superposition stays private.
  ResourcePartition p({1, 1});
  TargetFunction a = TargetFunction::from_integers({1, 1});
  std::mt19937_64 rng(59);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Complex alpha(gauss(rng), gauss(rng)), beta(gauss(rng), gauss(rng));
    double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
    if (norm < 1e-6) continue;
    alpha /= norm;
    beta /= norm;
    if (std::abs(alpha) < 1e-3 || std::abs(beta) < 1e-3) continue;
    StateVector psi = ghz(p, alpha, beta);
    DensityMatrix noisy =
        apply_channel(DensityMatrix::pure(psi), ChannelSpec::uniform(ChannelKind::Dephasing, 2, 0.12));
    QfiMatrix q = qfi_mixed_eig(noisy, SeparableDynamics::all_z(2), p);
    PrivacyReport rep = privacy_measure(q, a);
    CHECK(rep.privacy >= 1.0 - 1e-9);
  }
}
