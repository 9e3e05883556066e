#include <doctest.h>

#include <cmath>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "nuq/dense.hpp"
#include "nuq/dynamics.hpp"
#include "nuq/models.hpp"

using namespace nuq;

namespace {

const AgassiParams kMidpoint{1.0, 0.5, 0.5, 0.5, 2};

StateVector random_state(std::mt19937_64& rng, int n) {
  Eigen::VectorXcd v(1 << n);
  std::normal_distribution<double> gauss;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    v(k) = cplx{gauss(rng), gauss(rng)};
  }
  v /= v.norm();
  return StateVector(n, std::move(v));
}

double state_error(const StateVector& a, const StateVector& b) {
  return (a.amplitudes - b.amplitudes).norm();
}

double trotter_state_error(const AgassiParams& p, double t, int n_trotter) {
  const PauliSum h = build_agassi(p);
  const auto groups = agassi_hamiltonian_groups(p);
  const StateVector psi0 = probe_state(p.n_modes());
  const StateVector exact = evolve_exact(h, psi0, t);
  const auto plan = TrotterPlan::create(
      h, {groups.begin(), groups.end()}, n_trotter, t);
  return state_error(evolve_trotter(plan, psi0), exact);
}

}  // namespace

TEST_CASE("probe state") {
  SUBCASE("n=8: upper half occupied, basis index 0xF0") {
    const StateVector psi = probe_state(8);
    CHECK(std::abs(psi.amplitudes(0xF0) - cplx{1.0, 0.0}) < 1e-15);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("n=2 gives |down up>") {
    const StateVector psi = probe_state(2);
    CHECK(std::abs(psi.amplitudes(0b10) - cplx{1.0, 0.0}) < 1e-15);
  }
  SUBCASE("sigma_z expectations on the n=8 probe") {
    const StateVector psi = probe_state(8);
    PauliSum z1(8), z5(8);
    z1.add(PauliString::single(8, 0, 'Z'));
    z5.add(PauliString::single(8, 4, 'Z'));
    CHECK(expectation_value(z1, psi.amplitudes).real() ==
          doctest::Approx(1.0));
    CHECK(expectation_value(z5, psi.amplitudes).real() ==
          doctest::Approx(-1.0));
  }
  SUBCASE("odd site counts are rejected") {
    CHECK_THROWS_AS(probe_state(7), std::invalid_argument);
  }
}

TEST_CASE("exact evolution") {
  const PauliSum h = build_agassi(kMidpoint);
  const StateVector psi0 = probe_state(8);

  SUBCASE("t=0 is the identity") {
    const StateVector out = evolve_exact(h, psi0, 0.0);
    CHECK(state_error(out, psi0) < 1e-12);
  }
  SUBCASE("an eigenstate only picks up a phase") {
    // the noninteracting Hamiltonian is diagonal, every basis state is an
    // eigenstate
    const PauliSum h0 = build_agassi({1.0, 0.0, 0.0, 0.0, 2});
    const StateVector out = evolve_exact(h0, psi0, 1.7);
    CHECK(std::abs(std::abs(psi0.amplitudes.dot(out.amplitudes)) - 1.0) <
          1e-12);
  }
  SUBCASE("matches the scaling-and-squaring matrix exponential") {
    const Eigen::MatrixXcd m = to_dense_matrix(h);
    const Eigen::MatrixXcd u = (cplx{0.0, -1.0} * m).exp();
    const Eigen::VectorXcd expected = u * psi0.amplitudes;
    const StateVector out = evolve_exact(h, psi0, 1.0);
    CHECK((out.amplitudes - expected).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("non-hermitian input is rejected") {
    PauliSum bad(2);
    bad.add(PauliString::from_label("XI"), cplx{0.0, 1.0});
    CHECK_THROWS_AS(ExactPropagator{bad}, std::invalid_argument);
  }
  SUBCASE("reversibility") {
    const StateVector fwd = evolve_exact(h, psi0, 2.3);
    const StateVector back = evolve_exact(h, fwd, -2.3);
    CHECK(state_error(back, psi0) < 1e-9);
  }
  SUBCASE("energy conservation across the default grid") {
    const ExactPropagator prop(h);
    const double e0 = expectation_value(h, psi0.amplitudes).real();
    for (double t : make_time_grid(kDefaultSeriesSamples,
                                   kDefaultSeriesHorizon)) {
      const StateVector psi = prop.evolve(psi0, t);
      CHECK(std::abs(expectation_value(h, psi.amplitudes).real() - e0) <
            1e-9);
    }
  }
}

TEST_CASE("trotter evolution") {
  const PauliSum h = build_agassi(kMidpoint);
  const auto groups_arr = agassi_hamiltonian_groups(kMidpoint);
  const std::vector<PauliSum> groups(groups_arr.begin(), groups_arr.end());
  const StateVector psi0 = probe_state(8);

  SUBCASE("a single whole-H group equals exact evolution") {
    const auto plan = TrotterPlan::create(h, {h}, 3, 1.5);
    const StateVector exact = evolve_exact(h, psi0, 1.5);
    CHECK(state_error(evolve_trotter(plan, psi0), exact) < 1e-10);
  }
  SUBCASE("commuting sitewise groups equal exact evolution") {
    std::mt19937_64 rng(3);
    PauliSum zsum(4);
    std::vector<PauliSum> zgroups;
    for (int k = 0; k < 4; ++k) {
      PauliSum g(4);
      g.add(PauliString::single(4, k, 'Z'),
            static_cast<double>(rng() % 100) / 50.0 - 1.0);
      zsum.add(g);
      zgroups.push_back(std::move(g));
    }
    const auto plan = TrotterPlan::create(zsum, zgroups, 5, 2.0);
    const StateVector start = random_state(rng, 4);
    const StateVector exact = evolve_exact(zsum, start, 2.0);
    CHECK(state_error(evolve_trotter(plan, start), exact) < 1e-10);
  }
  SUBCASE("state error halves when n_T doubles from 8 to 16") {
    const double e8 = trotter_state_error(kMidpoint, 2.0, 8);
    const double e16 = trotter_state_error(kMidpoint, 2.0, 16);
    const double ratio = e16 / e8;
    CHECK(ratio > 0.4);
    CHECK(ratio < 0.6);
  }
  SUBCASE("first-order log-log slope in [0.8, 1.2]") {
    std::vector<double> log_inv_n, log_err;
    for (int n : {4, 8, 16, 32}) {
      log_inv_n.push_back(std::log(1.0 / n));
      log_err.push_back(std::log(trotter_state_error(kMidpoint, 2.0, n)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = static_cast<int>(log_inv_n.size());
    for (int k = 0; k < m; ++k) {
      sx += log_inv_n[k];
      sy += log_err[k];
      sxx += log_inv_n[k] * log_inv_n[k];
      sxy += log_inv_n[k] * log_err[k];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(slope > 0.8);
    CHECK(slope < 1.2);
  }
  SUBCASE("norm is preserved") {
    const auto plan = TrotterPlan::create(h, groups, 6, 3.0);
    CHECK(std::abs(evolve_trotter(plan, psi0).norm() - 1.0) < 1e-10);
  }
  SUBCASE("a bad partition is rejected") {
    auto broken = groups;
    broken.pop_back();
    CHECK_THROWS_AS(TrotterPlan::create(h, broken, 6, 1.0),
                    std::invalid_argument);
  }
}

TEST_CASE("connected zz correlation") {
  SUBCASE("computational basis product states give zero") {
    for (std::uint64_t idx : {0ull, 3ull, 9ull, 15ull}) {
      const auto psi = StateVector::basis_state(4, idx);
      CHECK(correlation_cz(psi, 0, 1) == doctest::Approx(0.0));
      CHECK(correlation_cz(psi, 1, 3) == doctest::Approx(0.0));
    }
  }
  SUBCASE("the Bell-type pair gives 1") {
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
    amps(0b00) = 1.0 / std::sqrt(2.0);
    amps(0b11) = 1.0 / std::sqrt(2.0);
    const StateVector psi(2, std::move(amps));
    CHECK(correlation_cz(psi, 0, 1) == doctest::Approx(1.0));
  }
  SUBCASE("symmetric in the site pair") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      const StateVector psi = random_state(rng, 4);
      const int i = static_cast<int>(rng() % 4);
      int j = static_cast<int>(rng() % 4);
      if (i == j) j = (j + 1) % 4;
      CHECK(correlation_cz(psi, i, j) ==
            doctest::Approx(correlation_cz(psi, j, i)));
    }
  }
  SUBCASE("equal sites are rejected") {
    const auto psi = StateVector::basis_state(2, 1);
    CHECK_THROWS_AS(correlation_cz(psi, 1, 1), std::invalid_argument);
  }
}

TEST_CASE("correlation series") {
  const StateVector psi0 = probe_state(8);
  const auto times = make_time_grid(kDefaultSeriesSamples,
                                    kDefaultSeriesHorizon);

  SUBCASE("time grid is strictly increasing from 0") {
    CHECK(times.front() == 0.0);
    for (std::size_t k = 1; k < times.size(); ++k) {
      CHECK(times[k] > times[k - 1]);
    }
    CHECK(times.back() == doctest::Approx(10.0));
  }
  SUBCASE("diagonal Hamiltonian freezes the probe: identically zero") {
    const PauliSum h0 = build_agassi({1.0, 0.0, 0.0, 0.0, 2});
    const auto series = correlation_series(h0, psi0, {0, 1}, times,
                                           EvolutionMode::exact());
    for (double v : series.values) CHECK(std::abs(v) < 1e-14);
  }
  SUBCASE("t=0 sample vanishes for the product probe under any H") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 3; ++trial) {
      const AgassiParams p{1.0, (rng() % 20) / 10.0, (rng() % 20) / 10.0,
                           (rng() % 20) / 10.0, 2};
      const auto series = correlation_series(build_agassi(p), psi0, {0, 1},
                                             times, EvolutionMode::exact());
      CHECK(std::abs(series.values.front()) < 1e-13);
    }
  }
  SUBCASE("values stay in [-1, 1]; exact vs trotter deviation is bounded") {
    const PauliSum h = build_agassi(kMidpoint);
    const auto groups_arr = agassi_hamiltonian_groups(kMidpoint);
    const std::vector<PauliSum> groups(groups_arr.begin(), groups_arr.end());
    const auto exact = correlation_series(h, psi0, {0, 1}, times,
                                          EvolutionMode::exact());
    const auto trot = correlation_series(h, psi0, {0, 1}, times,
                                         EvolutionMode::trotter(6), &groups);
    double noise = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      CHECK(std::abs(exact.values[k]) <= 1.0 + 1e-12);
      CHECK(std::abs(trot.values[k]) <= 1.0 + 1e-12);
      noise = std::max(noise, std::abs(exact.values[k] - trot.values[k]));
    }
    MESSAGE("exact-vs-trotter(6) pointwise noise figure: ", noise);
    CHECK(noise <= 2.0);
  }
  SUBCASE("trotter mode requires groups") {
    const PauliSum h = build_agassi(kMidpoint);
    CHECK_THROWS_AS(correlation_series(h, psi0, {0, 1}, times,
                                       EvolutionMode::trotter(6)),
                    std::invalid_argument);
  }
}

TEST_CASE("evolution mode parsing") {
  CHECK(EvolutionMode::parse("exact").kind == EvolutionMode::kExact);
  const auto m = EvolutionMode::parse("trotter:6");
  CHECK(m.kind == EvolutionMode::kTrotter);
  CHECK(m.n_trotter == 6);
  CHECK(m.to_string() == "trotter:6");
  CHECK_THROWS_AS(EvolutionMode::parse("fancy"), std::invalid_argument);
}
