#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "rydsieve/params.hpp"
#include "rydsieve/units.hpp"

using namespace rydsieve;

namespace {

PhysicalParams sane_params() {
  PhysicalParams p;
  p.omega_p = hz_to_rad(4.0e5);
  p.omega_c = hz_to_rad(2.0e6);
  p.delta_s = hz_to_rad(3.0e8);
  p.omega_s = solve_omega_s(hz_to_rad(2.0e4), p.delta_s);
  p.gamma_e = hz_to_rad(6.0e6);
  p.gamma_r = hz_to_rad(100.0);
  p.n_target = 8;
  p.delta_p = probe_detuning(p.n_target, p.omega_s, p.delta_s);
  return p;
}

// Ground-state eigenvalue of the collective two-level dressing problem,
// [[0, sqrt(n) w/2], [sqrt(n) w/2, -d]], computed by Eigen instead of the
// closed form under test.
double shift_by_diagonalization(int n, double omega_s, double delta_s) {
  Eigen::Matrix2d h;
  h << 0.0, 0.5 * std::sqrt(double(n)) * omega_s,
      0.5 * std::sqrt(double(n)) * omega_s, -delta_s;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
  // the dressed ground state connects to the eigenvalue nearer zero
  double a = es.eigenvalues()[0], b = es.eigenvalues()[1];
  return std::abs(a) < std::abs(b) ? a : b;
}

}  // namespace

TEST_CASE("rubidium preset carries the 5P3/2 linewidth") {
  DecayRates d = decay_preset("rubidium");
  CHECK(d.gamma_e == doctest::Approx(hz_to_rad(6.0e6)));
  CHECK(d.gamma_r == doctest::Approx(hz_to_rad(100.0)));
  CHECK_THROWS_AS(decay_preset("cesium"), std::invalid_argument);
}

TEST_CASE("exact shift matches a direct 2x2 diagonalization") {
  double w = hz_to_rad(5.4e7);
  for (double d : {hz_to_rad(3.0e8), -hz_to_rad(3.0e8), hz_to_rad(2.0e8)}) {
    for (int n : {1, 2, 8, 20, 40}) {
      double oracle = shift_by_diagonalization(n, w, d);
      CHECK(stark_shift_exact(n, w, d) ==
            doctest::Approx(oracle).epsilon(1e-12));
    }
  }
  CHECK(stark_shift_exact(0, w, hz_to_rad(3e8)) == 0.0);
  CHECK_THROWS_AS(stark_shift_exact(2, w, 0.0), std::invalid_argument);
}

TEST_CASE("perturbative shift reproduces its two stated terms") {
  double w = hz_to_rad(5.0e7), d = hz_to_rad(3.0e8);
  for (int n : {1, 3, 8}) {
    double linear = n * w * w / (4.0 * d);
    double quad = double(n) * n * w * w * w * w / (16.0 * d * d * d);
    CHECK(stark_shift_perturbative(n, w, d) ==
          doctest::Approx(linear - quad).epsilon(1e-14));
  }
}

TEST_CASE("perturbative shift converges to exact as dressing weakens") {
  double d = hz_to_rad(3.0e8);
  double prev = 1.0;
  for (double w_hz : {8.0e7, 4.0e7, 2.0e7, 1.0e7}) {
    double w = hz_to_rad(w_hz);
    double exact = stark_shift_exact(8, w, d);
    double rel = std::abs(stark_shift_perturbative(8, w, d) - exact) /
                 std::abs(exact);
    CHECK(rel < prev);
    prev = rel;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("characteristic shift and its inverse round trip") {
  double d = hz_to_rad(3.0e8);
  for (double delta_hz : {5.0e3, 2.0e4, 5.0e4}) {
    double w = solve_omega_s(hz_to_rad(delta_hz), d);
    CHECK(characteristic_shift(w, d) ==
          doctest::Approx(hz_to_rad(delta_hz)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(solve_omega_s(hz_to_rad(2e4), -hz_to_rad(3e8)),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_omega_s(0.0, hz_to_rad(3e8)), std::invalid_argument);
}

TEST_CASE("probe detuning is the shift difference across one loss") {
  double w = hz_to_rad(5.4e7), d = hz_to_rad(3.0e8);
  for (int nt : {2, 8, 20}) {
    double expect = stark_shift_exact(nt - 1, w, d) - stark_shift_exact(nt, w, d);
    CHECK(probe_detuning(nt, w, d) == doctest::Approx(expect).epsilon(1e-14));
  }
  // red of the bare two-photon line when the dressing laser is blue detuned
  CHECK(probe_detuning(8, w, d) < 0.0);
}

TEST_CASE("transition mismatch vanishes at the target and grows linearly") {
  PhysicalParams p = sane_params();
  CHECK(std::abs(transition_mismatch(p.n_target, p)) < 1e-9 * std::abs(p.delta_p));

  // at second order the mismatch is exactly 2 (n_target - n) delta
  PhysicalParams q = p;
  q.delta_p = probe_detuning(q.n_target, q.omega_s, q.delta_s,
                             ShiftOrder::perturbative);
  double delta = characteristic_shift(q.omega_s, q.delta_s);
  for (int n : {5, 7, 9, 11}) {
    double expect = 2.0 * (q.n_target - n) * delta;
    CHECK(transition_mismatch(n, q, ShiftOrder::perturbative) ==
          doctest::Approx(expect).epsilon(1e-9));
  }

  // exact shifts keep the sign pattern and the rough magnitude
  for (int n : {5, 7, 9, 11}) {
    double expect = 2.0 * (p.n_target - n) * delta;
    double got = transition_mismatch(n, p);
    CHECK(got * expect > 0.0);
    CHECK(std::abs(got - expect) < 0.5 * std::abs(expect));
  }
}

TEST_CASE("parameter checking rejects hard violations") {
  PhysicalParams p = sane_params();
  CHECK(check_params(p).empty());

  PhysicalParams bad = p;
  bad.omega_c = 0.0;
  CHECK_THROWS_AS(check_params(bad), std::invalid_argument);
  bad = p;
  bad.gamma_e = 0.0;
  CHECK_THROWS_AS(check_params(bad), std::invalid_argument);
  bad = p;
  bad.omega_p = -1.0;
  CHECK_THROWS_AS(check_params(bad), std::invalid_argument);
  bad = p;
  bad.omega_c = 1.5 * p.omega_p;  // control weaker than twice the probe
  CHECK_THROWS_AS(check_params(bad), std::invalid_argument);
  bad = p;
  bad.delta_s = 0.5 * p.omega_s;  // dressing not far detuned
  CHECK_THROWS_AS(check_params(bad), std::invalid_argument);
  bad = p;
  bad.loss_branching = 0.0;
  CHECK_THROWS_AS(check_params(bad), std::invalid_argument);
  bad = p;
  bad.n_target = 0;
  CHECK_THROWS_AS(check_params(bad), std::invalid_argument);
}

TEST_CASE("soft conditions come back as warnings, not throws") {
  PhysicalParams p = sane_params();
  p.omega_p = 0.0;
  auto w = check_params(p);
  REQUIRE(w.size() == 1);
  CHECK(w[0].find("probe is off") != std::string::npos);

  p = sane_params();
  p.omega_c = 3.0 * p.omega_p;
  CHECK(check_params(p).size() == 1);
}

TEST_CASE("noise model validation") {
  NoiseModel m;
  m.nbar_initial = 26.0;
  m.sigma_delta_l = hz_to_rad(6e3);
  CHECK_NOTHROW(check_noise(m));
  m.sigma_delta_l = -1.0;
  CHECK_THROWS_AS(check_noise(m), std::invalid_argument);
  m.sigma_delta_l = 0.0;
  m.nbar_initial = 0.0;
  CHECK_THROWS_AS(check_noise(m), std::invalid_argument);
}

TEST_CASE("rydberg fraction follows the stated estimate") {
  double w = hz_to_rad(5.4e7), d = hz_to_rad(3.0e8);
  CHECK(rydberg_fraction(8, w, d) ==
        doctest::Approx(8.0 * w * w / (4.0 * d * d)).epsilon(1e-14));
  CHECK(rydberg_fraction(0, w, d) == 0.0);
}

TEST_CASE("critical distance inverts the van der Waals condition") {
  double c6 = 5.0e-60;
  double d = hz_to_rad(3.0e8);
  double rc = dressing_critical_distance(c6, d);
  CHECK(c6 / std::pow(rc, 6.0) == doctest::Approx(2.0 * hbar * d).epsilon(1e-12));
  CHECK_THROWS_AS(dressing_critical_distance(-1.0, d), std::invalid_argument);
}
