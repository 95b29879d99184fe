#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cmath>
#include <complex>

#include "rydsieve/hamiltonian.hpp"
#include "rydsieve/params.hpp"
#include "rydsieve/product_space.hpp"
#include "rydsieve/propagate.hpp"
#include "rydsieve/units.hpp"

using namespace rydsieve;
using cd = std::complex<double>;

namespace {

Eigen::SparseMatrix<cd> sparse_from(const Eigen::MatrixXcd& m) {
  return m.sparseView();
}

PhysicalParams demo_params() {
  PhysicalParams p;
  p.omega_p = hz_to_rad(4.0e5);
  p.omega_c = hz_to_rad(2.0e6);
  p.delta_s = hz_to_rad(3.0e8);
  p.omega_s = solve_omega_s(hz_to_rad(2.0e4), p.delta_s);
  p.gamma_e = hz_to_rad(6.0e6);
  p.gamma_r = hz_to_rad(100.0);
  p.n_target = 2;
  p.delta_p = probe_detuning(p.n_target, p.omega_s, p.delta_s);
  return p;
}

}  // namespace

TEST_CASE("stepper reproduces a resonant Rabi cycle") {
  double omega = hz_to_rad(1.0e6);
  Eigen::MatrixXcd h(2, 2);
  h << 0.0, -0.5 * omega, -0.5 * omega, 0.0;
  ExpStepper stepper(sparse_from(h));
  Eigen::VectorXcd psi(2);
  psi << 1.0, 0.0;
  double t = 0.0;
  for (int k = 0; k < 40; ++k) {
    stepper.step(psi, 2.5e-8);
    t += 2.5e-8;
    double expect = std::sin(0.5 * omega * t) * std::sin(0.5 * omega * t);
    CHECK(std::norm(psi[1]) == doctest::Approx(expect).epsilon(1e-9));
    CHECK(psi.squaredNorm() == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(stepper.matvec_count() > 0);
}

TEST_CASE("stepper damps amplitudes at half the population rate") {
  double gamma = 4.0e6;
  Eigen::MatrixXcd h(1, 1);
  h << cd(0.0, -0.5 * gamma);
  ExpStepper stepper(sparse_from(h));
  Eigen::VectorXcd psi(1);
  psi << 1.0;
  stepper.step(psi, 1.0e-6);
  CHECK(std::abs(psi[0]) == doctest::Approx(std::exp(-0.5 * gamma * 1.0e-6))
                                .epsilon(1e-10));
}

TEST_CASE("one long step equals many short ones") {
  PhysicalParams p = demo_params();
  Hamiltonian h = build_hamiltonian(p, 2, 0.0);
  ExpStepper stepper(sparse_hamiltonian(h.basis, p, 0.0));
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(h.basis.size());
  a[h.basis.index_of({2, 0, 0, 0})] = 1.0;
  Eigen::VectorXcd b = a;
  double t = 2.0e-6;
  stepper.step(a, t);
  for (int k = 0; k < 16; ++k) stepper.step(b, t / 16.0);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("zero or negative step handling") {
  Eigen::MatrixXcd h(1, 1);
  h << 1.0;
  ExpStepper stepper(sparse_from(h));
  Eigen::VectorXcd psi(1);
  psi << 0.5;
  stepper.step(psi, 0.0);
  CHECK(psi[0] == cd(0.5, 0.0));
  CHECK_THROWS(stepper.step(psi, -1.0));
}

TEST_CASE("spectral estimate brackets the true operator norm") {
  PhysicalParams p = demo_params();
  Hamiltonian h = build_hamiltonian(p, 3, 0.0);
  ExpStepper stepper(sparse_hamiltonian(h.basis, p, 0.0));
  // dominated by the dressing detuning after centering
  CHECK(stepper.spectral_estimate() > 0.25 * p.delta_s);
  CHECK(stepper.spectral_estimate() < 4.0 * p.delta_s);
}

TEST_CASE("grid propagation matches full diagonalization") {
  PhysicalParams p = demo_params();
  Hamiltonian h = build_hamiltonian(p, 2, hz_to_rad(4.0e3));
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(h.basis.size());
  psi0[h.basis.index_of({2, 0, 0, 0})] = 1.0;
  PropagateOptions opts;
  opts.samples = 10;
  double t_final = 4.0 / p.gamma_e;
  PropagationResult res = propagate(h, psi0, t_final, opts);
  REQUIRE(res.times.size() == 11);
  CHECK(res.times.front() == 0.0);
  CHECK(res.times.back() == doctest::Approx(t_final));
  for (std::size_t k = 0; k < res.times.size(); ++k) {
    Eigen::VectorXcd oracle = spectral_propagate(h.matrix, psi0, res.times[k]);
    CHECK((res.states.col(Eigen::Index(k)) - oracle).cwiseAbs().maxCoeff() <
          1e-8);
  }
  CHECK(res.matvecs > 0);
}

TEST_CASE("interaction picture integration agrees with the rotating frame") {
  PhysicalParams p = demo_params();
  // keep the fast dressing phase mild so RK4 stays cheap and accurate
  p.delta_s = hz_to_rad(2.0e7);
  p.omega_s = solve_omega_s(hz_to_rad(2.0e4), p.delta_s);
  p.delta_p = probe_detuning(p.n_target, p.omega_s, p.delta_s);
  Hamiltonian rot = build_hamiltonian(p, 1, 0.0, Frame::rotating);
  Hamiltonian inter = build_hamiltonian(p, 1, 0.0, Frame::interaction_picture);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(rot.basis.size());
  psi0[rot.basis.index_of({1, 0, 0, 0})] = 1.0;
  PropagateOptions opts;
  opts.samples = 5;
  opts.tol = 1e-9;
  double t_final = 2.0 / p.gamma_e;
  PropagationResult a = propagate(rot, psi0, t_final, opts);
  PropagationResult b = propagate(inter, psi0, t_final, opts);
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    Eigen::VectorXd pa = a.states.col(Eigen::Index(k)).cwiseAbs2();
    Eigen::VectorXd pb = b.states.col(Eigen::Index(k)).cwiseAbs2();
    CHECK((pa - pb).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("norm never grows under the no-jump evolution") {
  PhysicalParams p = demo_params();
  Hamiltonian h = build_hamiltonian(p, 3, 0.0);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(h.basis.size());
  psi0[h.basis.index_of({3, 0, 0, 0})] = 1.0;
  PropagateOptions opts;
  opts.samples = 25;
  PropagationResult res = propagate(h, psi0, 20.0 / p.gamma_e, opts);
  double prev = 1.0 + 1e-12;
  for (std::size_t k = 0; k < res.times.size(); ++k) {
    double norm = res.states.col(Eigen::Index(k)).norm();
    CHECK(norm <= prev + 1e-9);
    prev = norm;
  }
}
