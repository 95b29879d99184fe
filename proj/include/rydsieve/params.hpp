#pragma once

#include <string>
#include <vector>

namespace rydsieve {

// Single-atom level scheme: |g> ground, |q> stable storage state,
// |e> short-lived intermediate, |r> Rydberg state.  The probe couples
// g-e, the control couples q-e, the dressing laser couples g-r.
// All members are angular frequencies (rad/s) except the two counts.
struct PhysicalParams {
  double omega_p = 0.0;   // probe Rabi frequency, >= 0
  double omega_c = 0.0;   // control Rabi frequency, > 0
  double omega_s = 0.0;   // dressing Rabi frequency, >= 0
  double delta_s = 0.0;   // dressing detuning, far off resonance
  double delta_p = 0.0;   // probe detuning (normally derived, may be overridden)
  double gamma_e = 0.0;   // population decay rate of |e|, > 0
  double gamma_r = 0.0;   // population decay rate of |r>, >= 0
  int n_target = 1;       // atom number the scheme is tuned to protect
  double loss_branching = 1.0;  // fraction of |e> decay that leaves the trap
};

struct NoiseModel {
  double sigma_delta_l = 0.0;  // std dev of the static two-photon detuning shift
  double nbar_initial = 1.0;   // Poisson mean of the initial atom number
};

struct DecayRates {
  double gamma_e = 0.0;
  double gamma_r = 0.0;
};

// Named decay-rate presets; "rubidium" is the only one shipped.
DecayRates decay_preset(const std::string& name);

// Throws std::invalid_argument on hard violations; returns soft warnings
// (weak control-to-probe ratio, weakly detuned dressing, probe off).
std::vector<std::string> check_params(const PhysicalParams& p);
void check_noise(const NoiseModel& m);

// Light shift of the dressed ground manifold with n atoms sharing one
// dressing-laser photon exchange, exact two-level diagonalization.
double stark_shift_exact(int n, double omega_s, double delta_s);

// Second-order expansion of the same shift: linear term n*Omega_s^2/(4 Delta_s)
// minus the quadratic correction n^2*Omega_s^4/(16 Delta_s^3).
double stark_shift_perturbative(int n, double omega_s, double delta_s);

// Coefficient of the quadratic (number-dependent) part of the shift,
// delta = Omega_s^4 / (16 Delta_s^3).  This is the energy scale that
// separates atom numbers.
double characteristic_shift(double omega_s, double delta_s);

// Inverse of characteristic_shift: the dressing Rabi frequency needed to
// realize a requested delta at the given dressing detuning.
double solve_omega_s(double delta, double delta_s);

enum class ShiftOrder { exact, perturbative };

// Probe detuning that makes the n_target -> n_target-1 loss transition
// resonant: the difference of collective Stark shifts of the two numbers.
double probe_detuning(int n_target, double omega_s, double delta_s,
                      ShiftOrder order = ShiftOrder::exact);

// Residual two-photon detuning of the n -> n-1 loss transition given the
// probe detuning stored in p.  Zero at n = n_target when delta_p was derived
// with the same order; close to 2*(n_target - n)*delta elsewhere.
double transition_mismatch(int n, const PhysicalParams& p,
                           ShiftOrder order = ShiftOrder::exact);

// Fraction of Rydberg character mixed into the dressed ground state for
// n atoms, approximately n * Omega_s^2 / (4 Delta_s^2).
double rydberg_fraction(int n, double omega_s, double delta_s);

// Distance below which the van der Waals interaction C6/R^6 exceeds
// 2*hbar*|Delta_s|, i.e. the blockade radius of the dressing transition.
// c6 in J m^6, result in m.
double dressing_critical_distance(double c6, double delta_s);

}
