#pragma once

#include <Eigen/Dense>

#include "rydsieve/params.hpp"

namespace rydsieve {

struct QuasiSteadyOptions {
  double plateau_tol = 1e-4;         // relative spread over one window
  double plateau_floor = 1e-12;      // absolute spread floor, catches pe -> 0
  double window_factor = 5.0;        // window length in units of 1/gamma_e
  double max_horizon_factor = 2000;  // give up after this many 1/gamma_e
  int samples_per_window = 8;
  double step_tol = 1e-12;
  // Start from this state instead of all atoms in g.  Must have the basis
  // dimension for the requested atom number.  The table builder chains
  // neighboring detuning cells through it to skip their common transient.
  const Eigen::VectorXcd* warm_start = nullptr;
};

struct QuasiSteadyResult {
  double pe = 0.0;  // window mean of <n_e> at the plateau
  double pq = 0.0;  // same for <n_q>
  double pr = 0.0;  // same for <n_r>; bounded by 1 under blockade
  double t_converged = 0.0;
  long matvecs = 0;
  // True when the spread criterion was met.  False means the flattest
  // window before the slow-eigenstate drift took over was used instead;
  // spread still holds the best relative spread seen.
  bool strict_plateau = false;
  double spread = 0.0;
  Eigen::VectorXcd state;  // normalized state when the scan stopped
};

// Evolves |all atoms in g> under the no-jump Hamiltonian with continuous
// renormalization until the excited-state population settles: the relative
// spread of <n_e> over a trailing window of window_factor/gamma_e drops
// below plateau_tol.  Returns the window mean of the collective level
// populations (absolute atom counts, not fractions).
//
// The no-jump dynamics has two long-lived modes: the transparency-shifted
// dark mode the all-ground start state mostly projects onto, and a weakly
// populated blockaded-Rydberg mode.  For one atom the Rydberg mode decays
// at bare gamma_r and the two modes beat, so the spread criterion never
// fires and <n_e> would eventually drift off the dark-mode plateau; the
// flattest trailing window seen over the whole scan is then returned
// (strict_plateau = false) instead of failing.  For every other atom
// number the contaminating mode dies off well inside the horizon and the
// spread criterion exits on the dominant-mode plateau.  SolverError only
// if even the flattest window spreads by more than half its mean.
QuasiSteadyResult quasi_steady(const PhysicalParams& params, int n,
                               double delta_l,
                               const QuasiSteadyOptions& opts = {});

double quasi_steady_pe(const PhysicalParams& params, int n, double delta_l,
                       const QuasiSteadyOptions& opts = {});

// Collective loss rate: gamma_e * loss_branching * (quasi-steady <n_e>).
double loss_rate(const PhysicalParams& params, int n, double delta_l,
                 const QuasiSteadyOptions& opts = {});

// Weak-probe rate-equation estimate of the same quantity: n independent
// three-level atoms at two-photon detuning 2*(n_target - n)*delta.
// Used as a trend oracle, not as ground truth.
double bloch_pe(const PhysicalParams& params, int n);

// Re-centers delta_p on the full-model dark resonance.  The two-level
// derivation in probe_detuning misses couplings that displace the
// protected atom number by order 10 kHz; when the level spacing 2*delta
// is comparable, the loss minimum lands one atom off the target.  Secant
// on the n-scaled flank rates at n_target +- 1 until they balance, which
// pins the minimum on n_target.  Returns the adjusted delta_p; atom
// targets below 2 have no lower flank and come back unchanged.
double refine_probe_detuning(const PhysicalParams& params,
                             const QuasiSteadyOptions& opts = {},
                             int threads = 1);

}
