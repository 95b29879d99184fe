#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <vector>

#include "rydsieve/hamiltonian.hpp"

namespace rydsieve {

// Applies exp(-i H dt) to state vectors by a scaled Taylor series.  The
// spectrum is centered by a real diagonal shift (restored as a global
// phase) and dt is split into substeps so the series argument stays small
// enough for double precision.
class ExpStepper {
 public:
  explicit ExpStepper(const Eigen::SparseMatrix<std::complex<double>>& h,
                      double theta = 6.0, int max_terms = 64);

  // Advances psi in place over dt.  term_tol is the relative size at which
  // the Taylor tail is dropped.
  void step(Eigen::VectorXcd& psi, double dt, double term_tol = 1e-13) const;

  double spectral_estimate() const { return sigma_; }
  long matvec_count() const { return matvecs_; }

 private:
  Eigen::SparseMatrix<std::complex<double>> a_;  // -i (H - shift)
  double shift_ = 0.0;
  double sigma_ = 0.0;  // 2-norm estimate of a_
  double theta_;
  int max_terms_;
  mutable long matvecs_ = 0;
};

struct PropagateOptions {
  double tol = 1e-10;  // target relative accuracy of the amplitudes
  int samples = 200;   // output grid points after t = 0
  double theta = 6.0;
  int max_terms = 64;
};

struct PropagationResult {
  std::vector<double> times;
  Eigen::MatrixXcd states;  // one column per time, unnormalized
  long matvecs = 0;
};

// Evolves psi0 under the no-jump Hamiltonian to t_final, recording the
// state on a uniform grid (t = 0 included).  The rotating frame uses the
// Taylor stepper; the interaction picture integrates the time-dependent
// matrix with classical RK4.
PropagationResult propagate(const Hamiltonian& h, const Eigen::VectorXcd& psi0,
                            double t_final, const PropagateOptions& opts = {});
PropagationResult propagate(const Hamiltonian& h, const Eigen::VectorXcd& psi0,
                            double t_final, double tol);

}
