#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>

#include "rydsieve/basis.hpp"
#include "rydsieve/params.hpp"

namespace rydsieve {

enum class Frame {
  rotating,            // static non-Hermitian matrix, the workhorse
  interaction_picture  // explicitly time-dependent drives, validation path
};

// Effective (no-jump) Hamiltonian of the n-atom symmetric subspace for a
// fixed laser-noise shift delta_l of the two-photon detuning.  In the
// rotating frame the matrix is time independent:
//   diag  -(delta_p + delta_l)(beta + gamma) - delta_s*eta
//         - i gamma_e/2 * gamma - i gamma_r/2 * eta
//   drive -omega_p/2 (e<-g + h.c.) - omega_c/2 (e<-q + h.c.)
//         -omega_s/2 (r<-g + h.c.)
// In the interaction picture the detunings move into drive phases.
struct Hamiltonian {
  Frame frame = Frame::rotating;
  PhysicalParams params;
  double delta_l = 0.0;
  CollectiveBasis basis;
  Eigen::MatrixXcd matrix;  // rotating frame only; empty in interaction picture

  // Matrix at time t.  Constant in the rotating frame.
  Eigen::MatrixXcd at(double t) const;
};

Hamiltonian build_hamiltonian(const PhysicalParams& params, int n,
                              double delta_l, Frame frame = Frame::rotating);

// Same rotating-frame matrix in compressed sparse form (about 7 entries per
// row), used internally for large atom numbers.
Eigen::SparseMatrix<std::complex<double>> sparse_hamiltonian(
    const CollectiveBasis& basis, const PhysicalParams& params, double delta_l);

}
