#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rydsieve/basis.hpp"
#include "rydsieve/params.hpp"

namespace rydsieve {

// Reference model on the full 4^n product space (blockade enforced by
// projecting out states with two or more Rydberg excitations).  Exists to
// cross-check the symmetric-subspace construction; capped at 4 atoms.
struct ProductSpaceModel {
  int atom_count = 0;
  std::vector<std::uint32_t> codes;  // kept product states, 2 bits per atom
  Eigen::MatrixXcd hamiltonian;      // projected, rotating frame, rad/s
  Eigen::MatrixXcd isometry;         // product dim x symmetric dim
  Eigen::VectorXd excited_count;     // per kept state, number of atoms in |e>
  Eigen::VectorXd rydberg_count;

  SymmetricState occupation(std::uint32_t code) const;
};

ProductSpaceModel brute_force_oracle(int n, const PhysicalParams& params,
                                     double delta_l = 0.0);

// Propagation by full diagonalization, psi(t) = V exp(-i diag(lambda) t) V^-1 psi0.
// Independent of the stepping propagator; dense, for small validation cases.
Eigen::VectorXcd spectral_propagate(const Eigen::MatrixXcd& hamiltonian,
                                    const Eigen::VectorXcd& psi0, double t);

}
