#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

namespace rydsieve {

enum class Level : int { g = 0, q = 1, e = 2, r = 3 };

Level level_from_char(char c);
char level_char(Level lv);

// Occupation-number label of a permutation-symmetric n-atom state:
// alpha atoms in |g>, beta in |q>, gamma in |e>, eta in |r>.
// Blockade keeps eta at 0 or 1.
struct SymmetricState {
  int alpha = 0;
  int beta = 0;
  int gamma = 0;
  int eta = 0;

  int occupation(Level lv) const;
  int total() const { return alpha + beta + gamma + eta; }
  bool operator==(const SymmetricState&) const = default;
};

// All symmetric states of a fixed atom number with at most one Rydberg
// excitation, ordered by (eta, gamma, beta) ascending.  Size (n+1)^2.
class CollectiveBasis {
 public:
  static constexpr int max_atom_count = 80;

  int atom_count() const { return n_; }
  int size() const { return int(states_.size()); }
  const SymmetricState& state(int index) const { return states_.at(index); }
  const std::vector<SymmetricState>& states() const { return states_; }

  // Index of a state, or -1 when the label is outside the basis
  // (wrong total, negative occupation, eta > 1).
  int index_of(const SymmetricState& s) const;

 private:
  friend CollectiveBasis enumerate_basis(int n, int cap);
  int n_ = 0;
  std::vector<SymmetricState> states_;
};

CollectiveBasis enumerate_basis(int n, int cap = CollectiveBasis::max_atom_count);

// Matrix of the collective transfer operator taking one atom from level
// `from` to level `to` (the symmetrized sum of single-atom |to><from|).
// Equal levels give the diagonal occupation-number operator.  Matrix
// elements are sqrt(n_from * (n_to + 1)) between valid labels; transfers
// that would create a second Rydberg excitation are annihilated.
Eigen::MatrixXcd collective_operator(const CollectiveBasis& basis, Level to,
                                     Level from);

// Debug dump: one row per basis state, "index,alpha,beta,gamma,eta".
void write_basis_csv(const CollectiveBasis& basis, std::ostream& out);

}
