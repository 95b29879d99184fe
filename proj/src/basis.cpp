#include "rydsieve/basis.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "rydsieve/errors.hpp"

namespace rydsieve {

Level level_from_char(char c) {
  switch (c) {
    case 'g': return Level::g;
    case 'q': return Level::q;
    case 'e': return Level::e;
    case 'r': return Level::r;
  }
  throw std::domain_error(std::string("unknown level label '") + c + "'");
}

char level_char(Level lv) {
  switch (lv) {
    case Level::g: return 'g';
    case Level::q: return 'q';
    case Level::e: return 'e';
    case Level::r: return 'r';
  }
  throw std::domain_error("unknown level");
}

int SymmetricState::occupation(Level lv) const {
  switch (lv) {
    case Level::g: return alpha;
    case Level::q: return beta;
    case Level::e: return gamma;
    case Level::r: return eta;
  }
  throw std::domain_error("unknown level");
}

static int set_occupation(SymmetricState& s, Level lv, int value) {
  switch (lv) {
    case Level::g: return s.alpha = value;
    case Level::q: return s.beta = value;
    case Level::e: return s.gamma = value;
    case Level::r: return s.eta = value;
  }
  throw std::domain_error("unknown level");
}

CollectiveBasis enumerate_basis(int n, int cap) {
  if (n < 0) throw std::invalid_argument("atom count must be >= 0");
  if (n > cap)
    throw ResourceError("atom count " + std::to_string(n) +
                        " exceeds basis cap " + std::to_string(cap));
  CollectiveBasis b;
  b.n_ = n;
  b.states_.reserve(std::size_t(n + 1) * std::size_t(n + 1));
  for (int eta = 0; eta <= std::min(1, n); ++eta) {
    int m = n - eta;
    for (int gamma = 0; gamma <= m; ++gamma)
      for (int beta = 0; beta <= m - gamma; ++beta)
        b.states_.push_back({m - gamma - beta, beta, gamma, eta});
  }
  return b;
}

int CollectiveBasis::index_of(const SymmetricState& s) const {
  if (s.eta < 0 || s.eta > 1) return -1;
  if (s.alpha < 0 || s.beta < 0 || s.gamma < 0) return -1;
  if (s.total() != n_) return -1;
  int m = n_ - s.eta;
  int block = s.eta == 0 ? 0 : (n_ + 1) * (n_ + 2) / 2;
  int offset = s.gamma * (m + 1) - s.gamma * (s.gamma - 1) / 2;
  return block + offset + s.beta;
}

Eigen::MatrixXcd collective_operator(const CollectiveBasis& basis, Level to,
                                     Level from) {
  int dim = basis.size();
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
  if (to == from) {
    for (int i = 0; i < dim; ++i)
      op(i, i) = double(basis.state(i).occupation(to));
    return op;
  }
  for (int i = 0; i < dim; ++i) {
    const SymmetricState& s = basis.state(i);
    int n_from = s.occupation(from);
    if (n_from == 0) continue;
    SymmetricState t = s;
    set_occupation(t, from, n_from - 1);
    int n_to = t.occupation(to);
    set_occupation(t, to, n_to + 1);
    int j = basis.index_of(t);
    if (j < 0) continue;  // blocked (second Rydberg excitation)
    op(j, i) = std::sqrt(double(n_from) * double(n_to + 1));
  }
  return op;
}

void write_basis_csv(const CollectiveBasis& basis, std::ostream& out) {
  out << "index,alpha,beta,gamma,eta\n";
  for (int i = 0; i < basis.size(); ++i) {
    const SymmetricState& s = basis.state(i);
    out << i << ',' << s.alpha << ',' << s.beta << ',' << s.gamma << ','
        << s.eta << '\n';
  }
}

}
