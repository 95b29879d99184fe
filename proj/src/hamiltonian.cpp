#include "rydsieve/hamiltonian.hpp"

#include <stdexcept>
#include <vector>

namespace rydsieve {

using cd = std::complex<double>;

namespace {

// Emits every nonzero rotating-frame matrix entry as (row, col, value).
template <typename Emit>
void rotating_entries(const CollectiveBasis& basis, const PhysicalParams& p,
                      double delta_l, Emit&& emit) {
  double two_photon = p.delta_p + delta_l;
  struct Coupling {
    Level from, to;
    double rabi;
  };
  const Coupling couplings[] = {{Level::g, Level::e, p.omega_p},
                                {Level::q, Level::e, p.omega_c},
                                {Level::g, Level::r, p.omega_s}};
  for (int i = 0; i < basis.size(); ++i) {
    const SymmetricState& s = basis.state(i);
    emit(i, i,
         cd(-two_photon * (s.beta + s.gamma) - p.delta_s * s.eta,
            -0.5 * p.gamma_e * s.gamma - 0.5 * p.gamma_r * s.eta));
    for (const Coupling& c : couplings) {
      if (c.rabi == 0.0) continue;
      for (int dir = 0; dir < 2; ++dir) {
        Level from = dir == 0 ? c.from : c.to;
        Level to = dir == 0 ? c.to : c.from;
        int n_from = s.occupation(from);
        if (n_from == 0) continue;
        SymmetricState t = s;
        switch (from) {
          case Level::g: --t.alpha; break;
          case Level::q: --t.beta; break;
          case Level::e: --t.gamma; break;
          case Level::r: --t.eta; break;
        }
        int n_to = t.occupation(to);
        switch (to) {
          case Level::g: ++t.alpha; break;
          case Level::q: ++t.beta; break;
          case Level::e: ++t.gamma; break;
          case Level::r: ++t.eta; break;
        }
        int j = basis.index_of(t);
        if (j < 0) continue;  // blocked double Rydberg excitation
        double amp = std::sqrt(double(n_from) * double(n_to + 1));
        emit(j, i, cd(-0.5 * c.rabi * amp, 0.0));
      }
    }
  }
}

}  // namespace

Hamiltonian build_hamiltonian(const PhysicalParams& params, int n,
                              double delta_l, Frame frame) {
  Hamiltonian h;
  h.frame = frame;
  h.params = params;
  h.delta_l = delta_l;
  h.basis = enumerate_basis(n);
  if (frame == Frame::rotating) {
    h.matrix = Eigen::MatrixXcd::Zero(h.basis.size(), h.basis.size());
    rotating_entries(h.basis, params, delta_l,
                     [&](int r, int c, cd v) { h.matrix(r, c) += v; });
  }
  return h;
}

Eigen::MatrixXcd Hamiltonian::at(double t) const {
  if (frame == Frame::rotating) return matrix;

  int dim = basis.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const SymmetricState& s = basis.state(i);
    m(i, i) = cd(0.0, -0.5 * params.gamma_e * s.gamma -
                          0.5 * params.gamma_r * s.eta);
  }
  cd phase_p = std::exp(cd(0.0, -(params.delta_p + delta_l) * t));
  cd phase_s = std::exp(cd(0.0, -params.delta_s * t));
  Eigen::MatrixXcd drive =
      phase_p * (-0.5 * params.omega_p) *
          collective_operator(basis, Level::e, Level::g) +
      (-0.5 * params.omega_c) * collective_operator(basis, Level::e, Level::q) +
      phase_s * (-0.5 * params.omega_s) *
          collective_operator(basis, Level::r, Level::g);
  m += drive + drive.adjoint();
  return m;
}

Eigen::SparseMatrix<cd> sparse_hamiltonian(const CollectiveBasis& basis,
                                           const PhysicalParams& params,
                                           double delta_l) {
  std::vector<Eigen::Triplet<cd>> trip;
  trip.reserve(std::size_t(basis.size()) * 7);
  rotating_entries(basis, params, delta_l, [&](int r, int c, cd v) {
    trip.emplace_back(r, c, v);
  });
  Eigen::SparseMatrix<cd> m(basis.size(), basis.size());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}
