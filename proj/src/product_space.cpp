#include "rydsieve/product_space.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>

#include "rydsieve/errors.hpp"

namespace rydsieve {

using cd = std::complex<double>;

static Level atom_level(std::uint32_t code, int j) {
  return Level((code >> (2 * j)) & 3u);
}

static std::uint32_t with_atom_level(std::uint32_t code, int j, Level lv) {
  std::uint32_t mask = 3u << (2 * j);
  return (code & ~mask) | (std::uint32_t(lv) << (2 * j));
}

SymmetricState ProductSpaceModel::occupation(std::uint32_t code) const {
  SymmetricState s{0, 0, 0, 0};
  for (int j = 0; j < atom_count; ++j) {
    switch (atom_level(code, j)) {
      case Level::g: ++s.alpha; break;
      case Level::q: ++s.beta; break;
      case Level::e: ++s.gamma; break;
      case Level::r: ++s.eta; break;
    }
  }
  return s;
}

static double multinomial(const SymmetricState& s) {
  auto fact = [](int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  return fact(s.total()) /
         (fact(s.alpha) * fact(s.beta) * fact(s.gamma) * fact(s.eta));
}

ProductSpaceModel brute_force_oracle(int n, const PhysicalParams& params,
                                     double delta_l) {
  if (n < 1) throw std::invalid_argument("atom count must be >= 1");
  if (n > 4)
    throw ResourceError("brute-force product space is capped at 4 atoms, got " +
                        std::to_string(n));

  ProductSpaceModel m;
  m.atom_count = n;

  std::uint32_t total = 1u << (2 * n);
  std::map<std::uint32_t, int> index;
  for (std::uint32_t code = 0; code < total; ++code) {
    int rydberg = 0;
    for (int j = 0; j < n; ++j)
      if (atom_level(code, j) == Level::r) ++rydberg;
    if (rydberg > 1) continue;  // blockade projection
    index[code] = int(m.codes.size());
    m.codes.push_back(code);
  }

  int dim = int(m.codes.size());
  m.hamiltonian = Eigen::MatrixXcd::Zero(dim, dim);
  m.excited_count = Eigen::VectorXd::Zero(dim);
  m.rydberg_count = Eigen::VectorXd::Zero(dim);

  double two_photon = params.delta_p + delta_l;
  for (int i = 0; i < dim; ++i) {
    std::uint32_t code = m.codes[std::size_t(i)];
    SymmetricState occ = m.occupation(code);
    m.excited_count[i] = occ.gamma;
    m.rydberg_count[i] = occ.eta;
    m.hamiltonian(i, i) =
        cd(-two_photon * (occ.beta + occ.gamma) - params.delta_s * occ.eta,
           -0.5 * params.gamma_e * occ.gamma - 0.5 * params.gamma_r * occ.eta);

    // raising half of each drive term; h.c. added at the end
    for (int j = 0; j < n; ++j) {
      Level lv = atom_level(code, j);
      auto couple = [&](Level from, Level to, double rabi) {
        if (lv != from) return;
        std::uint32_t up = with_atom_level(code, j, to);
        auto it = index.find(up);
        if (it == index.end()) return;  // projected out
        m.hamiltonian(it->second, i) += cd(-0.5 * rabi, 0.0);
      };
      couple(Level::g, Level::e, params.omega_p);
      couple(Level::q, Level::e, params.omega_c);
      couple(Level::g, Level::r, params.omega_s);
    }
  }
  // Add the conjugate of the drive part only; the diagonal is complete.
  Eigen::MatrixXcd drive = m.hamiltonian;
  drive.diagonal().setZero();
  m.hamiltonian += drive.adjoint();

  CollectiveBasis basis = enumerate_basis(n);
  m.isometry = Eigen::MatrixXcd::Zero(dim, basis.size());
  for (int i = 0; i < dim; ++i) {
    SymmetricState occ = m.occupation(m.codes[std::size_t(i)]);
    int col = basis.index_of(occ);
    if (col < 0) throw std::logic_error("kept product state outside basis");
    m.isometry(i, col) = 1.0 / std::sqrt(multinomial(occ));
  }
  return m;
}

Eigen::VectorXcd spectral_propagate(const Eigen::MatrixXcd& hamiltonian,
                                    const Eigen::VectorXcd& psi0, double t) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(hamiltonian);
  if (es.info() != Eigen::Success)
    throw SolverError("eigendecomposition failed in spectral_propagate");
  Eigen::VectorXcd coeff = es.eigenvectors().partialPivLu().solve(psi0);
  Eigen::VectorXcd phases(coeff.size());
  for (Eigen::Index k = 0; k < coeff.size(); ++k)
    phases[k] = std::exp(cd(0.0, -1.0) * es.eigenvalues()[k] * t);
  return es.eigenvectors() * phases.cwiseProduct(coeff).matrix();
}

}
