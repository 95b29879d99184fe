#include "rydsieve/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "rydsieve/errors.hpp"

namespace rydsieve {

using cd = std::complex<double>;

ExpStepper::ExpStepper(const Eigen::SparseMatrix<cd>& h, double theta,
                       int max_terms)
    : theta_(theta), max_terms_(max_terms) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix must be square");
  Eigen::Index dim = h.rows();

  double lo = 0.0, hi = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    double d = h.coeff(i, i).real();
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  shift_ = 0.5 * (lo + hi);

  Eigen::SparseMatrix<cd> centered = h;
  for (Eigen::Index i = 0; i < dim; ++i) centered.coeffRef(i, i) -= shift_;
  a_ = cd(0.0, -1.0) * centered;
  a_.makeCompressed();

  // Power iteration on A^H A for the 2-norm, capped by sqrt(norm1*normInf).
  double norm1 = 0.0;
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index c = 0; c < a_.outerSize(); ++c) {
    double col = 0.0;
    for (Eigen::SparseMatrix<cd>::InnerIterator it(a_, c); it; ++it) {
      double v = std::abs(it.value());
      col += v;
      row_sums[it.row()] += v;
    }
    norm1 = std::max(norm1, col);
  }
  double cap = std::sqrt(norm1 * row_sums.maxCoeff());

  std::mt19937 rng(12345);
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = cd(gauss(rng), gauss(rng));
  v.normalize();
  double est = 0.0;
  for (int it = 0; it < 30; ++it) {
    Eigen::VectorXcd w = a_ * v;
    Eigen::VectorXcd u = a_.adjoint() * w;
    double un = u.norm();
    double next = std::sqrt(un);
    if (un == 0.0) { est = w.norm(); break; }
    v = u / un;
    if (it > 3 && std::abs(next - est) < 1e-2 * next) { est = next; break; }
    est = next;
  }
  sigma_ = std::min(1.2 * est, cap);
  if (sigma_ == 0.0) sigma_ = 1.0;  // zero matrix; one substep, series exact
}

void ExpStepper::step(Eigen::VectorXcd& psi, double dt, double term_tol) const {
  if (dt < 0.0) throw std::invalid_argument("dt must be >= 0");
  if (dt == 0.0) return;
  long sub = std::max<long>(1, long(std::ceil(sigma_ * dt / theta_)));
  double h = dt / double(sub);
  Eigen::VectorXcd term(psi.size()), next(psi.size());
  for (long s = 0; s < sub; ++s) {
    Eigen::VectorXcd acc = psi;
    term = psi;
    bool converged = false;
    for (int k = 1; k <= max_terms_; ++k) {
      next.noalias() = a_ * term;
      term = next * (h / double(k));
      ++matvecs_;
      acc += term;
      if (term.norm() <= term_tol * acc.norm()) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw SolverError("Taylor series failed to converge in " +
                        std::to_string(max_terms_) + " terms");
    psi.swap(acc);
  }
  psi *= std::exp(cd(0.0, -shift_ * dt));
}

static PropagationResult propagate_rotating(const Hamiltonian& h,
                                            const Eigen::VectorXcd& psi0,
                                            double t_final,
                                            const PropagateOptions& opts) {
  ExpStepper stepper(sparse_hamiltonian(h.basis, h.params, h.delta_l),
                     opts.theta, opts.max_terms);
  double term_tol = std::min(1e-13, opts.tol * 1e-3);
  int samples = std::max(1, opts.samples);

  PropagationResult res;
  res.times.resize(std::size_t(samples) + 1);
  res.states.resize(psi0.size(), samples + 1);
  Eigen::VectorXcd psi = psi0;
  res.times[0] = 0.0;
  res.states.col(0) = psi;
  double dt = t_final / samples;
  for (int k = 1; k <= samples; ++k) {
    stepper.step(psi, dt, term_tol);
    res.times[std::size_t(k)] = dt * k;
    res.states.col(k) = psi;
  }
  res.matvecs = stepper.matvec_count();
  return res;
}

static PropagationResult propagate_interaction(const Hamiltonian& h,
                                               const Eigen::VectorXcd& psi0,
                                               double t_final,
                                               const PropagateOptions& opts) {
  const PhysicalParams& p = h.params;
  double enhance = std::sqrt(2.0 * h.basis.atom_count() + 2.0);
  double omega_max = std::abs(p.delta_p + h.delta_l) + std::abs(p.delta_s) +
                     enhance * (p.omega_p + p.omega_c + p.omega_s) +
                     0.5 * (p.gamma_e + p.gamma_r);
  double radians = omega_max * t_final;
  // global RK4 error ~ radians * (omega dt)^4 / 120
  double step_phase =
      std::clamp(std::pow(120.0 * opts.tol / std::max(radians, 1.0), 0.25),
                 1e-3, 0.1);

  int samples = std::max(1, opts.samples);
  double sample_dt = t_final / samples;
  long per_sample =
      std::max<long>(1, long(std::ceil(omega_max * sample_dt / step_phase)));
  double dt = sample_dt / double(per_sample);

  auto deriv = [&](double t, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    return cd(0.0, -1.0) * (h.at(t) * y);
  };

  PropagationResult res;
  res.times.resize(std::size_t(samples) + 1);
  res.states.resize(psi0.size(), samples + 1);
  Eigen::VectorXcd psi = psi0;
  res.times[0] = 0.0;
  res.states.col(0) = psi;
  double t = 0.0;
  for (int k = 1; k <= samples; ++k) {
    for (long s = 0; s < per_sample; ++s) {
      Eigen::VectorXcd k1 = deriv(t, psi);
      Eigen::VectorXcd k2 = deriv(t + 0.5 * dt, psi + 0.5 * dt * k1);
      Eigen::VectorXcd k3 = deriv(t + 0.5 * dt, psi + 0.5 * dt * k2);
      Eigen::VectorXcd k4 = deriv(t + dt, psi + dt * k3);
      psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += dt;
    }
    res.times[std::size_t(k)] = sample_dt * k;
    res.states.col(k) = psi;
  }
  return res;
}

PropagationResult propagate(const Hamiltonian& h, const Eigen::VectorXcd& psi0,
                            double t_final, const PropagateOptions& opts) {
  if (psi0.size() != h.basis.size())
    throw std::invalid_argument("state size does not match basis size");
  if (!(t_final > 0.0)) throw std::invalid_argument("t_final must be > 0");
  double n0 = psi0.squaredNorm();
  if (!(n0 > 0.0) || n0 > 1.0 + 1e-9)
    throw std::invalid_argument("initial state norm must be in (0, 1]");
  return h.frame == Frame::rotating
             ? propagate_rotating(h, psi0, t_final, opts)
             : propagate_interaction(h, psi0, t_final, opts);
}

PropagationResult propagate(const Hamiltonian& h, const Eigen::VectorXcd& psi0,
                            double t_final, double tol) {
  PropagateOptions opts;
  opts.tol = tol;
  return propagate(h, psi0, t_final, opts);
}

}
