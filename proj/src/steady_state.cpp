#include "rydsieve/steady_state.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

#include "parallel.hpp"
#include "rydsieve/errors.hpp"
#include "rydsieve/hamiltonian.hpp"
#include "rydsieve/propagate.hpp"

namespace rydsieve {

QuasiSteadyResult quasi_steady(const PhysicalParams& params, int n,
                               double delta_l, const QuasiSteadyOptions& opts) {
  if (n < 1) throw std::invalid_argument("atom number must be >= 1");
  if (opts.plateau_tol <= 0.0 || opts.window_factor <= 0.0 ||
      opts.samples_per_window < 2 || opts.max_horizon_factor <= opts.window_factor)
    throw std::invalid_argument("malformed quasi-steady options");

  CollectiveBasis basis = enumerate_basis(n);
  ExpStepper stepper(sparse_hamiltonian(basis, params, delta_l));

  int dim = basis.size();
  Eigen::VectorXd weight_e(dim), weight_q(dim), weight_r(dim);
  for (int i = 0; i < dim; ++i) {
    const SymmetricState& s = basis.state(i);
    weight_e[i] = s.gamma;
    weight_q[i] = s.beta;
    weight_r[i] = s.eta;
  }

  Eigen::VectorXcd psi;
  if (opts.warm_start) {
    if (opts.warm_start->size() != dim)
      throw std::invalid_argument("warm start state has wrong dimension");
    psi = opts.warm_start->normalized();
  } else {
    psi = Eigen::VectorXcd::Zero(dim);
    psi[basis.index_of({n, 0, 0, 0})] = 1.0;
  }

  double window = opts.window_factor / params.gamma_e;
  double dt = window / opts.samples_per_window;
  double horizon = opts.max_horizon_factor / params.gamma_e;
  int window_len = opts.samples_per_window + 1;

  struct Sample {
    double pe, pq, pr;
  };
  std::deque<Sample> trail;
  {
    Eigen::VectorXd prob0 = psi.cwiseAbs2();
    trail.push_back(
        {weight_e.dot(prob0), weight_q.dot(prob0), weight_r.dot(prob0)});
  }

  QuasiSteadyResult best;
  bool have_best = false;
  double best_rel = 0.0;

  auto window_result = [&](double t) {
    QuasiSteadyResult res;
    double se = 0.0, sq = 0.0, sr = 0.0;
    for (const Sample& s : trail) {
      se += s.pe;
      sq += s.pq;
      sr += s.pr;
    }
    res.pe = se / trail.size();
    res.pq = sq / trail.size();
    res.pr = sr / trail.size();
    res.t_converged = t;
    return res;
  };

  double t = 0.0;
  while (t < horizon * (1.0 + 1e-12)) {
    stepper.step(psi, dt, opts.step_tol);
    t += dt;
    double norm2 = psi.squaredNorm();
    if (!(norm2 > 0.0))
      throw SolverError("state norm vanished during quasi-steady evolution", t,
                        n, delta_l);
    psi /= std::sqrt(norm2);
    Eigen::VectorXd prob = psi.cwiseAbs2();
    trail.push_back(
        {weight_e.dot(prob), weight_q.dot(prob), weight_r.dot(prob)});
    if (int(trail.size()) > window_len) trail.pop_front();
    if (int(trail.size()) < window_len) continue;

    double lo = trail.front().pe, hi = lo, sum = 0.0;
    for (const Sample& s : trail) {
      lo = std::min(lo, s.pe);
      hi = std::max(hi, s.pe);
      sum += s.pe;
    }
    double mean = sum / trail.size();
    if (hi - lo <= std::max(opts.plateau_tol * mean, opts.plateau_floor)) {
      QuasiSteadyResult res = window_result(t);
      res.matvecs = stepper.matvec_count();
      res.strict_plateau = true;
      res.spread = mean > 0.0 ? (hi - lo) / mean : 0.0;
      res.state = psi;
      if (res.pr > 1.0 + 1e-9)
        throw SolverError("blockade violated: Rydberg population above 1", t, n,
                          delta_l);
      return res;
    }
    double rel = (hi - lo) / std::max(mean, 1e-300);
    if (!have_best || rel < best_rel) {
      best = window_result(t);
      best_rel = rel;
      have_best = true;
    }
  }

  if (have_best && best_rel <= 0.5) {
    best.matvecs = stepper.matvec_count();
    best.strict_plateau = false;
    best.spread = best_rel;
    best.state = psi;
    if (best.pr > 1.0 + 1e-9)
      throw SolverError("blockade violated: Rydberg population above 1",
                        best.t_converged, n, delta_l);
    return best;
  }
  throw SolverError("no quasi-steady plateau within " +
                        std::to_string(opts.max_horizon_factor) +
                        "/gamma_e (atom number " + std::to_string(n) + ")",
                    t, n, delta_l);
}

double quasi_steady_pe(const PhysicalParams& params, int n, double delta_l,
                       const QuasiSteadyOptions& opts) {
  return quasi_steady(params, n, delta_l, opts).pe;
}

double loss_rate(const PhysicalParams& params, int n, double delta_l,
                 const QuasiSteadyOptions& opts) {
  return params.gamma_e * params.loss_branching *
         quasi_steady_pe(params, n, delta_l, opts);
}

double bloch_pe(const PhysicalParams& params, int n) {
  if (n < 1) throw std::invalid_argument("atom number must be >= 1");
  double delta = characteristic_shift(params.omega_s, params.delta_s);
  double det = 2.0 * (params.n_target - n) * delta;
  double det2 = 4.0 * det * det;
  double c2 = params.omega_c * params.omega_c;
  double denom = (c2 - det2) * (c2 - det2) +
                 det2 * params.gamma_e * params.gamma_e;
  double single = det2 * params.omega_p * params.omega_p / denom;
  return n * single;
}

double refine_probe_detuning(const PhysicalParams& params,
                             const QuasiSteadyOptions& opts, int threads) {
  if (params.n_target < 2) return params.delta_p;
  double step = 2.0 * characteristic_shift(params.omega_s, params.delta_s);

  // n-scaled flank imbalance; zero when the loss minimum is centered on
  // the target.  Decreases as delta_p grows.
  auto imbalance = [&](double delta_p) {
    PhysicalParams p = params;
    p.delta_p = delta_p;
    double flank[2] = {0.0, 0.0};
    parallel_for(2, threads, [&](long i) {
      int n = params.n_target + (i == 0 ? -1 : 1);
      flank[i] = quasi_steady(p, n, 0.0, opts).pe / double(n);
    });
    return flank[1] - flank[0];
  };

  double x0 = params.delta_p;
  double g0 = imbalance(x0);
  if (g0 == 0.0) return x0;
  double x1 = x0 + (g0 > 0.0 ? 0.5 : -0.5) * step;
  double g1 = imbalance(x1);
  for (int it = 0; it < 8 && g1 != 0.0 && g1 != g0; ++it) {
    double x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
    // cap each move at one level spacing so a shallow secant slope cannot
    // fling the root past a neighboring resonance
    if (std::abs(x2 - x1) > step) x2 = x1 + (x2 > x1 ? step : -step);
    x0 = x1;
    g0 = g1;
    x1 = x2;
    if (std::abs(x1 - x0) < 1e-3 * step) break;
    g1 = imbalance(x1);
  }
  return x1;
}

}
