#include "rydsieve/validate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rydsieve/hamiltonian.hpp"
#include "rydsieve/product_space.hpp"
#include "rydsieve/propagate.hpp"
#include "rydsieve/steady_state.hpp"

namespace rydsieve {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::vector<double> rank_values(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    double mean_rank = 0.5 * (double(i) + double(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mean_rank;
    i = j + 1;
  }
  return rank;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("spearman needs two equal-length series");
  std::vector<double> ra = rank_values(a), rb = rank_values(b);
  double n = double(a.size());
  double ma = (n + 1.0) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - ma);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - ma) * (rb[i] - ma);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

namespace {

CheckResult check_shift_expansion(const ConfigFile& cfg) {
  const PhysicalParams& p = cfg.run.params;
  double exact = stark_shift_exact(p.n_target, p.omega_s, p.delta_s);
  double pert = stark_shift_perturbative(p.n_target, p.omega_s, p.delta_s);
  double rel = std::abs(pert - exact) / std::abs(exact);
  CheckResult r{"shift-expansion", rel <= 0.02,
                "relative difference " + fmt(rel) + " at n_target"};
  return r;
}

CheckResult check_probe_detuning_closure(const ConfigFile& cfg) {
  const PhysicalParams& p = cfg.run.params;
  double exact = probe_detuning(p.n_target, p.omega_s, p.delta_s,
                                ShiftOrder::exact);
  double pert = probe_detuning(p.n_target, p.omega_s, p.delta_s,
                               ShiftOrder::perturbative);
  // the detuning difference amplifies the shift's own relative error, so
  // the bound here is looser than the one in check_shift_expansion
  double rel = std::abs(pert - exact) / std::abs(exact);
  return {"probe-detuning-closure", rel <= 0.05,
          "exact " + fmt(exact) + " rad/s, second order " + fmt(pert) +
              " rad/s, relative difference " + fmt(rel)};
}

CheckResult check_dressing_regime(const ConfigFile& cfg) {
  const PhysicalParams& p = cfg.run.params;
  double frac = rydberg_fraction(p.n_target, p.omega_s, p.delta_s);
  return {"dressing-regime", frac > 0.0 && frac <= 0.15,
          "Rydberg admixture " + fmt(frac) + " at n_target"};
}

CheckResult check_basis_vs_product(const ConfigFile& cfg, double perturbation) {
  const PhysicalParams& p = cfg.run.params;
  double delta_l = cfg.run.noise.sigma_delta_l;
  double worst = 0.0;
  for (int n = 2; n <= 3; ++n) {
    ProductSpaceModel oracle = brute_force_oracle(n, p, delta_l);
    Hamiltonian h = build_hamiltonian(p, n, delta_l);
    Eigen::MatrixXcd reduced =
        oracle.isometry.adjoint() * oracle.hamiltonian * oracle.isometry;
    Eigen::MatrixXcd sym = h.matrix;
    if (perturbation != 0.0) {
      Eigen::Index bi = 0, bj = 0;
      double best = -1.0;
      for (Eigen::Index i = 0; i < sym.rows(); ++i)
        for (Eigen::Index j = 0; j < sym.cols(); ++j)
          if (i != j && std::abs(sym(i, j)) > best) {
            best = std::abs(sym(i, j));
            bi = i;
            bj = j;
          }
      sym(bi, bj) *= 1.0 + perturbation;
    }
    double scale = reduced.cwiseAbs().maxCoeff();
    worst = std::max(worst,
                     (sym - reduced).cwiseAbs().maxCoeff() / scale);

    Eigen::MatrixXcd occ_prod = oracle.isometry.adjoint() *
                                oracle.excited_count.asDiagonal() *
                                oracle.isometry;
    Eigen::MatrixXcd occ_sym =
        collective_operator(h.basis, Level::e, Level::e);
    double occ_scale = std::max(occ_prod.cwiseAbs().maxCoeff(), 1.0);
    worst = std::max(
        worst, (occ_sym - occ_prod).cwiseAbs().maxCoeff() / occ_scale);
  }
  return {"basis-vs-product", worst <= 1e-10,
          "largest relative deviation " + fmt(worst) + " over 2 and 3 atoms"};
}

CheckResult check_frame_equivalence(const ConfigFile& cfg) {
  const PhysicalParams& p = cfg.run.params;
  int n = 2;
  double t_final = 5.0 / p.gamma_e;
  Eigen::VectorXcd psi0 =
      Eigen::VectorXcd::Zero((n + 1) * (n + 1));
  Hamiltonian rot = build_hamiltonian(p, n, 0.0, Frame::rotating);
  psi0[rot.basis.index_of({n, 0, 0, 0})] = 1.0;
  PropagateOptions opts;
  opts.tol = 1e-8;
  opts.samples = 8;
  PropagationResult a = propagate(rot, psi0, t_final, opts);
  Hamiltonian inter = build_hamiltonian(p, n, 0.0, Frame::interaction_picture);
  PropagationResult b = propagate(inter, psi0, t_final, opts);
  double worst = 0.0;
  for (int k = 0; k < int(a.times.size()); ++k) {
    Eigen::VectorXd pa = a.states.col(k).cwiseAbs2();
    Eigen::VectorXd pb = b.states.col(k).cwiseAbs2();
    worst = std::max(worst, (pa - pb).cwiseAbs().maxCoeff());
  }
  return {"frame-equivalence", worst <= 1e-6,
          "largest population difference " + fmt(worst) + " up to 5/gamma_e"};
}

CheckResult check_rate_trend(const ConfigFile& cfg, int trend_n_max) {
  const PhysicalParams& p = cfg.run.params;
  int n_max = std::max(trend_n_max, p.n_target + 4);
  std::vector<double> sim, rate_eq;
  int argmin_sim = 1, argmin_eq = 1;
  std::vector<double> sim_excl, eq_excl;
  for (int n = 1; n <= n_max; ++n) {
    double g = loss_rate(p, n, 0.0, cfg.run.solver);
    double b = p.gamma_e * p.loss_branching * bloch_pe(p, n);
    sim.push_back(g);
    rate_eq.push_back(b);
    if (g < sim[std::size_t(argmin_sim - 1)]) argmin_sim = n;
    if (b < rate_eq[std::size_t(argmin_eq - 1)]) argmin_eq = n;
    if (n != p.n_target) {
      sim_excl.push_back(g);
      eq_excl.push_back(b);
    }
  }
  double rho = spearman(sim_excl, eq_excl);
  bool pass = rho > 0.9 && argmin_sim == p.n_target && argmin_eq == p.n_target;
  return {"rate-trend",
          pass,
          "Spearman " + fmt(rho) + " over n = 1.." + std::to_string(n_max) +
              ", minima at " + std::to_string(argmin_sim) + " (simulated) and " +
              std::to_string(argmin_eq) + " (rate equation)"};
}

}  // namespace

std::vector<CheckResult> run_validation(const ConfigFile& cfg,
                                        const ValidationOptions& opts) {
  std::vector<CheckResult> out;
  out.push_back(check_shift_expansion(cfg));
  out.push_back(check_probe_detuning_closure(cfg));
  out.push_back(check_dressing_regime(cfg));
  out.push_back(check_basis_vs_product(cfg, opts.perturbation));
  out.push_back(check_frame_equivalence(cfg));
  out.push_back(check_rate_trend(cfg, opts.trend_n_max));
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results)
    if (!r.pass) return false;
  return true;
}

}
