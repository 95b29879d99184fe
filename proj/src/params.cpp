#include "rydsieve/params.hpp"

#include <cmath>
#include <stdexcept>

#include "rydsieve/units.hpp"

namespace rydsieve {

DecayRates decay_preset(const std::string& name) {
  if (name == "rubidium") {
    // 5P3/2 intermediate state linewidth and a typical dressed-Rydberg
    // effective decay rate.
    return {hz_to_rad(6.0e6), hz_to_rad(100.0)};
  }
  throw std::invalid_argument("unknown decay preset \"" + name + "\"");
}

static void require_finite(double v, const char* name) {
  if (!std::isfinite(v))
    throw std::invalid_argument(std::string(name) + " must be finite");
}

std::vector<std::string> check_params(const PhysicalParams& p) {
  require_finite(p.omega_p, "omega_p");
  require_finite(p.omega_c, "omega_c");
  require_finite(p.omega_s, "omega_s");
  require_finite(p.delta_s, "delta_s");
  require_finite(p.delta_p, "delta_p");
  require_finite(p.gamma_e, "gamma_e");
  require_finite(p.gamma_r, "gamma_r");
  require_finite(p.loss_branching, "loss_branching");

  if (p.omega_p < 0.0)
    throw std::invalid_argument("omega_p must be >= 0");
  if (p.omega_c <= 0.0)
    throw std::invalid_argument("omega_c must be > 0");
  if (p.omega_s < 0.0)
    throw std::invalid_argument("omega_s must be >= 0");
  if (p.gamma_e <= 0.0)
    throw std::invalid_argument("gamma_e must be > 0");
  if (p.gamma_r < 0.0)
    throw std::invalid_argument("gamma_r must be >= 0");
  if (p.n_target < 1)
    throw std::invalid_argument("n_target must be >= 1");
  if (p.loss_branching <= 0.0 || p.loss_branching > 1.0)
    throw std::invalid_argument("loss_branching must be in (0, 1]");

  std::vector<std::string> warnings;

  if (p.omega_p == 0.0) {
    warnings.push_back("omega_p = 0: probe is off, all loss rates vanish");
  } else {
    double ratio = p.omega_c / p.omega_p;
    if (ratio < 2.0)
      throw std::invalid_argument(
          "omega_c/omega_p < 2: control too weak for transparency-based "
          "number selection");
    if (ratio < 5.0)
      warnings.push_back(
          "omega_c/omega_p < 5: probe saturation effects may distort the "
          "loss-rate contrast");
  }

  if (p.omega_s == 0.0) {
    warnings.push_back("omega_s = 0: dressing is off, no number dependence");
  } else {
    if (std::abs(p.delta_s) <= p.omega_s)
      throw std::invalid_argument(
          "|delta_s| <= omega_s: dressing is not in the far-detuned regime");
    if (std::abs(p.delta_s) / p.omega_s < 3.0)
      warnings.push_back(
          "|delta_s|/omega_s < 3: perturbative dressing picture is marginal");
  }

  return warnings;
}

void check_noise(const NoiseModel& m) {
  require_finite(m.sigma_delta_l, "sigma_delta_l");
  require_finite(m.nbar_initial, "nbar_initial");
  if (m.sigma_delta_l < 0.0)
    throw std::invalid_argument("sigma_delta_l must be >= 0");
  if (m.nbar_initial <= 0.0)
    throw std::invalid_argument("nbar_initial must be > 0");
}

double stark_shift_exact(int n, double omega_s, double delta_s) {
  if (n < 0) throw std::invalid_argument("atom number must be >= 0");
  if (n == 0 || omega_s == 0.0) return 0.0;
  if (delta_s == 0.0)
    throw std::invalid_argument("delta_s must be nonzero for a dressed shift");
  double sign = delta_s > 0.0 ? 1.0 : -1.0;
  double mag = std::abs(delta_s);
  // sqrt(d^2 + n w^2) - d, written to avoid cancellation for n w^2 << d^2
  double excess = n * omega_s * omega_s /
                  (std::sqrt(mag * mag + n * omega_s * omega_s) + mag);
  return 0.5 * sign * excess;
}

double stark_shift_perturbative(int n, double omega_s, double delta_s) {
  if (n < 0) throw std::invalid_argument("atom number must be >= 0");
  if (n == 0 || omega_s == 0.0) return 0.0;
  if (delta_s == 0.0)
    throw std::invalid_argument("delta_s must be nonzero for a dressed shift");
  double w2 = omega_s * omega_s;
  return n * w2 / (4.0 * delta_s) -
         double(n) * n * w2 * w2 / (16.0 * delta_s * delta_s * delta_s);
}

double characteristic_shift(double omega_s, double delta_s) {
  if (delta_s == 0.0)
    throw std::invalid_argument("delta_s must be nonzero");
  double w2 = omega_s * omega_s;
  return w2 * w2 / (16.0 * delta_s * delta_s * delta_s);
}

double solve_omega_s(double delta, double delta_s) {
  double x = 16.0 * delta * delta_s * delta_s * delta_s;
  if (!(x > 0.0))
    throw std::invalid_argument(
        "delta and delta_s^3 must have the same (nonzero) sign");
  return std::pow(x, 0.25);
}

static double stark_shift(int n, double omega_s, double delta_s,
                          ShiftOrder order) {
  return order == ShiftOrder::exact
             ? stark_shift_exact(n, omega_s, delta_s)
             : stark_shift_perturbative(n, omega_s, delta_s);
}

double probe_detuning(int n_target, double omega_s, double delta_s,
                      ShiftOrder order) {
  if (n_target < 1) throw std::invalid_argument("n_target must be >= 1");
  return stark_shift(n_target - 1, omega_s, delta_s, order) -
         stark_shift(n_target, omega_s, delta_s, order);
}

double transition_mismatch(int n, const PhysicalParams& p, ShiftOrder order) {
  if (n < 1) throw std::invalid_argument("atom number must be >= 1");
  double resonant = stark_shift(n - 1, p.omega_s, p.delta_s, order) -
                    stark_shift(n, p.omega_s, p.delta_s, order);
  return p.delta_p - resonant;
}

double rydberg_fraction(int n, double omega_s, double delta_s) {
  if (n < 0) throw std::invalid_argument("atom number must be >= 0");
  if (delta_s == 0.0)
    throw std::invalid_argument("delta_s must be nonzero");
  return n * omega_s * omega_s / (4.0 * delta_s * delta_s);
}

double dressing_critical_distance(double c6, double delta_s) {
  if (c6 <= 0.0) throw std::invalid_argument("c6 must be > 0");
  if (delta_s == 0.0) throw std::invalid_argument("delta_s must be nonzero");
  return std::pow(c6 / (2.0 * hbar * std::abs(delta_s)), 1.0 / 6.0);
}

}
