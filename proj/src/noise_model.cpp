#include "truncq/noise_model.hpp"

#include <cmath>
#include <stdexcept>

namespace truncq {

double adder_mean_fidelity(int L, double sigma) {
  if (L < 1) throw std::invalid_argument("adder_mean_fidelity: L must be >= 1");
  if (sigma < 0.0) throw std::invalid_argument("adder_mean_fidelity: sigma must be >= 0");
  const double s2 = sigma * sigma;
  double log_sum = 0.0;
  for (int k = 1; k <= L; ++k) {
    log_sum += std::log1p(std::exp(-k * s2 / 2.0)) - std::log(2.0);
  }
  return std::exp(log_sum);
}

double component_fidelity(double j, double c, int factors, double sigma) {
  if (factors < 1) throw std::invalid_argument("component_fidelity: factors must be >= 1");
  if (j < 0.0 || c < 0.0 || sigma < 0.0) {
    throw std::invalid_argument("component_fidelity: negative parameter");
  }
  const double s2 = sigma * sigma;
  double log_sum = 0.0;
  for (int k = 1; k <= factors; ++k) {
    // The k=1 exponent argument j(k-2)+c goes negative when c < j; the
    // formula is evaluated as printed.
    const double arg = (j * (k - 2) + c) * s2 / 2.0;
    log_sum += std::log1p(std::exp(-arg)) - std::log(2.0);
  }
  return std::exp(log_sum);
}

double modular_adder_mean_fidelity(int L, double sigma) {
  return component_fidelity(3.0, 3.5, L + 1, sigma);
}

double modexp_mean_fidelity(int L, double sigma) {
  const double l = static_cast<double>(L);
  return component_fidelity(2.0 * l * l + l / 2.0, 3.5 * l * l, L, sigma);
}

double required_sigma(double target_fidelity, NoiseComponent component, int L) {
  if (!(target_fidelity > 0.0 && target_fidelity < 1.0)) {
    throw std::invalid_argument("required_sigma: target must lie in (0,1)");
  }
  auto eval = [&](double sigma) {
    switch (component) {
      case NoiseComponent::kAdder: return adder_mean_fidelity(L, sigma);
      case NoiseComponent::kModularAdder: return modular_adder_mean_fidelity(L, sigma);
      case NoiseComponent::kModExp: return modexp_mean_fidelity(L, sigma);
    }
    throw std::logic_error("required_sigma: unknown component");
  };
  double lo = 0.0, hi = 1.0;
  while (eval(hi) > target_fidelity) {
    hi *= 2.0;
    if (hi > 1e6) throw std::domain_error("required_sigma: target unattainable");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) > target_fidelity) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double z_flip_probability(double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("z_flip_probability: sigma must be >= 0");
  return -0.5 * std::expm1(-sigma * sigma / 2.0);
}

double flip_to_sigma(double q) {
  if (!(q >= 0.0 && q < 0.5)) throw std::invalid_argument("flip_to_sigma: q outside [0, 1/2)");
  return std::sqrt(-2.0 * std::log1p(-2.0 * q));
}

}  // namespace truncq
