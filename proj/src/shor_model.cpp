#include "truncq/shor_model.hpp"

#include <cmath>
#include <stdexcept>

#include "truncq/core_model.hpp"
#include "truncq/run_stats.hpp"

namespace truncq {

double cnot_mix(double pr_ms_correct) {
  if (!(pr_ms_correct >= 0.0 && pr_ms_correct <= 1.0)) {
    throw std::invalid_argument("cnot_mix: probability outside [0,1]");
  }
  const double q = 1.0 - pr_ms_correct;
  return pr_ms_correct * pr_ms_correct + q * q;
}

CnotFactors cnot_factors(int N) {
  const double cs = cnot_mix(carry_fidelity(N));
  return {cs, (2.0 * cs + 1.0) / 3.0};
}

double modular_adder_fidelity(int L, int N) {
  TruncationConfig cfg{L, N, 0};
  cfg.validate();
  const CnotFactors c = cnot_factors(N);
  const double ta = adder_fidelity_avg(cfg);
  const double tas = addsub_fidelity_avg(cfg);
  return (c.cs / 2.0) * (ta + tas * c.cd);
}

SequentialFidelities sequential_fidelities(double n, int N) {
  if (n < 0.0) throw std::invalid_argument("sequential_fidelities: n must be >= 0");
  const CnotFactors c = cnot_factors(N);
  SequentialFidelities f;
  f.fs = 0.5 + 0.5 * std::pow(c.cs, n / 2.0);
  f.fd = 0.5 + 0.5 * std::pow(c.cd, n / 2.0);
  f.fds = 0.5 + 0.5 * std::pow(c.cs * c.cd, n / 2.0);
  return f;
}

double shor_fidelity(int L, int N) {
  TruncationConfig cfg{L, N, 0};
  cfg.validate();
  const double l = static_cast<double>(L);
  const double bracket = sequential_fidelities(l * l / 2.0, N).fds;
  const double decay = std::pow(carry_fidelity(N), l * (l * l + 2.0) / 24.0);
  return bracket * decay;
}

double corrected_shor_success(int L, int N, int ell) {
  TruncationConfig cfg{L, N, ell};
  cfg.validate();
  if (ell == 0) return shor_fidelity(L, N);
  const double l = static_cast<double>(L);
  const double bracket = sequential_fidelities(l * l / 2.0, N).fds;
  const double w = static_cast<double>(L - N - 1);
  const double overhead = std::pow(carry_fidelity(N), (w / 3.0) * (ell / 6.0));
  const double decay = std::pow(carry_fidelity(N + ell), l * (l * l + 2.0) / 24.0);
  return bracket * overhead * decay;
}

double gate_count(int L, int N) {
  if (L < N + 1) throw std::invalid_argument("gate_count: requires L >= N+1");
  const double l = static_cast<double>(L);
  const double nn = static_cast<double>(N);
  return l * l * l * (46.0 + 16.0 * nn) + l * l * (-8.0 * nn * nn - 4.0 * nn + 2325.0 / 2.0) +
         l * (5.0 - nn - 2.0 * nn * nn) - nn / 2.0 - nn * nn / 2.0 - 2.0;
}

long long qft_count(int L) {
  const long long l = L;
  return 16 * l * l + 4 * l + 1;
}

double qft_gate_saving(int L, int N) {
  const double per_qft = static_cast<double>(L - N - 1) * static_cast<double>(L - N) / 2.0;
  return per_qft * static_cast<double>(qft_count(L));
}

}  // namespace truncq
