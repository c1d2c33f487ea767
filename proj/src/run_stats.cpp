#include "truncq/run_stats.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace truncq {

namespace {

long double binomial_ld(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0L;
  if (k > n - k) k = n - k;
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  }
  return r;
}

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("run statistics: p must lie in [0,1]");
  }
}

double window_or_throw(const TruncationConfig& cfg) {
  cfg.validate();
  return cfg.L - cfg.N - 1;
}

}  // namespace

double run_survival_pmf(double p, int n, int k, int x) {
  check_probability(p);
  if (n < 0 || k < 1 || x < 0) {
    throw std::invalid_argument("run_survival_pmf: need n >= 0, k >= 1, x >= 0");
  }
  if (p == 0.0 || n == 0) return x == 0 ? 1.0 : 0.0;
  if (p == 1.0) {
    const int runs = n >= k ? 1 : 0;  // one unbroken run
    return x == runs ? 1.0 : 0.0;
  }
  const long double lp = static_cast<long double>(p);
  const long double lq = 1.0L - lp;
  const int upper = (n + 1) / (k + 1);
  // Alternating series; compensated summation keeps the cancellation in check.
  long double sum = 0.0L, comp = 0.0L;
  for (int m = x; m <= upper; ++m) {
    const long double sign = ((m - x) % 2 == 0) ? 1.0L : -1.0L;
    const long double qpow = (m >= 1) ? std::pow(lq, static_cast<long double>(m - 1)) : 1.0L / lq;
    long double term = sign * binomial_ld(m, x) * std::pow(lp, static_cast<long double>(m) * k) *
                       qpow *
                       (binomial_ld(n - m * k, m - 1) + lq * binomial_ld(n - m * k, m));
    const long double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  double out = static_cast<double>(sum + comp);
  if (out < 0.0 && out > -1e-9) out = 0.0;
  return out;
}

double exact_run_pmf(double p, int n, int k, int x) {
  // The survival-function difference is not a true PMF pointwise (it can be
  // negative, most visibly at x=0); its first moment over x is what the run
  // statistics consume.  Negative values are clamped to zero.
  const double v = run_survival_pmf(p, n, k, x) - run_survival_pmf(p, n, k + 1, x);
  return v < 0.0 ? 0.0 : v;
}

double avg_runs(double p, int n) {
  check_probability(p);
  if (n < 1) throw std::invalid_argument("avg_runs: n must be >= 1");
  return p + (n - 1) * p * (1.0 - p);
}

double avg_exact_runs(double p, int n, int k) {
  check_probability(p);
  if (n < 1 || k < 1 || k > n) return 0.0;
  const double q = 1.0 - p;
  if (k == n) return std::pow(p, n);
  return std::pow(p, k) * (2.0 * q + (n - k - 1) * q * q);
}

double avg_run_length(double p, int n) {
  const double r = avg_runs(p, n);
  if (r <= 0.0) throw std::domain_error("avg_run_length: undefined, no runs on average");
  double s = 0.0;
  for (int k = n; k >= 1; --k) s += k * avg_exact_runs(p, n, k);
  return s / r;
}

double distinct_carries(int L_eff) {
  if (L_eff < 1) throw std::invalid_argument("distinct_carries: L_eff must be >= 1");
  const double a = avg_run_length(0.75, L_eff);
  return L_eff / (4.0 * (1.0 + (a - 1.0) / 3.0));
}

double distinct_chains_addsub(int L_eff) {
  if (L_eff < 1) throw std::invalid_argument("distinct_chains_addsub: L_eff must be >= 1");
  const double a = avg_run_length(0.5, L_eff);
  return L_eff / (4.0 * (1.0 + (a - 1.0) / 2.0));
}

double adder_fidelity_avg(const TruncationConfig& cfg) {
  const int w = static_cast<int>(window_or_throw(cfg));
  if (w < 1) return 1.0;
  const double exponent = distinct_carries(w) * avg_run_length(0.75, w);
  return std::pow(carry_fidelity(cfg.N), exponent);
}

double addsub_fidelity_avg(const TruncationConfig& cfg) {
  const int w = static_cast<int>(window_or_throw(cfg));
  if (w < 1) return 1.0;
  const double exponent = distinct_chains_addsub(w) * avg_run_length(0.5, w);
  return std::pow(carry_fidelity(cfg.N), exponent);
}

double adder_fidelity_asymptotic(const TruncationConfig& cfg) {
  const double w = window_or_throw(cfg);
  if (w <= 0) return 1.0;
  return std::pow(carry_fidelity(cfg.N), w / 2.0);
}

double addsub_fidelity_asymptotic(const TruncationConfig& cfg) {
  const double w = window_or_throw(cfg);
  if (w <= 0) return 1.0;
  return std::pow(carry_fidelity(cfg.N), w / 3.0);
}

}  // namespace truncq
