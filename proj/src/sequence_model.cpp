#include "truncq/sequence_model.hpp"

#include <cmath>
#include <stdexcept>

#include "truncq/core_model.hpp"

namespace truncq {

namespace {

double binom_pmf(int n, int k, double p) {
  if (k < 0 || k > n) return 0.0;
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  // Stable enough for the n this model sees (hundreds).
  double logc = 0.0;
  for (int i = 1; i <= k; ++i) {
    logc += std::log(static_cast<double>(n - k + i)) - std::log(static_cast<double>(i));
  }
  return std::exp(logc + k * std::log(p) + (n - k) * std::log1p(-p));
}

void check_params(const SequenceModelParams& params) {
  if (params.n < 0) throw std::invalid_argument("sequence model: n must be >= 0");
  if (params.window < 1 || params.window > 30) {
    throw std::invalid_argument("sequence model: window out of range");
  }
  TruncationConfig{params.L, params.N, params.ell}.validate();
}

}  // namespace

Pmf binom_diff_pmf(int n1, double p1, int n2, double p2) {
  if (n1 < 0 || n2 < 0) throw std::invalid_argument("binom_diff_pmf: negative trial count");
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) {
    throw std::invalid_argument("binom_diff_pmf: probabilities must lie in [0,1]");
  }
  Pmf out;
  out.scale_bits = 0;
  out.origin = -n2;
  out.mass.assign(static_cast<std::size_t>(n1 + n2 + 1), 0.0);
  std::vector<double> pa(static_cast<std::size_t>(n1 + 1));
  std::vector<double> pb(static_cast<std::size_t>(n2 + 1));
  for (int i = 0; i <= n1; ++i) pa[static_cast<std::size_t>(i)] = binom_pmf(n1, i, p1);
  for (int i = 0; i <= n2; ++i) pb[static_cast<std::size_t>(i)] = binom_pmf(n2, i, p2);
  for (int a = 0; a <= n1; ++a) {
    for (int b = 0; b <= n2; ++b) {
      out.mass[static_cast<std::size_t>(a - b + n2)] += pa[static_cast<std::size_t>(a)] * pb[static_cast<std::size_t>(b)];
    }
  }
  return out;
}

Pmf effective_sum_pmf(const SequenceModelParams& params) {
  check_params(params);
  const int n = params.n;
  const int w = params.window;
  const int s = w - 1;  // grid = 2^-s

  // One column: c = A - B with A ~ Bi(n+1, 1/2) (x plus the adds) and
  // B ~ Bi(n, 1/2); support [-n, n+1].
  const Pmf column = binom_diff_pmf(n + 1, 0.5, n, 0.5);

  // Convolve the w window copies, copy m scaled by 2^-m (grid stride 2^{s-m}).
  Pmf acc;
  acc.scale_bits = s;
  acc.origin = 0;
  acc.mass = {1.0};
  for (int m = 0; m < w; ++m) {
    const std::int64_t stride = static_cast<std::int64_t>(1) << (s - m);
    Pmf next;
    next.scale_bits = s;
    next.origin = acc.origin + column.origin * stride;
    next.mass.assign(acc.mass.size() + static_cast<std::size_t>((column.mass.size() - 1)) *
                                            static_cast<std::size_t>(stride),
                     0.0);
    for (std::size_t i = 0; i < acc.mass.size(); ++i) {
      const double pi_ = acc.mass[i];
      if (pi_ == 0.0) continue;
      for (std::size_t jc = 0; jc < column.mass.size(); ++jc) {
        next.mass[i + jc * static_cast<std::size_t>(stride)] += pi_ * column.mass[jc];
      }
    }
    acc = std::move(next);
  }
  if (params.tail_correction) {
    // The dropped geometric tail has mean exactly 2^-w; folding it in keeps
    // <D> = 1 on the nose while its variance is already inside tolerance.
    acc.offset = std::ldexp(1.0, -w);
  }
  acc.clamp_and_normalize();
  return acc;
}

double sequence_fidelity_numeric(const SequenceModelParams& params) {
  check_params(params);
  const int W = params.L - params.N - 1;
  if (W <= 0) return 1.0;
  const Pmf pmf = effective_sum_pmf(params);
  // Grid values are odd multiples of 2^-w under the tail shift; floor(d/2)
  // stays an exact integer shift either way.
  const int w = params.window;
  double log_sum = 0.0;
  for (std::size_t i = 0; i < pmf.mass.size(); ++i) {
    const double pr = pmf.mass[i];
    if (pr == 0.0) continue;
    const long long scaled =
        2 * (pmf.origin + static_cast<long long>(i)) + (params.tail_correction ? 1 : 0);
    const long long floored = scaled >> (w + 1);  // floor(d/2)
    const double f = carry_fidelity(params.N, floored);
    if (f <= 0.0) return 0.0;
    log_sum += pr * std::log(f);
  }
  return std::exp(static_cast<double>(W) * log_sum);
}

double sequence_fidelity_closed(const SequenceModelParams& params) {
  check_params(params);
  const int W = params.L - params.N - 1;
  if (W <= 0) return 1.0;
  return std::pow(carry_fidelity(params.N), W * (params.n + 1) / 6.0);
}

double sequence_fidelity_rebased(double single_pass_fidelity, int n) {
  if (!(single_pass_fidelity > 0.0 && single_pass_fidelity <= 1.0)) {
    throw std::invalid_argument("sequence_fidelity_rebased: fidelity outside (0,1]");
  }
  return std::pow(single_pass_fidelity, (n + 1) / 2.0);
}

double corrected_fidelity(const SequenceModelParams& params) {
  check_params(params);
  if (params.ell == 0) return sequence_fidelity_closed(params);
  const int W = params.L - params.N - 1;
  if (W <= 0) return 1.0;
  const int W_corr = params.L - params.N - params.ell - 1;
  const double overhead =
      std::pow(carry_fidelity(params.N), (W / 3.0) * (params.ell / 6.0));
  if (W_corr <= 0) return overhead;
  const double decay =
      std::pow(carry_fidelity(params.N + params.ell), W_corr * (params.n + 1) / 6.0);
  return overhead * decay;
}

int truncation_level_for_error(double epsilon, int n, int L) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("truncation_level_for_error: epsilon outside (0,1)");
  }
  if (n < 0 || L < 2) throw std::invalid_argument("truncation_level_for_error: need n >= 0, L >= 2");
  const double exponent = (n + 2) * static_cast<double>(L) / 12.0;
  for (int N = 1; N <= 62; ++N) {
    if (std::pow(carry_fidelity(N), exponent) >= 1.0 - epsilon) return N;
  }
  return 63;
}

}  // namespace truncq
