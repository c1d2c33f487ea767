#include "truncq/core_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace truncq {

namespace {

void require_same_length(const BitString& a, const BitString& b, const char* where) {
  if (a.length() != b.length()) {
    throw std::invalid_argument(std::string(where) + ": operand lengths differ");
  }
}

// Net column sums c_k = x_k + sum a_{i,k} - sum b_{i,k} as small integers.
std::vector<int> column_sums(const SequenceSpec& seq) {
  const int L = seq.x.length();
  std::vector<int> c(static_cast<std::size_t>(L), 0);
  for (int k = 0; k < L; ++k) c[static_cast<std::size_t>(k)] = seq.x.bit(k);
  for (const auto& a : seq.adds) {
    require_same_length(seq.x, a, "sequence");
    for (int k = 0; k < L; ++k) c[static_cast<std::size_t>(k)] += a.bit(k);
  }
  for (const auto& b : seq.subs) {
    require_same_length(seq.x, b, "sequence");
    for (int k = 0; k < L; ++k) c[static_cast<std::size_t>(k)] -= b.bit(k);
  }
  return c;
}

}  // namespace

void TruncationConfig::validate() const {
  if (L < 1) throw std::invalid_argument("TruncationConfig: L must be >= 1");
  if (N < 1) throw std::invalid_argument("TruncationConfig: N must be >= 1");
  if (ell < 0) throw std::invalid_argument("TruncationConfig: ell must be >= 0");
}

BitString::BitString(int length, std::uint64_t value) {
  if (length < 0) throw std::invalid_argument("BitString: negative length");
  bits_.resize(static_cast<std::size_t>(length));
  for (int i = 0; i < length && i < 64; ++i) {
    bits_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((value >> i) & 1);
  }
}

BitString BitString::from_bits(std::vector<std::uint8_t> bits) {
  BitString out;
  for (auto& b : bits) b &= 1;
  out.bits_ = std::move(bits);
  return out;
}

std::uint64_t BitString::value() const {
  if (length() > 63) throw std::logic_error("BitString::value: register too wide for u64");
  std::uint64_t v = 0;
  for (int i = 0; i < length(); ++i) v |= static_cast<std::uint64_t>(bits_[static_cast<std::size_t>(i)]) << i;
  return v;
}

BitString twos_complement(const BitString& a) {
  // 2^L - a mod 2^L: complement all bits then add one.
  const int L = a.length();
  BitString out = a;
  int carry = 1;
  for (int i = 0; i < L; ++i) {
    int v = (1 - a.bit(i)) + carry;
    out.set_bit(i, v & 1);
    carry = v >> 1;
  }
  return out;
}

BitString add_mod(const BitString& a, const BitString& b) {
  require_same_length(a, b, "add_mod");
  BitString out = a;
  int carry = 0;
  for (int i = 0; i < a.length(); ++i) {
    int v = a.bit(i) + b.bit(i) + carry;
    out.set_bit(i, v & 1);
    carry = v >> 1;
  }
  return out;
}

BitString sub_mod(const BitString& a, const BitString& b) {
  require_same_length(a, b, "sub_mod");
  BitString out = a;
  int borrow = 0;
  for (int i = 0; i < a.length(); ++i) {
    int v = a.bit(i) - b.bit(i) - borrow;
    out.set_bit(i, v & 1);
    borrow = v < 0 ? 1 : 0;
  }
  return out;
}

double carry_fidelity(int N, long long a) {
  if (N < 1) throw std::invalid_argument("carry_fidelity: N must be >= 1");
  if (a == 0) return 1.0;
  const double theta = static_cast<double>(a) * std::numbers::pi / std::ldexp(1.0, N);
  return 0.5 * (1.0 + std::cos(theta));
}

CarryProfile extract_carry_profile(const BitString& x, const BitString& a,
                                   const TruncationConfig& cfg) {
  cfg.validate();
  if (x.length() != cfg.L || a.length() != cfg.L) {
    throw std::invalid_argument("extract_carry_profile: operand length != cfg.L");
  }
  CarryProfile profile;
  const int last_effective = cfg.L - cfg.N - 2;
  int carry = 0;
  int chain_start = -1;
  int chain_len = 0;
  for (int i = 0; i < cfg.L; ++i) {
    const int total = x.bit(i) + a.bit(i) + carry;
    const bool event = total >= 2;
    if (event) {
      if (chain_len == 0) chain_start = i;
      ++chain_len;
      if (i <= last_effective) ++profile.total_effective_errors;
    } else if (chain_len > 0) {
      profile.chains.push_back({chain_start, chain_len});
      chain_len = 0;
    }
    carry = total >> 1;
  }
  if (chain_len > 0) profile.chains.push_back({chain_start, chain_len});
  return profile;
}

double exact_truncation_fidelity(const BitString& x, const BitString& a,
                                 const TruncationConfig& cfg) {
  const CarryProfile profile = extract_carry_profile(x, a, cfg);
  if (profile.total_effective_errors == 0) return 1.0;
  return std::pow(carry_fidelity(cfg.N), profile.total_effective_errors);
}

double exact_subtraction_fidelity(const BitString& x, const BitString& a,
                                  const TruncationConfig& cfg) {
  // A borrow at column i of x - a is a carry at column i of ~x + a; the
  // phase error mirrors with opposite sign and identical magnitude.
  BitString nx = x;
  for (int i = 0; i < x.length(); ++i) nx.set_bit(i, 1 - x.bit(i));
  return exact_truncation_fidelity(nx, a, cfg);
}

std::vector<double> effective_sums(const SequenceSpec& seq, int window) {
  if (window < 1) throw std::invalid_argument("effective_sums: window must be >= 1");
  const auto c = column_sums(seq);
  const int L = seq.x.length();
  std::vector<double> d(static_cast<std::size_t>(L), 0.0);
  for (int j = 0; j < L; ++j) {
    double acc = 0.0;
    for (int k = j; k >= 0 && k > j - window; --k) {
      acc += std::ldexp(static_cast<double>(c[static_cast<std::size_t>(k)]), k - j);
    }
    d[static_cast<std::size_t>(j)] = acc;
  }
  return d;
}

double sequence_instance_fidelity(const SequenceSpec& seq, const TruncationConfig& cfg,
                                  int window) {
  cfg.validate();
  if (seq.x.length() != cfg.L) {
    throw std::invalid_argument("sequence_instance_fidelity: operand length != cfg.L");
  }
  if (window < 1 || window > 62) {
    throw std::invalid_argument("sequence_instance_fidelity: window out of range");
  }
  const int top = cfg.L - cfg.N - 2;
  if (top < 0) return 1.0;
  const auto c = column_sums(seq);

  // d_j tracked exactly as the integer S_j = d_j * 2^(window-1); the column
  // leaving the window always sits in the lowest bit, so the shift is exact.
  std::vector<long long> ring(static_cast<std::size_t>(window), 0);
  long long scaled = 0;
  double log_fidelity = 0.0;
  for (int j = 0; j <= top; ++j) {
    const long long cj = c[static_cast<std::size_t>(j)];
    const long long leaving = ring[static_cast<std::size_t>(j % window)];
    scaled = ((scaled - leaving) >> 1) + (cj << (window - 1));
    ring[static_cast<std::size_t>(j % window)] = cj;
    // floor(d_j / 2) = arithmetic shift of the scaled value by window bits.
    const long long floored = scaled >> window;
    if (floored != 0) {
      const double f = carry_fidelity(cfg.N, floored);
      if (f <= 0.0) return 0.0;
      log_fidelity += std::log(f);
    }
  }
  return std::exp(log_fidelity);
}

double product_form_fidelity(const SequenceSpec& seq, const TruncationConfig& cfg) {
  cfg.validate();
  const int L = cfg.L;
  if (seq.x.length() != L) {
    throw std::invalid_argument("product_form_fidelity: operand length != cfg.L");
  }
  const auto c = column_sums(seq);

  // Correction terms act on operand bits only (they are folded into the
  // additive rotations), so track sum a - sum b separately from x.
  std::vector<int> s(static_cast<std::size_t>(L), 0);
  if (cfg.ell > 0) {
    for (int k = 0; k < L; ++k) {
      s[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k)] - seq.x.bit(k);
    }
  }

  // Classical result bits y.
  BitString y = seq.x;
  for (const auto& a : seq.adds) y = add_mod(y, a);
  for (const auto& b : seq.subs) y = sub_mod(y, b);

  const double pi = std::numbers::pi;
  double log_prob = 0.0;
  for (int j = 0; j < L; ++j) {
    double theta = 0.0;
    for (int k = j; k >= 0 && k >= j - cfg.N; --k) {
      theta += 2.0 * pi * std::ldexp(static_cast<double>(c[static_cast<std::size_t>(k)]), k - j - 1);
    }
    for (int k = j - 1; k >= 0 && k >= j - cfg.N; --k) {
      theta -= pi * std::ldexp(static_cast<double>(y.bit(k)), k - j);
    }
    if (cfg.ell > 0) {
      for (int D = cfg.N + 1; D <= cfg.N + cfg.ell && D <= j; ++D) {
        theta += pi * std::ldexp(static_cast<double>(s[static_cast<std::size_t>(j - D)]), -D);
      }
    }
    const double half = 0.5 * (theta - pi * y.bit(j));
    const double factor = std::cos(half) * std::cos(half);
    if (factor <= 0.0) return 0.0;
    log_prob += std::log(factor);
  }
  return std::exp(log_prob);
}

}  // namespace truncq
