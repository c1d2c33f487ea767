#pragma once

#include <cstdint>
#include <vector>

namespace truncq {

// Truncation parameters for phase-based arithmetic.  The finest rotation kept
// anywhere in the circuit is pi/2^N; ell > 0 folds statistical corrective
// rotations into the additive phase gates.
struct TruncationConfig {
  int L = 1;    // register length in bits
  int N = 1;    // truncation level
  int ell = 0;  // correction depth, 0 = uncorrected

  // Columns whose carry events cost fidelity: positions 0 .. L-N-2.
  int unprotected_columns() const {
    int w = L - N - 1;
    return w > 0 ? w : 0;
  }
  void validate() const;  // throws std::invalid_argument
};

// Little-endian bit vector of fixed length; index 0 is least significant.
class BitString {
 public:
  BitString() = default;
  BitString(int length, std::uint64_t value);
  static BitString from_bits(std::vector<std::uint8_t> bits);

  int length() const { return static_cast<int>(bits_.size()); }
  int bit(int i) const { return bits_[static_cast<std::size_t>(i)]; }
  void set_bit(int i, int v) { bits_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 1); }
  // Integer value; only valid for length <= 63.
  std::uint64_t value() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  bool operator==(const BitString& o) const { return bits_ == o.bits_; }

 private:
  std::vector<std::uint8_t> bits_;
};

// (2^L - a) mod 2^L.
BitString twos_complement(const BitString& a);

// a + b mod 2^L and a - b mod 2^L for equal-length operands.
BitString add_mod(const BitString& a, const BitString& b);
BitString sub_mod(const BitString& a, const BitString& b);

struct CarryChain {
  int start = 0;   // 0-indexed column of the initiating carry event
  int length = 0;  // consecutive carry events in the chain
};

struct CarryProfile {
  std::vector<CarryChain> chains;
  int total_effective_errors = 0;  // carry events at columns <= L-N-2
};

// Carry fidelity p_{N,a} = 1/2 (1 + cos(a pi / 2^N)).  a = 0 returns exactly 1.
double carry_fidelity(int N, long long a = 1);

// Column-by-column classical addition; a carry event is a column whose total
// (x_i + a_i + carry_in) reaches 2.
CarryProfile extract_carry_profile(const BitString& x, const BitString& a,
                                   const TruncationConfig& cfg);

// p_N ^ total_effective_errors; exactly 1 when the truncation window is empty.
double exact_truncation_fidelity(const BitString& x, const BitString& a,
                                 const TruncationConfig& cfg);

// Borrow-chain mirror of the above for x - a via negative rotations.
double exact_subtraction_fidelity(const BitString& x, const BitString& a,
                                  const TruncationConfig& cfg);

// x followed by interleaved additions and subtractions, all modulo 2^L.
struct SequenceSpec {
  BitString x;
  std::vector<BitString> adds;
  std::vector<BitString> subs;
};

// Effective sums d_j = sum_{k=j-window+1}^{j} c_k / 2^{j-k} with
// c_k = x_k + sum_i a_{i,k} - sum_i b_{i,k}; out-of-range k contribute 0.
std::vector<double> effective_sums(const SequenceSpec& seq, int window);

// prod_{j=0}^{L-N-2} p_{N, floor(d_j/2)} over the unprotected columns.
double sequence_instance_fidelity(const SequenceSpec& seq, const TruncationConfig& cfg,
                                  int window = 8);

// Exact product-form probability of measuring the correct result after the
// truncated (and, for cfg.ell > 0, corrected) rotation sequence.  Works at any
// L; this is the large-register stand-in for the dense statevector.
double product_form_fidelity(const SequenceSpec& seq, const TruncationConfig& cfg);

}  // namespace truncq
