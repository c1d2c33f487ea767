#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace truncq {

struct CostTableError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raw magic-state cost C(R_M, eta) of a level-M rotation (angle pi/2^{M-1})
// distilled to logical error rate eta.  Loaded from JSON; invariants:
// raw_states non-decreasing in M at fixed eta, non-increasing in eta at fixed M.
class CostTable {
 public:
  static CostTable from_json_file(const std::string& path);
  static CostTable from_json_text(const std::string& text, const std::string& origin = "<text>");

  long long lookup(int M, double eta) const;  // throws CostTableError naming (M, eta)
  const std::string& source() const { return source_; }
  std::size_t size() const;

 private:
  void validate() const;
  std::map<int, std::map<double, long long>> entries_;
  std::string source_;
};

struct CostReport {
  long long logical_qubits = 0;
  long long distilled_states = 0;
  long long raw_states = 0;
  std::optional<double> success_probability;
};

// Untruncated Draper adder: sum_{M=3}^{L+1} 2 C(R_M,eta)(L-M+2) + L C(R_<M>,eta)
// with <M> = L (finest additive level present).
CostReport draper_adder_cost(int L, double eta, const CostTable& table);

// Truncated variant: upper limit N+2 and <M> = N.
CostReport truncated_adder_cost(int L, int N, double eta, const CostTable& table);

// 4L^2 modular adders, each 2 QFT/IQFT combinations + 4 additions; truncated
// variant attaches corrected_shor_success(L, N, ell).
CostReport shor_cost_full(int L, double eta, const CostTable& table);
CostReport shor_cost_truncated(int L, int N, int ell, double eta, const CostTable& table);

}  // namespace truncq
