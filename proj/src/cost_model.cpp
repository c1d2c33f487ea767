#include "truncq/cost_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "truncq/shor_model.hpp"

namespace truncq {

namespace {

std::string eta_string(double eta) {
  std::ostringstream os;
  os << eta;
  return os.str();
}

struct AdderCensus {
  long long distilled = 0;
  long long raw = 0;
};

// sum_{M=3}^{upper} 2 C(R_M,eta) (L-M+2) + L C(R_avg,eta); distilled counts
// the same rotations with unit weight.  Rotations below the non-Clifford
// floor (M < 3) are free.
AdderCensus adder_census(int L, int upper, int avg_level, double eta, const CostTable& table) {
  AdderCensus out;
  for (int M = 3; M <= upper; ++M) {
    const long long gates = 2LL * (L - M + 2);
    out.distilled += gates;
    out.raw += gates * table.lookup(M, eta);
  }
  if (avg_level >= 3) {
    out.distilled += L;
    out.raw += static_cast<long long>(L) * table.lookup(avg_level, eta);
  }
  return out;
}

// Per modular adder: 2 QFT/IQFT combinations and 4 additions.
AdderCensus modular_adder_census(int L, int upper, int avg_level, double eta,
                                 const CostTable& table) {
  AdderCensus qft;
  for (int M = 3; M <= upper; ++M) {
    const long long gates = 2LL * (L - M + 2);
    qft.distilled += gates;
    qft.raw += gates * table.lookup(M, eta);
  }
  AdderCensus out;
  out.distilled = 2 * qft.distilled;
  out.raw = 2 * qft.raw;
  if (avg_level >= 3) {
    out.distilled += 4LL * L;
    out.raw += 4LL * L * table.lookup(avg_level, eta);
  }
  return out;
}

}  // namespace

CostTable CostTable::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CostTableError("cost table: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), path);
}

CostTable CostTable::from_json_text(const std::string& text, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CostTableError("cost table '" + origin + "': invalid JSON: " + e.what());
  }
  if (!doc.is_array() || doc.empty()) {
    throw CostTableError("cost table '" + origin + "': expected a non-empty array of entries");
  }
  CostTable out;
  out.source_ = origin;
  for (const auto& entry : doc) {
    if (!entry.is_object()) throw CostTableError("cost table '" + origin + "': entry is not an object");
    for (const auto& [key, _] : entry.items()) {
      if (key != "M" && key != "eta" && key != "raw_states") {
        throw CostTableError("cost table '" + origin + "': unknown key '" + key + "'");
      }
    }
    if (!entry.contains("M") || !entry.contains("eta") || !entry.contains("raw_states")) {
      throw CostTableError("cost table '" + origin + "': entry missing M/eta/raw_states");
    }
    if (!entry["M"].is_number_integer() || !entry["eta"].is_number() ||
        !entry["raw_states"].is_number_integer()) {
      throw CostTableError("cost table '" + origin + "': wrong field type in entry");
    }
    const int M = entry["M"].get<int>();
    const double eta = entry["eta"].get<double>();
    const long long raw = entry["raw_states"].get<long long>();
    if (M < 3 || raw < 1 || !(eta > 0.0 && eta < 1.0)) {
      throw CostTableError("cost table '" + origin + "': out-of-range entry (M=" +
                           std::to_string(M) + ", eta=" + eta_string(eta) + ")");
    }
    out.entries_[M][eta] = raw;
  }
  out.validate();
  return out;
}

void CostTable::validate() const {
  // raw_states non-decreasing in M at fixed eta, non-increasing in eta at fixed M.
  std::map<double, std::pair<int, long long>> last_by_eta;
  for (const auto& [M, by_eta] : entries_) {
    long long prev = -1;
    double prev_eta = 0.0;
    for (auto it = by_eta.rbegin(); it != by_eta.rend(); ++it) {
      // iterate eta descending: raw must be non-decreasing as eta shrinks
      if (prev >= 0 && it->second < prev) {
        throw CostTableError("cost table: raw_states increases with eta at M=" + std::to_string(M) +
                             " (eta=" + eta_string(it->first) + " vs eta=" + eta_string(prev_eta) + ")");
      }
      prev = it->second;
      prev_eta = it->first;
    }
    for (const auto& [eta, raw] : by_eta) {
      auto it = last_by_eta.find(eta);
      if (it != last_by_eta.end() && raw < it->second.second) {
        throw CostTableError("cost table: raw_states decreasing in M (M=" + std::to_string(M) +
                             ", eta=" + eta_string(eta) + " below M=" +
                             std::to_string(it->second.first) + ")");
      }
      last_by_eta[eta] = {M, raw};
    }
  }
}

long long CostTable::lookup(int M, double eta) const {
  auto it = entries_.find(M);
  if (it != entries_.end()) {
    auto jt = it->second.find(eta);
    if (jt != it->second.end()) return jt->second;
  }
  throw CostTableError("cost table '" + source_ + "': missing entry (M=" + std::to_string(M) +
                       ", eta=" + eta_string(eta) + ")");
}

std::size_t CostTable::size() const {
  std::size_t n = 0;
  for (const auto& [_, by_eta] : entries_) n += by_eta.size();
  return n;
}

CostReport draper_adder_cost(int L, double eta, const CostTable& table) {
  if (L < 2) throw CostTableError("draper_adder_cost: L must be >= 2");
  const AdderCensus census = adder_census(L, L + 1, L, eta, table);
  CostReport r;
  r.logical_qubits = L;
  r.distilled_states = census.distilled;
  r.raw_states = census.raw;
  return r;
}

CostReport truncated_adder_cost(int L, int N, double eta, const CostTable& table) {
  if (L < N + 1) throw CostTableError("truncated_adder_cost: requires L >= N+1");
  if (N < 1) throw CostTableError("truncated_adder_cost: N must be >= 1");
  const AdderCensus census = adder_census(L, N + 2, N, eta, table);
  CostReport r;
  r.logical_qubits = L;
  r.distilled_states = census.distilled;
  r.raw_states = census.raw;
  return r;
}

CostReport shor_cost_full(int L, double eta, const CostTable& table) {
  const AdderCensus per_ma = modular_adder_census(L, L + 1, L, eta, table);
  const long long count = 4LL * L * L;
  CostReport r;
  r.logical_qubits = 2LL * L + 4;
  r.distilled_states = per_ma.distilled * count;
  r.raw_states = per_ma.raw * count;
  r.success_probability = 1.0;
  return r;
}

CostReport shor_cost_truncated(int L, int N, int ell, double eta, const CostTable& table) {
  if (N < 1) throw CostTableError("shor_cost_truncated: N must be >= 1");
  const AdderCensus per_ma = modular_adder_census(L, N + 2, N, eta, table);
  const long long count = 4LL * L * L;
  CostReport r;
  r.logical_qubits = 2LL * L + 4;
  r.distilled_states = per_ma.distilled * count;
  r.raw_states = per_ma.raw * count;
  r.success_probability = corrected_shor_success(L, N, ell);
  return r;
}

}  // namespace truncq
