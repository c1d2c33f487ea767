#pragma once

#include <complex>
#include <cstdint>
#include <exception>
#include <string>
#include <vector>

namespace truncq {

// Dense statevector on up to `qubit_cap` qubits.  Qubit i is bit i of the
// basis index (little-endian).
class QuantumState {
 public:
  static constexpr int kDefaultQubitCap = 16;

  explicit QuantumState(int num_qubits, int qubit_cap = kDefaultQubitCap);

  int num_qubits() const { return num_qubits_; }
  void set_basis_state(std::uint64_t v);

  void apply_h(int q);
  void apply_x(int q);
  void apply_phase(int q, double theta);
  void apply_cphase(int control, int target, double theta);
  void apply_cnot(int control, int target);

  double probability_of(std::uint64_t basis) const;
  // Probability that the qubits in `mask` spell `value` (other qubits traced out).
  double probability_masked(std::uint64_t mask, std::uint64_t value) const;
  double norm_squared() const;

  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }

 private:
  int num_qubits_;
  std::vector<std::complex<double>> amps_;
};

// Exceeding the simulator cap.
struct SimulatorCapError : public std::exception {
  explicit SimulatorCapError(int requested, int cap);
  const char* what() const noexcept override { return message_.c_str(); }
  int requested = 0;
  int cap = 0;

 private:
  std::string message_;
};

}  // namespace truncq
