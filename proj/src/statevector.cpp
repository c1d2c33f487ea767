#include "truncq/statevector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace truncq {

SimulatorCapError::SimulatorCapError(int requested_, int cap_)
    : requested(requested_), cap(cap_) {
  message_ = "simulator cap exceeded: " + std::to_string(requested_) + " qubits requested, cap " +
             std::to_string(cap_) + "; use the analytic predict/montecarlo path";
}

QuantumState::QuantumState(int num_qubits, int qubit_cap) : num_qubits_(num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("QuantumState: need at least one qubit");
  if (num_qubits > qubit_cap) throw SimulatorCapError(num_qubits, qubit_cap);
  amps_.assign(std::size_t{1} << num_qubits, {0.0, 0.0});
  amps_[0] = {1.0, 0.0};
}

void QuantumState::set_basis_state(std::uint64_t v) {
  for (auto& a : amps_) a = {0.0, 0.0};
  amps_.at(v) = {1.0, 0.0};
}

void QuantumState::apply_h(int q) {
  const std::size_t bit = std::size_t{1} << q;
  const double inv_sqrt2 = 0.70710678118654752440084436210485;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    const auto a0 = amps_[i];
    const auto a1 = amps_[i | bit];
    amps_[i] = (a0 + a1) * inv_sqrt2;
    amps_[i | bit] = (a0 - a1) * inv_sqrt2;
  }
}

void QuantumState::apply_x(int q) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    std::swap(amps_[i], amps_[i | bit]);
  }
}

void QuantumState::apply_phase(int q, double theta) {
  const std::size_t bit = std::size_t{1} << q;
  const std::complex<double> ph{std::cos(theta), std::sin(theta)};
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) amps_[i] *= ph;
  }
}

void QuantumState::apply_cphase(int control, int target, double theta) {
  const std::size_t mask = (std::size_t{1} << control) | (std::size_t{1} << target);
  const std::complex<double> ph{std::cos(theta), std::sin(theta)};
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & mask) == mask) amps_[i] *= ph;
  }
}

void QuantumState::apply_cnot(int control, int target) {
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
  }
}

double QuantumState::probability_of(std::uint64_t basis) const {
  return std::norm(amps_.at(basis));
}

double QuantumState::probability_masked(std::uint64_t mask, std::uint64_t value) const {
  double p = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & mask) == (value & mask)) p += std::norm(amps_[i]);
  }
  return p;
}

double QuantumState::norm_squared() const {
  double p = 0.0;
  for (const auto& a : amps_) p += std::norm(a);
  return p;
}

}  // namespace truncq
