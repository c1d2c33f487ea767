#pragma once

#include "truncq/core_model.hpp"
#include "truncq/statevector.hpp"

namespace truncq {

struct Gate {
  enum class Kind { kH, kX, kPhase, kCPhase, kCNot };
  Kind kind = Kind::kH;
  int q0 = -1;           // target (H/X/Phase) or control (CPhase/CNot)
  int q1 = -1;           // target for two-qubit gates
  double theta = 0.0;
};

struct Circuit {
  int num_qubits = 0;
  std::vector<Gate> gates;

  void h(int q) { gates.push_back({Gate::Kind::kH, q, -1, 0.0}); }
  void x(int q) { gates.push_back({Gate::Kind::kX, q, -1, 0.0}); }
  void phase(int q, double theta) { gates.push_back({Gate::Kind::kPhase, q, -1, theta}); }
  void cphase(int c, int t, double theta) { gates.push_back({Gate::Kind::kCPhase, c, t, theta}); }
  void cnot(int c, int t) { gates.push_back({Gate::Kind::kCNot, c, t, 0.0}); }
};

// Truncated QFT / IQFT on qubits [first, first+count); controlled phases with
// distance > N are dropped.
void append_qft(Circuit& c, int first, int count, int N);
void append_iqft(Circuit& c, int first, int count, int N);

// Additive rotations for the constant a on qubits [first, first+count), one
// phase gate per qubit with all kept terms (and the ell corrective terms)
// collected into it.  subtract negates every angle.
void append_additive_rotations(Circuit& c, int first, int count, const BitString& a, int N,
                               int ell, bool subtract, int control = -1);

// QFT -> rotations -> IQFT on cfg.L qubits.
Circuit build_truncated_adder(const BitString& a, const TruncationConfig& cfg,
                              bool subtract = false);

// Controlled modular addition of b modulo `modulus` on an L+1 qubit register
// (qubits 0..L) plus the MS qubit (qubit L+1); Toffoli bookkeeping is replaced
// by the direct controlled flow.
Circuit build_modular_adder(const BitString& b, const BitString& modulus,
                            const TruncationConfig& cfg);

// Applies the circuit (no noise).
void run_circuit(QuantumState& state, const Circuit& c);

}  // namespace truncq
