#include "truncq/circuits.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace truncq {

namespace {
constexpr double kPi = std::numbers::pi;
}

void append_qft(Circuit& c, int first, int count, int N) {
  // Highest qubit first; controls are still in the computational basis when
  // their controlled phases fire.  Qubit j ends as |0> + e^{2 pi i x / 2^{j+1}} |1>
  // with contributions beyond distance N dropped.
  for (int j = count - 1; j >= 0; --j) {
    c.h(first + j);
    for (int d = 1; d <= j && d <= N; ++d) {
      c.cphase(first + j - d, first + j, kPi / std::ldexp(1.0, d));
    }
  }
}

void append_iqft(Circuit& c, int first, int count, int N) {
  for (int j = 0; j < count; ++j) {
    for (int d = std::min(j, N); d >= 1; --d) {
      c.cphase(first + j - d, first + j, -kPi / std::ldexp(1.0, d));
    }
    c.h(first + j);
  }
}

void append_additive_rotations(Circuit& c, int first, int count, const BitString& a, int N,
                               int ell, bool subtract, int control) {
  if (a.length() < count) throw std::invalid_argument("additive rotations: operand too short");
  const double sign = subtract ? -1.0 : 1.0;
  for (int j = 0; j < count; ++j) {
    double theta = 0.0;
    for (int d = 0; d <= j && d <= N; ++d) {
      if (a.bit(j - d)) theta += kPi / std::ldexp(1.0, d);
    }
    // Corrective terms: the operand rotations are kept ell levels finer than
    // the QFT window, restoring the known part of each dropped angle.
    for (int d = N + 1; d <= j && d <= N + ell; ++d) {
      if (a.bit(j - d)) theta += kPi / std::ldexp(1.0, d);
    }
    // One rotation per qubit even at zero angle: the noise model attaches an
    // independent error to every logical gate.
    if (control >= 0) {
      c.cphase(control, first + j, sign * theta);
    } else {
      c.phase(first + j, sign * theta);
    }
  }
}

Circuit build_truncated_adder(const BitString& a, const TruncationConfig& cfg, bool subtract) {
  cfg.validate();
  if (a.length() != cfg.L) throw std::invalid_argument("build_truncated_adder: length mismatch");
  Circuit c;
  c.num_qubits = cfg.L;
  append_qft(c, 0, cfg.L, cfg.N);
  append_additive_rotations(c, 0, cfg.L, a, cfg.N, cfg.ell, subtract);
  append_iqft(c, 0, cfg.L, cfg.N);
  return c;
}

Circuit build_modular_adder(const BitString& b, const BitString& modulus,
                            const TruncationConfig& cfg) {
  cfg.validate();
  const int L = cfg.L;
  if (b.length() != L || modulus.length() != L) {
    throw std::invalid_argument("build_modular_adder: operands must be L bits");
  }
  // Register occupies qubits 0..L (L+1 bits for the overflow), MS is qubit L+1.
  const int reg = L + 1;
  const int ms = L + 1;
  const int msb = L;

  auto widen = [&](const BitString& v) {
    BitString w(reg, 0);
    for (int i = 0; i < L; ++i) w.set_bit(i, v.bit(i));
    return w;
  };
  const BitString wb = widen(b);
  const BitString wm = widen(modulus);
  const BitString m_minus_b = sub_mod(wm, wb);

  Circuit c;
  c.num_qubits = reg + 1;

  // x - (m - b): negative means x + b < m and the spare MSB reads 1.
  append_qft(c, 0, reg, cfg.N);
  append_additive_rotations(c, 0, reg, m_minus_b, cfg.N, cfg.ell, /*subtract=*/true);
  append_iqft(c, 0, reg, cfg.N);
  c.cnot(msb, ms);
  // MS-controlled restore of the modulus.
  append_qft(c, 0, reg, cfg.N);
  append_additive_rotations(c, 0, reg, wm, cfg.N, cfg.ell, /*subtract=*/false, ms);
  // Subtract b to expose whether the first branch underflowed, clear MS, re-add.
  append_additive_rotations(c, 0, reg, wb, cfg.N, cfg.ell, /*subtract=*/true);
  append_iqft(c, 0, reg, cfg.N);
  c.x(msb);
  c.cnot(msb, ms);
  c.x(msb);
  append_qft(c, 0, reg, cfg.N);
  append_additive_rotations(c, 0, reg, wb, cfg.N, cfg.ell, /*subtract=*/false);
  append_iqft(c, 0, reg, cfg.N);
  return c;
}

void run_circuit(QuantumState& state, const Circuit& c) {
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case Gate::Kind::kH: state.apply_h(g.q0); break;
      case Gate::Kind::kX: state.apply_x(g.q0); break;
      case Gate::Kind::kPhase: state.apply_phase(g.q0, g.theta); break;
      case Gate::Kind::kCPhase: state.apply_cphase(g.q0, g.q1, g.theta); break;
      case Gate::Kind::kCNot: state.apply_cnot(g.q0, g.q1); break;
    }
  }
}

}  // namespace truncq
