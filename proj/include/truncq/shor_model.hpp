#pragma once

namespace truncq {

// Register-probability factor induced by one entangling CNOT on a branch of
// weight p: p^2 + (1-p)^2.
double cnot_mix(double pr_ms_correct);

struct CnotFactors {
  double cs = 1.0;  // same-number add/subtract pairs
  double cd = 1.0;  // different-number pairs: (2 Cs + 1) / 3
};
CnotFactors cnot_factors(int N);

// Single modular adder: (Cs/2) (T_A(L) + T_AS(L) Cd) with the exact
// average-case predictors.
double modular_adder_fidelity(int L, int N);

struct SequentialFidelities {
  double fs = 1.0;   // 1/2 + 1/2 Cs^{n/2}
  double fd = 1.0;   // 1/2 + 1/2 Cd^{n/2}
  double fds = 1.0;  // 1/2 + 1/2 (Cs Cd)^{n/2}
};
SequentialFidelities sequential_fidelities(double n, int N);

// [1/2 + 1/2 (Cs Cd)^{L^2/4}] p_N^{L(L^2+2)/24}.
double shor_fidelity(int L, int N);

// shor_fidelity with the truncation decay moved to level N+ell plus the
// correction overhead p_N^{((L-N-1)/3)(ell/6)}.
double corrected_shor_success(int L, int N, int ell);

// Logical gate-count polynomial for the truncated circuit, the QFT census
// 16L^2+4L+1, and the per-circuit saving (L-N-1)(L-N)/2 per QFT.
double gate_count(int L, int N);
long long qft_count(int L);
double qft_gate_saving(int L, int N);

}  // namespace truncq
