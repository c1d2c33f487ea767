#pragma once

namespace truncq {

// Gaussian Z-rotation control error: every phase rotation picks up an
// independent epsilon ~ N(0, sigma^2).
struct NoiseSpec {
  double sigma = 0.0;  // radians
};

// Mean correct-outcome probability of a full Draper adder:
// (1/2^L) prod_{k=1}^{L} (1 + e^{-k sigma^2 / 2}).
double adder_mean_fidelity(int L, double sigma);

// Fourier arithmetic block with j QFT/IQFT combinations and c adders,
// evaluated over `factors` register qubits:
// (1/2^factors) prod_{k=1}^{factors} (1 + e^{-(j(k-2)+c) sigma^2 / 2}).
// The k=1 exponent argument can be negative; it is evaluated as printed.
double component_fidelity(double j, double c, int factors, double sigma);

// j=3, c=3.5 on an L+1 qubit ancilla register.
double modular_adder_mean_fidelity(int L, double sigma);

// j=2L^2+L/2, c=3.5L^2 on L qubits: the complete modular exponentiation.
double modexp_mean_fidelity(int L, double sigma);

enum class NoiseComponent { kAdder, kModularAdder, kModExp };

// Monotone bisection for the sigma achieving the target mean fidelity.
// Throws if the target is outside (0,1) or unattainable.
double required_sigma(double target_fidelity, NoiseComponent component, int L);

// Stochastic Z-flip rate q = (1 - e^{-sigma^2/2}) / 2 and its inverse.
double z_flip_probability(double sigma);
double flip_to_sigma(double q);  // throws for q outside [0, 1/2)

}  // namespace truncq
