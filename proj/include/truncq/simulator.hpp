#pragma once

#include <cstdint>
#include <optional>

#include "truncq/circuits.hpp"
#include "truncq/noise_model.hpp"

namespace truncq {

struct MeanWithError {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

struct MonteCarloPlan {
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: decide from TRUNCQ_THREADS / hardware
};

// Runs `circuit` `trials` times with every Phase/CPhase angle perturbed by an
// independent N(0, sigma^2) draw keyed on (seed, trial, gate index); returns
// the mean probability of `correct_outcome` and its standard error.
MeanWithError run_noisy(const Circuit& circuit, std::uint64_t initial_state,
                        std::uint64_t correct_outcome, const NoiseSpec& noise,
                        const MonteCarloPlan& plan);

// Noisy full-precision adder averaged over uniform operands as well as the
// rotation noise; this is what the closed-form mean fidelity describes.
MeanWithError noisy_adder_average(int L, const NoiseSpec& noise, const MonteCarloPlan& plan);

// Noisy truncation-free modular adder averaged over random (modulus, x, b).
MeanWithError noisy_modular_adder_average(int L, const NoiseSpec& noise,
                                          const MonteCarloPlan& plan);

// Average of exact_truncation_fidelity over uniform (x, a) pairs.  Uses a
// word-packed carry counter, so L in the thousands is fine.
MeanWithError mc_adder_average(const TruncationConfig& cfg, const MonteCarloPlan& plan);

// Average of sequence_instance_fidelity over uniform operands for n
// add/subtract pairs (window-8 effective-sum model).
MeanWithError mc_sequence_average(const TruncationConfig& cfg, int n, const MonteCarloPlan& plan,
                                  int window = 8);

// Average of product_form_fidelity over uniform operands; handles corrections
// (cfg.ell) exactly at any L.
MeanWithError mc_corrected_average(const TruncationConfig& cfg, int n,
                                   const MonteCarloPlan& plan);

// Statevector average of a single truncated modular adder over random
// (modulus, x, b); probability that the register holds (x+b) mod modulus.
MeanWithError simulate_modular_adder_average(const TruncationConfig& cfg,
                                             const MonteCarloPlan& plan);

// Statevector simulation of `count` sequential modular adders with a fixed
// random modulus per trial and fresh random addends; returns the probability
// that the register tracks the classical result.
MeanWithError simulate_sequential_modular_adders(const TruncationConfig& cfg, int count,
                                                 const MonteCarloPlan& plan);

// Statevector average fidelity of n add/subtract pairs (random operands),
// optionally corrected (cfg.ell) and/or noisy.
MeanWithError simulate_sequence_average(const TruncationConfig& cfg, int n,
                                        const MonteCarloPlan& plan,
                                        const NoiseSpec& noise = {});

// Single deterministic instance probability P(|x + a - ...|) via statevector.
double simulate_adder_instance(const BitString& x, const BitString& a,
                               const TruncationConfig& cfg, bool subtract = false);

// Traced MS-qubit correct-state probability after one truncated adder inside
// the modular-adder layout (for the convergence-to-p_N check).
double simulate_ms_probability(const TruncationConfig& cfg, std::uint64_t seed,
                               std::uint64_t trials);

int resolve_threads(int requested);

}  // namespace truncq
