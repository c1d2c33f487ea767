#include "truncq/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

#include "truncq/rng.hpp"

namespace truncq {

namespace {

// Deterministic trial-chunked accumulation: chunk boundaries depend only on
// trial indices, chunks are reduced in index order, so the result is
// bit-identical for any thread count.
struct ChunkedAccumulator {
  std::vector<double> sums;
  std::vector<double> sq_sums;
};

template <typename PerTrial>
MeanWithError run_chunked(std::uint64_t trials, int threads, PerTrial&& per_trial) {
  if (trials < 1) throw std::invalid_argument("monte carlo: trials must be >= 1");
  const std::uint64_t chunk = 1024;
  const std::uint64_t num_chunks = (trials + chunk - 1) / chunk;
  std::vector<double> sums(num_chunks, 0.0);
  std::vector<double> sq_sums(num_chunks, 0.0);

  auto run_range = [&](std::uint64_t chunk_begin, std::uint64_t chunk_end) {
    for (std::uint64_t ci = chunk_begin; ci < chunk_end; ++ci) {
      double s = 0.0, s2 = 0.0, comp = 0.0;
      const std::uint64_t t0 = ci * chunk;
      const std::uint64_t t1 = std::min(trials, t0 + chunk);
      for (std::uint64_t t = t0; t < t1; ++t) {
        const double v = per_trial(t);
        const double y = v - comp;
        const double ns = s + y;
        comp = (ns - s) - y;
        s = ns;
        s2 += v * v;
      }
      sums[ci] = s;
      sq_sums[ci] = s2;
    }
  };

  const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(num_chunks)));
  if (nthreads == 1) {
    run_range(0, num_chunks);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t per = (num_chunks + nthreads - 1) / nthreads;
    for (int i = 0; i < nthreads; ++i) {
      const std::uint64_t b = static_cast<std::uint64_t>(i) * per;
      const std::uint64_t e = std::min<std::uint64_t>(num_chunks, b + per);
      if (b >= e) break;
      pool.emplace_back(run_range, b, e);
    }
    for (auto& th : pool) th.join();
  }

  double total = 0.0, comp = 0.0, total_sq = 0.0;
  for (std::uint64_t ci = 0; ci < num_chunks; ++ci) {
    const double y = sums[ci] - comp;
    const double ns = total + y;
    comp = (ns - total) - y;
    total = ns;
    total_sq += sq_sums[ci];
  }
  MeanWithError out;
  out.samples = trials;
  out.mean = total / static_cast<double>(trials);
  if (trials > 1) {
    const double var =
        std::max(0.0, (total_sq - total * out.mean) / static_cast<double>(trials - 1));
    out.std_error = std::sqrt(var / static_cast<double>(trials));
  }
  return out;
}

// Uniform random L-bit string from the counter stream.
BitString random_bits(int L, std::uint64_t seed, std::uint64_t stream, std::uint64_t& counter) {
  BitString out(L, 0);
  for (int base = 0; base < L; base += 64) {
    const std::uint64_t w = rng::draw(seed, stream, counter++);
    for (int i = base; i < L && i < base + 64; ++i) {
      out.set_bit(i, static_cast<int>((w >> (i - base)) & 1));
    }
  }
  return out;
}

std::uint64_t random_below(std::uint64_t bound, std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t& counter) {
  // Rejection-free multiply-shift; bias is negligible for the bounds used here.
  const std::uint64_t w = rng::draw(seed, stream, counter++);
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(w) * bound) >> 64);
}

struct ModulusDraw {
  std::uint64_t modulus;
  BitString modulus_bits;
};

ModulusDraw draw_modulus(const TruncationConfig& cfg, std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t& counter) {
  const int L = cfg.L;
  // Odd L-bit modulus with the top bit set, as in a factoring register.
  const std::uint64_t lo = std::uint64_t{1} << (L - 1);
  std::uint64_t m = lo + 1 + 2 * random_below(lo / 2, seed, stream, counter);
  if (m >= (std::uint64_t{1} << L)) m = (std::uint64_t{1} << L) - 1;
  return {m, BitString(L, m)};
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TRUNCQ_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

MeanWithError run_noisy(const Circuit& circuit, std::uint64_t initial_state,
                        std::uint64_t correct_outcome, const NoiseSpec& noise,
                        const MonteCarloPlan& plan) {
  if (noise.sigma < 0.0) throw std::invalid_argument("run_noisy: sigma must be >= 0");
  if (noise.sigma == 0.0) {
    QuantumState st(circuit.num_qubits);
    st.set_basis_state(initial_state);
    run_circuit(st, circuit);
    MeanWithError out;
    out.mean = st.probability_of(correct_outcome);
    out.std_error = 0.0;
    out.samples = plan.trials;
    return out;
  }
  const int threads = resolve_threads(plan.threads);
  return run_chunked(plan.trials, threads, [&](std::uint64_t trial) {
    QuantumState st(circuit.num_qubits);
    st.set_basis_state(initial_state);
    std::uint64_t gate_index = 0;
    for (const auto& g : circuit.gates) {
      switch (g.kind) {
        case Gate::Kind::kH: st.apply_h(g.q0); break;
        case Gate::Kind::kX: st.apply_x(g.q0); break;
        case Gate::Kind::kCNot: st.apply_cnot(g.q0, g.q1); break;
        case Gate::Kind::kPhase: {
          const double eps = noise.sigma * rng::gaussian(plan.seed, trial, gate_index);
          st.apply_phase(g.q0, g.theta + eps);
          break;
        }
        case Gate::Kind::kCPhase: {
          const double eps = noise.sigma * rng::gaussian(plan.seed, trial, gate_index);
          st.apply_cphase(g.q0, g.q1, g.theta + eps);
          break;
        }
      }
      ++gate_index;
    }
    return st.probability_of(correct_outcome);
  });
}

namespace {

double run_gates_with_noise(QuantumState& st, const Circuit& circ, double sigma,
                            std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t gate_index = 0;
  for (const auto& g : circ.gates) {
    switch (g.kind) {
      case Gate::Kind::kH: st.apply_h(g.q0); break;
      case Gate::Kind::kX: st.apply_x(g.q0); break;
      case Gate::Kind::kCNot: st.apply_cnot(g.q0, g.q1); break;
      case Gate::Kind::kPhase:
        st.apply_phase(g.q0, g.theta + sigma * rng::gaussian(seed, trial, gate_index));
        break;
      case Gate::Kind::kCPhase:
        st.apply_cphase(g.q0, g.q1, g.theta + sigma * rng::gaussian(seed, trial, gate_index));
        break;
    }
    ++gate_index;
  }
  return st.norm_squared();
}

}  // namespace

MeanWithError noisy_adder_average(int L, const NoiseSpec& noise, const MonteCarloPlan& plan) {
  if (L > QuantumState::kDefaultQubitCap) {
    throw SimulatorCapError(L, QuantumState::kDefaultQubitCap);
  }
  const int threads = resolve_threads(plan.threads);
  const TruncationConfig cfg{L, L, 0};  // no truncation
  return run_chunked(plan.trials, threads, [&, L](std::uint64_t trial) {
    std::uint64_t counter = 0;
    const std::uint64_t mask = (std::uint64_t{1} << L) - 1;
    const std::uint64_t x = rng::draw(plan.seed, 2 * trial + 1, counter) & mask;
    const std::uint64_t a = rng::draw(plan.seed, 2 * trial + 2, counter) & mask;
    const Circuit circ = build_truncated_adder(BitString(L, a), cfg);
    QuantumState st(L);
    st.set_basis_state(x);
    run_gates_with_noise(st, circ, noise.sigma, plan.seed, trial);
    return st.probability_of((x + a) & mask);
  });
}

MeanWithError noisy_modular_adder_average(int L, const NoiseSpec& noise,
                                          const MonteCarloPlan& plan) {
  if (L + 2 > QuantumState::kDefaultQubitCap) {
    throw SimulatorCapError(L + 2, QuantumState::kDefaultQubitCap);
  }
  const int threads = resolve_threads(plan.threads);
  const TruncationConfig cfg{L, L + 2, 0};  // no truncation on the L+1 register
  return run_chunked(plan.trials, threads, [&, L](std::uint64_t trial) {
    std::uint64_t counter = 0;
    const ModulusDraw md = draw_modulus(cfg, plan.seed, trial, counter);
    const std::uint64_t x = random_below(md.modulus, plan.seed, trial, counter);
    const std::uint64_t b = random_below(md.modulus, plan.seed, trial, counter);
    const Circuit circ = build_modular_adder(BitString(L, b), md.modulus_bits, cfg);
    QuantumState st(circ.num_qubits);
    st.set_basis_state(x);
    run_gates_with_noise(st, circ, noise.sigma, plan.seed, trial);
    const std::uint64_t reg_mask = (std::uint64_t{1} << (L + 1)) - 1;
    return st.probability_masked(reg_mask, (x + b) % md.modulus);
  });
}

MeanWithError mc_adder_average(const TruncationConfig& cfg, const MonteCarloPlan& plan) {
  cfg.validate();
  const int L = cfg.L;
  const int window = cfg.L - cfg.N - 1;  // carry-in positions 1 .. L-N-1
  const double p = carry_fidelity(cfg.N);
  const double logp = std::log(p);
  const int words = (L + 63) / 64;
  const int threads = resolve_threads(plan.threads);

  return run_chunked(plan.trials, threads, [&, words, window, logp](std::uint64_t trial) {
    // Word-packed x, a; carry-in bits are x ^ a ^ (x + a).
    std::uint64_t counter = 0;
    int effective = 0;
    std::uint64_t carry = 0;
    for (int w = 0; w < words; ++w) {
      std::uint64_t xw = rng::draw(plan.seed, 2 * trial, counter);
      std::uint64_t aw = rng::draw(plan.seed, 2 * trial + 1, counter);
      ++counter;
      if (w == words - 1 && (L % 64) != 0) {
        const std::uint64_t mask = (~std::uint64_t{0}) >> (64 - (L % 64));
        xw &= mask;
        aw &= mask;
      }
      const std::uint64_t sum = xw + aw + carry;
      const std::uint64_t carry_in = xw ^ aw ^ sum;  // bit i: carry entering column i
      // New carry out of this word.
      carry = ((xw & aw) | ((xw | aw) & ~sum)) >> 63;
      // Count carry-in bits at global positions 1 .. window.
      std::uint64_t m = carry_in;
      const int lo = w * 64;
      if (lo == 0) m &= ~std::uint64_t{1};
      if (lo + 63 > window) {
        if (window < lo) {
          m = 0;
        } else {
          m &= (~std::uint64_t{0}) >> (63 - (window - lo));
        }
      }
      effective += __builtin_popcountll(m);
    }
    return std::exp(logp * effective);
  });
}

MeanWithError mc_sequence_average(const TruncationConfig& cfg, int n, const MonteCarloPlan& plan,
                                  int window) {
  cfg.validate();
  if (n < 0) throw std::invalid_argument("mc_sequence_average: n must be >= 0");
  const int threads = resolve_threads(plan.threads);
  return run_chunked(plan.trials, threads, [&, n, window](std::uint64_t trial) {
    std::uint64_t counter = 0;
    SequenceSpec seq;
    seq.x = random_bits(cfg.L, plan.seed, trial, counter);
    seq.adds.reserve(n);
    seq.subs.reserve(n);
    for (int i = 0; i < n; ++i) {
      seq.adds.push_back(random_bits(cfg.L, plan.seed, trial, counter));
      seq.subs.push_back(random_bits(cfg.L, plan.seed, trial, counter));
    }
    return sequence_instance_fidelity(seq, cfg, window);
  });
}

MeanWithError mc_corrected_average(const TruncationConfig& cfg, int n,
                                   const MonteCarloPlan& plan) {
  cfg.validate();
  if (n < 0) throw std::invalid_argument("mc_corrected_average: n must be >= 0");
  const int threads = resolve_threads(plan.threads);
  return run_chunked(plan.trials, threads, [&, n](std::uint64_t trial) {
    std::uint64_t counter = 0;
    SequenceSpec seq;
    seq.x = random_bits(cfg.L, plan.seed, trial, counter);
    for (int i = 0; i < n; ++i) {
      seq.adds.push_back(random_bits(cfg.L, plan.seed, trial, counter));
      seq.subs.push_back(random_bits(cfg.L, plan.seed, trial, counter));
    }
    return product_form_fidelity(seq, cfg);
  });
}

MeanWithError simulate_modular_adder_average(const TruncationConfig& cfg,
                                             const MonteCarloPlan& plan) {
  cfg.validate();
  if (cfg.L + 2 > QuantumState::kDefaultQubitCap) {
    throw SimulatorCapError(cfg.L + 2, QuantumState::kDefaultQubitCap);
  }
  const int threads = resolve_threads(plan.threads);
  return run_chunked(plan.trials, threads, [&](std::uint64_t trial) {
    std::uint64_t counter = 0;
    const ModulusDraw md = draw_modulus(cfg, plan.seed, trial, counter);
    const std::uint64_t x = random_below(md.modulus, plan.seed, trial, counter);
    const std::uint64_t b = random_below(md.modulus, plan.seed, trial, counter);
    const Circuit circ = build_modular_adder(BitString(cfg.L, b), md.modulus_bits, cfg);
    QuantumState st(circ.num_qubits);
    st.set_basis_state(x);
    run_circuit(st, circ);
    const std::uint64_t correct = (x + b) % md.modulus;
    const std::uint64_t reg_mask = (std::uint64_t{1} << (cfg.L + 1)) - 1;
    return st.probability_masked(reg_mask, correct);
  });
}

MeanWithError simulate_sequential_modular_adders(const TruncationConfig& cfg, int count,
                                                 const MonteCarloPlan& plan) {
  cfg.validate();
  if (count < 1) throw std::invalid_argument("sequential modular adders: count must be >= 1");
  if (cfg.L + 2 > QuantumState::kDefaultQubitCap) {
    throw SimulatorCapError(cfg.L + 2, QuantumState::kDefaultQubitCap);
  }
  const int threads = resolve_threads(plan.threads);
  return run_chunked(plan.trials, threads, [&, count](std::uint64_t trial) {
    std::uint64_t counter = 0;
    const ModulusDraw md = draw_modulus(cfg, plan.seed, trial, counter);
    std::uint64_t tracked = random_below(md.modulus, plan.seed, trial, counter);
    QuantumState st(cfg.L + 2);
    st.set_basis_state(tracked);
    for (int i = 0; i < count; ++i) {
      const std::uint64_t b = random_below(md.modulus, plan.seed, trial, counter);
      const Circuit circ = build_modular_adder(BitString(cfg.L, b), md.modulus_bits, cfg);
      run_circuit(st, circ);
      tracked = (tracked + b) % md.modulus;
    }
    const std::uint64_t reg_mask = (std::uint64_t{1} << (cfg.L + 1)) - 1;
    return st.probability_masked(reg_mask, tracked);
  });
}

MeanWithError simulate_sequence_average(const TruncationConfig& cfg, int n,
                                        const MonteCarloPlan& plan, const NoiseSpec& noise) {
  cfg.validate();
  if (cfg.L > QuantumState::kDefaultQubitCap) {
    throw SimulatorCapError(cfg.L, QuantumState::kDefaultQubitCap);
  }
  const int threads = resolve_threads(plan.threads);
  return run_chunked(plan.trials, threads, [&, n](std::uint64_t trial) {
    std::uint64_t counter = 0;
    SequenceSpec seq;
    seq.x = random_bits(cfg.L, plan.seed, 3 * trial, counter);
    Circuit circ;
    circ.num_qubits = cfg.L;
    append_qft(circ, 0, cfg.L, cfg.N);
    for (int i = 0; i < n; ++i) {
      const BitString a = random_bits(cfg.L, plan.seed, 3 * trial + 1, counter);
      const BitString b = random_bits(cfg.L, plan.seed, 3 * trial + 1, counter);
      seq.adds.push_back(a);
      seq.subs.push_back(b);
      append_additive_rotations(circ, 0, cfg.L, a, cfg.N, cfg.ell, false);
      append_additive_rotations(circ, 0, cfg.L, b, cfg.N, cfg.ell, true);
    }
    append_iqft(circ, 0, cfg.L, cfg.N);

    BitString y = seq.x;
    for (const auto& a : seq.adds) y = add_mod(y, a);
    for (const auto& b : seq.subs) y = sub_mod(y, b);

    QuantumState st(cfg.L);
    st.set_basis_state(seq.x.value());
    if (noise.sigma == 0.0) {
      run_circuit(st, circ);
    } else {
      std::uint64_t gate_index = 0;
      for (const auto& g : circ.gates) {
        switch (g.kind) {
          case Gate::Kind::kH: st.apply_h(g.q0); break;
          case Gate::Kind::kX: st.apply_x(g.q0); break;
          case Gate::Kind::kCNot: st.apply_cnot(g.q0, g.q1); break;
          case Gate::Kind::kPhase:
            st.apply_phase(g.q0, g.theta + noise.sigma * rng::gaussian(plan.seed, trial, gate_index));
            break;
          case Gate::Kind::kCPhase:
            st.apply_cphase(g.q0, g.q1,
                            g.theta + noise.sigma * rng::gaussian(plan.seed, trial, gate_index));
            break;
        }
        ++gate_index;
      }
    }
    return st.probability_of(y.value());
  });
}

double simulate_adder_instance(const BitString& x, const BitString& a,
                               const TruncationConfig& cfg, bool subtract) {
  cfg.validate();
  const Circuit circ = build_truncated_adder(a, cfg, subtract);
  QuantumState st(cfg.L);
  st.set_basis_state(x.value());
  run_circuit(st, circ);
  const BitString y = subtract ? sub_mod(x, a) : add_mod(x, a);
  return st.probability_of(y.value());
}

double simulate_ms_probability(const TruncationConfig& cfg, std::uint64_t seed,
                               std::uint64_t trials) {
  cfg.validate();
  if (cfg.L + 1 > QuantumState::kDefaultQubitCap) {
    throw SimulatorCapError(cfg.L + 1, QuantumState::kDefaultQubitCap);
  }
  // One truncated addition, then a CNOT from the register MSB onto a fresh MS
  // qubit; returns the mean probability that MS reads the correct MSB value.
  auto res = run_chunked(trials, resolve_threads(0), [&](std::uint64_t trial) {
    std::uint64_t counter = 0;
    const BitString x = random_bits(cfg.L, seed, 2 * trial, counter);
    const BitString a = random_bits(cfg.L, seed, 2 * trial + 1, counter);
    Circuit circ;
    circ.num_qubits = cfg.L + 1;
    append_qft(circ, 0, cfg.L, cfg.N);
    append_additive_rotations(circ, 0, cfg.L, a, cfg.N, cfg.ell, false);
    append_iqft(circ, 0, cfg.L, cfg.N);
    circ.cnot(cfg.L - 1, cfg.L);
    QuantumState st(cfg.L + 1);
    st.set_basis_state(x.value());
    run_circuit(st, circ);
    const BitString y = add_mod(x, a);
    const std::uint64_t ms_mask = std::uint64_t{1} << cfg.L;
    const std::uint64_t want = y.bit(cfg.L - 1) ? ms_mask : 0;
    return st.probability_masked(ms_mask, want);
  });
  return res.mean;
}

}  // namespace truncq
