#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "truncq/circuits.hpp"
#include "truncq/rng.hpp"
#include "truncq/core_model.hpp"
#include "truncq/noise_model.hpp"
#include "truncq/run_stats.hpp"
#include "truncq/shor_model.hpp"
#include "truncq/simulator.hpp"

using namespace truncq;

TEST_CASE("norm preservation and cap") {
  QuantumState st(3);
  st.set_basis_state(5);
  st.apply_h(0);
  st.apply_cphase(0, 2, 0.7);
  st.apply_phase(1, -1.3);
  st.apply_cnot(0, 1);
  st.apply_x(2);
  CHECK(st.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(QuantumState(17), SimulatorCapError);
}

TEST_CASE("QFT followed by IQFT is the identity") {
  std::mt19937_64 gen(31337);
  for (int L = 1; L <= 8; ++L) {
    Circuit c;
    c.num_qubits = L;
    append_qft(c, 0, L, L);   // untruncated
    append_iqft(c, 0, L, L);
    for (int rep = 0; rep < 4; ++rep) {
      const std::uint64_t x = gen() & ((std::uint64_t{1} << L) - 1);
      QuantumState st(L);
      st.set_basis_state(x);
      run_circuit(st, c);
      CHECK(st.probability_of(x) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("untruncated Draper adder is exact on all pairs up to L=5") {
  for (int L = 1; L <= 5; ++L) {
    const TruncationConfig cfg{L, L, 0};  // N = L keeps every rotation
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << L); ++x) {
      for (std::uint64_t a = 0; a < (std::uint64_t{1} << L); ++a) {
        const double p = simulate_adder_instance(BitString(L, x), BitString(L, a), cfg);
        REQUIRE(p == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("worked example: truncated adder (L=4, N=2) on 3+3") {
  const double p = simulate_adder_instance(BitString(4, 3), BitString(4, 3), {4, 2, 0});
  CHECK(p == doctest::Approx((2.0 + std::sqrt(2.0)) / 4.0).epsilon(1e-10));
}

TEST_CASE("degenerate truncation keeps the adder exact") {
  const TruncationConfig cfg{6, 5, 0};
  std::mt19937_64 gen(7);
  for (int t = 0; t < 30; ++t) {
    const std::uint64_t x = gen() & 63, a = gen() & 63;
    CHECK(simulate_adder_instance(BitString(6, x), BitString(6, a), cfg) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("oracle equivalence on random truncated instances") {
  std::mt19937_64 gen(2025);
  for (int t = 0; t < 200; ++t) {
    const int L = 3 + static_cast<int>(gen() % 6);
    const int N = 1 + static_cast<int>(gen() % (L - 1));
    const std::uint64_t mask = (std::uint64_t{1} << L) - 1;
    const BitString x(L, gen() & mask), a(L, gen() & mask);
    const double model = exact_truncation_fidelity(x, a, {L, N, 0});
    const double sim = simulate_adder_instance(x, a, {L, N, 0});
    CHECK(model == doctest::Approx(sim).epsilon(1e-10));
  }
}

TEST_CASE("add then subtract cancels without entangling gates") {
  std::mt19937_64 gen(55);
  for (int t = 0; t < 50; ++t) {
    const int L = 3 + static_cast<int>(gen() % 5);
    const int N = 1 + static_cast<int>(gen() % (L - 1));
    const std::uint64_t mask = (std::uint64_t{1} << L) - 1;
    const std::uint64_t x = gen() & mask, a = gen() & mask;
    Circuit c;
    c.num_qubits = L;
    append_qft(c, 0, L, N);
    append_additive_rotations(c, 0, L, BitString(L, a), N, 0, false);
    append_additive_rotations(c, 0, L, BitString(L, a), N, 0, true);
    append_iqft(c, 0, L, N);
    QuantumState st(L);
    st.set_basis_state(x);
    run_circuit(st, c);
    CHECK(st.probability_of(x) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("corrections raise the worked-example fidelity") {
  const double plain = simulate_adder_instance(BitString(4, 3), BitString(4, 3), {4, 2, 0});
  const double corrected = simulate_adder_instance(BitString(4, 3), BitString(4, 3), {4, 2, 2});
  CHECK(corrected > plain);
}

TEST_CASE("corrected statevector matches the product-form evaluator") {
  std::mt19937_64 gen(919);
  for (int t = 0; t < 60; ++t) {
    const int L = 4 + static_cast<int>(gen() % 6);
    const int N = 1 + static_cast<int>(gen() % (L - 2));
    const int ell = static_cast<int>(gen() % 4);
    const std::uint64_t mask = (std::uint64_t{1} << L) - 1;
    SequenceSpec seq;
    seq.x = BitString(L, gen() & mask);
    seq.adds = {BitString(L, gen() & mask)};
    seq.subs = {BitString(L, gen() & mask)};
    const TruncationConfig cfg{L, N, ell};

    Circuit c;
    c.num_qubits = L;
    append_qft(c, 0, L, N);
    append_additive_rotations(c, 0, L, seq.adds[0], N, ell, false);
    append_additive_rotations(c, 0, L, seq.subs[0], N, ell, true);
    append_iqft(c, 0, L, N);
    QuantumState st(L);
    st.set_basis_state(seq.x.value());
    run_circuit(st, c);
    const BitString y = sub_mod(add_mod(seq.x, seq.adds[0]), seq.subs[0]);
    const double sim = st.probability_of(y.value());
    CHECK(product_form_fidelity(seq, cfg) == doctest::Approx(sim).epsilon(1e-9));
  }
}

TEST_CASE("modular adder is exact at full precision") {
  const TruncationConfig cfg{3, 4, 0};  // N > L: nothing truncated
  const Circuit c = build_modular_adder(BitString(3, 3), BitString(3, 7), cfg);
  QuantumState st(c.num_qubits);
  st.set_basis_state(5);
  run_circuit(st, c);
  CHECK(st.probability_of((5 + 3) % 7) == doctest::Approx(1.0).epsilon(1e-10));

  std::mt19937_64 gen(11);
  for (int t = 0; t < 40; ++t) {
    const int L = 3 + static_cast<int>(gen() % 2);
    const std::uint64_t m = (std::uint64_t{1} << (L - 1)) + 1 + 2 * (gen() % (std::uint64_t{1} << (L - 2)));
    const std::uint64_t mod = std::min<std::uint64_t>(m, (std::uint64_t{1} << L) - 1);
    const std::uint64_t x = gen() % mod, b = gen() % mod;
    const Circuit mc = build_modular_adder(BitString(L, b), BitString(L, mod), {L, L + 1, 0});
    QuantumState s2(mc.num_qubits);
    s2.set_basis_state(x);
    run_circuit(s2, mc);
    CHECK(s2.probability_of((x + b) % mod) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("MS qubit correct-state probability approaches p_N") {
  // Traced MS probability after one truncated addition converges toward p_N
  // from the L-side as the register grows.
  const double p4 = carry_fidelity(4);
  const double ms8 = simulate_ms_probability({8, 4, 0}, 5, 3000);
  const double ms11 = simulate_ms_probability({11, 4, 0}, 5, 3000);
  CHECK(std::fabs(ms11 - p4) < std::fabs(ms8 - p4) + 5e-3);
  CHECK(ms11 == doctest::Approx(p4).epsilon(0.02));
}

TEST_CASE("noisy runs: sigma 0 is deterministic") {
  const Circuit c = build_truncated_adder(BitString(4, 5), {4, 4, 0});
  const auto res = run_noisy(c, 2, (2 + 5) % 16, {0.0}, {100, 9, 1});
  CHECK(res.mean == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(res.std_error == 0.0);
}

TEST_CASE("noisy adder matches the closed form within 3 SE") {
  // The closed form is the double average over rotation noise and operands.
  const int L = 6;
  const double sigma = 0.06;
  const auto res = noisy_adder_average(L, {sigma}, {6000, 31, 0});
  const double predicted = adder_mean_fidelity(L, sigma);
  CHECK(std::fabs(res.mean - predicted) < 3.0 * res.std_error);
}

TEST_CASE("noisy modular adder tracks the printed j=3, c=3.5 form") {
  // The printed form carries the paper's (k-2) index convention, which sits a
  // systematic ~1% away from the circuit at this size; track it at that level.
  const int L = 5;
  const double sigma = 0.05;
  const auto res = noisy_modular_adder_average(L, {sigma}, {4000, 17, 0});
  const double predicted = modular_adder_mean_fidelity(L, sigma);
  CHECK(std::fabs(res.mean - predicted) < 0.015);
  CHECK(res.mean < predicted);  // the (k-2) convention makes the formula optimistic
}

TEST_CASE("monte carlo determinism across thread counts") {
  const TruncationConfig cfg{256, 5, 0};
  const auto serial = mc_adder_average(cfg, {5000, 123, 1});
  const auto parallel = mc_adder_average(cfg, {5000, 123, 8});
  CHECK(serial.mean == parallel.mean);  // bit-identical
  CHECK(serial.std_error == parallel.std_error);

  const auto seq_serial = mc_sequence_average(cfg, 2, {600, 77, 1});
  const auto seq_parallel = mc_sequence_average(cfg, 2, {600, 77, 7});
  CHECK(seq_serial.mean == seq_parallel.mean);
}

TEST_CASE("word-packed adder Monte Carlo equals the BitString path") {
  // Same estimator computed two ways on a matched sample set.
  const TruncationConfig cfg{70, 4, 0};
  const auto fast = mc_adder_average(cfg, {2000, 4321, 1});
  // Recompute with explicit BitStrings from the identical RNG stream.
  double sum = 0.0;
  for (std::uint64_t trial = 0; trial < 2000; ++trial) {
    BitString x(70, 0), a(70, 0);
    for (int base = 0; base < 70; base += 64) {
      const std::uint64_t xw = rng::draw(4321, 2 * trial, base / 64);
      const std::uint64_t aw = rng::draw(4321, 2 * trial + 1, base / 64);
      for (int i = base; i < 70 && i < base + 64; ++i) {
        x.set_bit(i, static_cast<int>((xw >> (i - base)) & 1));
        a.set_bit(i, static_cast<int>((aw >> (i - base)) & 1));
      }
    }
    sum += exact_truncation_fidelity(x, a, cfg);
  }
  CHECK(fast.mean == doctest::Approx(sum / 2000.0).epsilon(1e-12));
}

TEST_CASE("monte carlo sequence average sits near the asymptotic law at moderate L") {
  const TruncationConfig cfg{512, 5, 0};
  const auto res = mc_sequence_average(cfg, 1, {20000, 99, 0});
  const double asym = std::pow(carry_fidelity(5), (512 - 5 - 1) / 3.0);
  // Generous band: the asymptote is only an approximation of the true mean.
  CHECK(std::fabs(res.mean - asym) / asym < 0.05);
}

TEST_CASE("sequential modular adders decay toward the mixing floor") {
  const TruncationConfig cfg{5, 3, 0};
  const auto one = simulate_sequential_modular_adders(cfg, 1, {60, 3, 0});
  const auto many = simulate_sequential_modular_adders(cfg, 10, {60, 3, 0});
  CHECK(many.mean < one.mean);
  CHECK(many.mean > 0.25);
}
