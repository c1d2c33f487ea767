#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "truncq/core_model.hpp"
#include "truncq/run_stats.hpp"
#include "truncq/shor_model.hpp"

using namespace truncq;

TEST_CASE("cnot mix") {
  CHECK(cnot_mix(1.0) == doctest::Approx(1.0));
  CHECK(cnot_mix(0.5) == doctest::Approx(0.5));
  CHECK(cnot_mix(carry_fidelity(4)) == doctest::Approx(0.98097).epsilon(5e-5));
  CHECK_THROWS_AS(cnot_mix(1.2), std::invalid_argument);
}

TEST_CASE("cnot factors") {
  const auto f4 = cnot_factors(4);
  CHECK(f4.cs == doctest::Approx(0.98097).epsilon(5e-5));
  CHECK(f4.cd == doctest::Approx((2.0 * f4.cs + 1.0) / 3.0).epsilon(1e-12));

  const double p3 = carry_fidelity(3);
  CHECK(cnot_factors(3).cs == doctest::Approx(p3 * p3 + (1 - p3) * (1 - p3)).epsilon(1e-12));

  // N large: both factors approach 1.
  const auto f20 = cnot_factors(20);
  CHECK(f20.cs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f20.cd == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("modular adder fidelity") {
  // Vacuous truncation leaves only the CNOT factors.
  const auto f = cnot_factors(8);
  CHECK(modular_adder_fidelity(8, 8) == doctest::Approx((f.cs / 2.0) * (1.0 + f.cd)).epsilon(1e-12));

  // Large L: the modular adder outperforms the bare adder average.
  for (int L : {256, 1024}) {
    CHECK(modular_adder_fidelity(L, 5) > adder_fidelity_avg({L, 5, 0}));
  }
}

TEST_CASE("sequential fidelities") {
  const auto f0 = sequential_fidelities(0.0, 4);
  CHECK(f0.fs == doctest::Approx(1.0));
  CHECK(f0.fd == doctest::Approx(1.0));
  CHECK(f0.fds == doctest::Approx(1.0));

  const auto finf = sequential_fidelities(1e9, 4);
  CHECK(finf.fs == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(finf.fds == doctest::Approx(0.5).epsilon(1e-9));

  // fds composes Cs and Cd.
  const auto f = sequential_fidelities(10.0, 3);
  const auto c = cnot_factors(3);
  CHECK(f.fds == doctest::Approx(0.5 + 0.5 * std::pow(c.cs * c.cd, 5.0)).epsilon(1e-12));
}

TEST_CASE("shor fidelity internal consistency") {
  // Matches the F_ds-composed prediction with n = L^2/2 modular adders.
  for (int L : {5, 6, 7, 32}) {
    for (int N : {3, 4}) {
      const double composed = sequential_fidelities(L * static_cast<double>(L) / 2.0, N).fds *
                              std::pow(carry_fidelity(N), L * (static_cast<double>(L) * L + 2.0) / 24.0);
      CHECK(shor_fidelity(L, N) == doctest::Approx(composed).epsilon(1e-12));
    }
  }
  // N large: approaches 1.
  CHECK(shor_fidelity(16, 20) == doctest::Approx(1.0).epsilon(1e-8));
  // Large-L regime: N=17 keeps ~0.95 and the 0.5 crossing sits in the
  // N = 14..16 boundary region the retry discussion points at.
  CHECK(shor_fidelity(2048, 17) == doctest::Approx(0.95).epsilon(0.01));
  CHECK(shor_fidelity(2048, 13) < 0.5);
  CHECK(shor_fidelity(2048, 16) > 0.5);
  double prev = 0.0;
  for (int N = 10; N <= 20; ++N) {
    const double f = shor_fidelity(2048, N);
    CHECK(f >= prev);
    prev = f;
  }
}

TEST_CASE("corrected shor success") {
  CHECK(corrected_shor_success(2048, 17, 0) == doctest::Approx(shor_fidelity(2048, 17)).epsilon(1e-12));
  // Corrections help monotonically up to the optimum depth; past it the
  // ell/6 overhead dominates (which is why 6_11 is the chosen regime).
  double prev = 0.0;
  for (int ell = 0; ell <= 11; ++ell) {
    const double f = corrected_shor_success(2048, 6, ell);
    CHECK(f >= prev - 1e-12);
    prev = f;
  }
  CHECK(corrected_shor_success(2048, 6, 13) < corrected_shor_success(2048, 6, 11));
  // Large-L table rows that the composition reproduces.
  CHECK(corrected_shor_success(2048, 12, 5) == doctest::Approx(0.76).epsilon(0.01));
  CHECK(corrected_shor_success(2048, 13, 4) == doctest::Approx(0.89).epsilon(0.01));
}

TEST_CASE("gate counts") {
  CHECK(qft_count(2048) == 67117057);
  // Polynomial evaluation is exact for the printed coefficients.
  const double g = gate_count(2048, 15);
  const double expect = std::pow(2048.0, 3) * (46 + 16 * 15) +
                        std::pow(2048.0, 2) * (-8 * 225 - 60 + 2325.0 / 2.0) +
                        2048.0 * (5 - 15 - 2 * 225) - 7.5 - 112.5 - 2.0;
  CHECK(g == doctest::Approx(expect).epsilon(1e-12));
  // The corrected headline regime N=6 realizes the quoted ~1.399e14 saving.
  CHECK(qft_gate_saving(2048, 6) == doctest::Approx(1.399e14).epsilon(0.001));
  CHECK_THROWS_AS(gate_count(8, 9), std::invalid_argument);
}
