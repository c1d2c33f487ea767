#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <map>
#include <vector>

#include "truncq/run_stats.hpp"

using namespace truncq;

namespace {

// Exhaustive enumeration over all 2^n Bernoulli sequences: distribution of the
// number of maximal runs of length >= k and of length exactly k.
struct RunEnumeration {
  std::map<int, double> survival;  // runs >= k
  std::map<int, double> exact;     // runs == k
};

RunEnumeration enumerate_runs(double p, int n, int k) {
  RunEnumeration out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    double pr = 1.0;
    for (int i = 0; i < n; ++i) pr *= ((bits >> i) & 1) ? p : (1.0 - p);
    int ge = 0, eq = 0;
    int i = 0;
    while (i < n) {
      if ((bits >> i) & 1) {
        int j = i;
        while (j < n && ((bits >> j) & 1)) ++j;
        if (j - i >= k) ++ge;
        if (j - i == k) ++eq;
        i = j;
      } else {
        ++i;
      }
    }
    out.survival[ge] += pr;
    out.exact[eq] += pr;
  }
  return out;
}

double enum_avg_runs(double p, int n) {
  auto e = enumerate_runs(p, n, 1);
  double mean = 0.0;
  for (auto [x, pr] : e.survival) mean += x * pr;
  return mean;
}

}  // namespace

TEST_CASE("survival PMF matches exhaustive enumeration up to n = 12") {
  for (int n = 1; n <= 12; ++n) {
    for (double p : {0.25, 0.5, 0.75}) {
      for (int k = 1; k <= n; ++k) {
        const auto e = enumerate_runs(p, n, k);
        for (int x = 0; x <= n; ++x) {
          const double expected = e.survival.count(x) ? e.survival.at(x) : 0.0;
          CHECK(run_survival_pmf(p, n, k, x) == doctest::Approx(expected).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("exact-run first moment equals the enumerated expected count") {
  // P2 itself is a survival difference, not a pointwise PMF; its x-moment is
  // the expected number of length-exactly-k runs and must match enumeration.
  for (int n = 1; n <= 10; ++n) {
    for (double p : {0.25, 0.5, 0.75}) {
      for (int k = 1; k <= n; ++k) {
        const auto e = enumerate_runs(p, n, k);
        double expected_moment = 0.0;
        for (auto [x, pr] : e.exact) expected_moment += x * pr;
        double moment = 0.0;
        for (int x = 1; x <= n; ++x) {
          moment += x * (run_survival_pmf(p, n, k, x) - run_survival_pmf(p, n, k + 1, x));
        }
        CHECK(moment == doctest::Approx(expected_moment).epsilon(1e-10));
        CHECK(avg_exact_runs(p, n, k) == doctest::Approx(expected_moment).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("survival PMF spec examples") {
  CHECK(run_survival_pmf(1.0, 3, 1, 1) == 1.0);
  CHECK(run_survival_pmf(0.0, 5, 1, 0) == 1.0);
  // Enumeration: 6 of the 8 length-3 sequences hold exactly one maximal run.
  CHECK(run_survival_pmf(0.5, 3, 1, 1) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(run_survival_pmf(0.5, 3, 1, 1) ==
        doctest::Approx(enumerate_runs(0.5, 3, 1).survival.at(1)).epsilon(1e-12));
  CHECK_THROWS_AS(run_survival_pmf(1.5, 3, 1, 1), std::invalid_argument);
}

TEST_CASE("survival PMF sums to one") {
  for (int n : {1, 4, 8, 12, 30}) {
    for (double p : {0.1, 0.5, 0.75, 0.9}) {
      for (int k = 1; k <= std::min(n, 6); ++k) {
        double total = 0.0;
        for (int x = 0; x <= n; ++x) total += run_survival_pmf(p, n, k, x);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("exact run PMF spec examples") {
  CHECK(exact_run_pmf(1.0, 3, 3, 1) == 1.0);
  CHECK(exact_run_pmf(1.0, 3, 2, 1) == 0.0);
  const auto e = enumerate_runs(0.5, 4, 2);
  CHECK(exact_run_pmf(0.5, 4, 2, 1) == doctest::Approx(e.exact.at(1)).epsilon(1e-10));
  CHECK(exact_run_pmf(0.5, 4, 2, 1) == doctest::Approx(0.3125).epsilon(1e-12));
  // Clamped at zero where the survival difference dips negative.
  CHECK(exact_run_pmf(0.5, 3, 1, 0) == 0.0);
}

TEST_CASE("average runs and run length against PMF-sum definitions") {
  for (int n = 1; n <= 12; ++n) {
    for (double p : {0.25, 0.5, 0.75}) {
      double r_pmf = 0.0;
      for (int x = 1; x <= n; ++x) r_pmf += x * run_survival_pmf(p, n, 1, x);
      CHECK(avg_runs(p, n) == doctest::Approx(r_pmf).epsilon(1e-10));
      CHECK(avg_runs(p, n) == doctest::Approx(enum_avg_runs(p, n)).epsilon(1e-10));

      double a_pmf = 0.0;
      for (int k = 1; k <= n; ++k) {
        double s = 0.0;
        for (int x = 0; x <= n; ++x) {
          s += x * (run_survival_pmf(p, n, k, x) - run_survival_pmf(p, n, k + 1, x));
        }
        CHECK(avg_exact_runs(p, n, k) == doctest::Approx(s).epsilon(1e-10));
        a_pmf += k * s;
      }
      CHECK(avg_run_length(p, n) == doctest::Approx(a_pmf / r_pmf).epsilon(1e-9));
    }
  }
  // Larger n: stable closed form still equals the alternating-series
  // definition inside the series' numerical domain (the binomial terms start
  // cancelling catastrophically above n ~ 100).
  for (int n : {50, 80, 100}) {
    for (double p : {0.5, 0.75}) {
      double r_pmf = 0.0;
      for (int x = 1; x <= n; ++x) r_pmf += x * run_survival_pmf(p, n, 1, x);
      CHECK(avg_runs(p, n) == doctest::Approx(r_pmf).epsilon(1e-8));
    }
  }
}

TEST_CASE("average run length limits") {
  CHECK(avg_runs(1.0, 10) == doctest::Approx(1.0));
  CHECK(avg_runs(0.0, 10) == doctest::Approx(0.0));
  CHECK(avg_run_length(1.0, 7) == doctest::Approx(7.0));
  CHECK_THROWS_AS(avg_run_length(0.0, 10), std::domain_error);
  // Asymptote 1/(1-p): A(3/4, 200) sits 0.059 shy of 4 (the 1/n transient is
  // still visible there), and well inside 0.05 by n = 400.
  CHECK(std::fabs(avg_run_length(0.75, 200) - 4.0) < 0.06);
  CHECK(std::fabs(avg_run_length(0.75, 400) - 4.0) < 0.05);
  CHECK(std::fabs(avg_run_length(0.5, 200) - 2.0) < 0.05);
  CHECK(avg_run_length(0.999, 50) > 40.0);  // approaches n as p -> 1
}

TEST_CASE("distinct chain counts") {
  CHECK(distinct_carries(1) == doctest::Approx(0.25).epsilon(1e-12));
  // A -> 4 gives C -> L/8; check the trend at large L.
  CHECK(distinct_carries(2000) == doctest::Approx(2000.0 / 8.0).epsilon(0.01));
  // A -> 2 gives B -> L/6.
  CHECK(distinct_chains_addsub(2000) == doctest::Approx(2000.0 / 6.0).epsilon(0.01));
}

TEST_CASE("average fidelity forms") {
  CHECK(adder_fidelity_avg({5, 4, 0}) == 1.0);  // L = N+1
  CHECK(addsub_fidelity_avg({5, 4, 0}) == 1.0);
  CHECK(adder_fidelity_asymptotic({5, 4, 0}) == 1.0);

  // Exact vs asymptotic at L=30, N=4 within 2%.
  const double exact = adder_fidelity_avg({30, 4, 0});
  const double asym = adder_fidelity_asymptotic({30, 4, 0});
  CHECK(std::fabs(exact - asym) / asym < 0.02);

  // Add/subtract single pass approaches its asymptote at L=200, N=5.
  const double as_exact = addsub_fidelity_avg({200, 5, 0});
  const double as_asym = addsub_fidelity_asymptotic({200, 5, 0});
  CHECK(std::fabs(as_exact - as_asym) / as_asym < 0.02);

  // Add/subtract outperforms the bare adder.
  for (int L : {16, 64, 256}) {
    for (int N : {3, 4, 5}) {
      CHECK(addsub_fidelity_asymptotic({L, N, 0}) >= adder_fidelity_asymptotic({L, N, 0}));
      CHECK(addsub_fidelity_avg({L, N, 0}) >= adder_fidelity_avg({L, N, 0}) - 1e-12);
    }
  }

  // Adder at L=2048, N=6 keeps better than even odds.
  CHECK(adder_fidelity_asymptotic({2048, 6, 0}) > 0.5);

  // Monotone: non-increasing in L, non-decreasing in N.
  double prev = 1.0;
  for (int L : {8, 16, 32, 64, 128}) {
    const double f = adder_fidelity_avg({L, 4, 0});
    CHECK(f <= prev + 1e-12);
    prev = f;
  }
  prev = 0.0;
  for (int N = 2; N <= 9; ++N) {
    const double f = addsub_fidelity_avg({64, N, 0});
    CHECK(f >= prev - 1e-12);
    prev = f;
  }
}
