#pragma once

#include "truncq/core_model.hpp"

namespace truncq {

// Success-run statistics for n Bernoulli(p) trials.
//
// run_survival_pmf is P(M_n^(k) = x) where M_n^(k) counts maximal runs of
// length >= k, evaluated by the alternating binomial sum; exact_run_pmf is the
// length-exactly-k variant P(k) - P(k+1).
double run_survival_pmf(double p, int n, int k, int x);
double exact_run_pmf(double p, int n, int k, int x);

// Average number of runs R(p,n) and average run length A(p,n).  Evaluated via
// the algebraically equivalent stable forms R = p + (n-1)p(1-p) and
// S(p,n,k) = p^k (2q + (n-k-1) q^2), S(p,n,n) = p^n, so they stay exact for
// the window sizes fidelity prediction needs (n in the thousands); the tests
// pin them to the PMF-sum definitions.
double avg_runs(double p, int n);
double avg_run_length(double p, int n);  // throws when avg_runs == 0
double avg_exact_runs(double p, int n, int k);  // S(p,n,k)

// C(L) and B(L): expected number of distinct carry chains for an adder
// (propagation 3/4) and an add/subtract pair (propagation 1/2).
double distinct_carries(int L_eff);
double distinct_chains_addsub(int L_eff);

// Average single-pass fidelities, exact and asymptotic.
double adder_fidelity_avg(const TruncationConfig& cfg);        // p_N^(C.A), window L-N-1
double addsub_fidelity_avg(const TruncationConfig& cfg);       // p_N^(B.A)
double adder_fidelity_asymptotic(const TruncationConfig& cfg); // p_N^((L-N-1)/2)
double addsub_fidelity_asymptotic(const TruncationConfig& cfg);// p_N^((L-N-1)/3)

}  // namespace truncq
