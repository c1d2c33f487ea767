#pragma once

#include "truncq/pmf.hpp"

namespace truncq {

// Parameters for the n-fold add/subtract distribution model.
struct SequenceModelParams {
  int n = 0;    // paired add/subtract count
  int L = 2;
  int N = 1;
  int ell = 0;
  int window = 8;               // ell_chain
  bool tail_correction = true;  // replace the dropped window tail by its mean
};

// PMF of A - B with A ~ Bi(n1,p1), B ~ Bi(n2,p2); integer support [-n2, n1].
Pmf binom_diff_pmf(int n1, double p1, int n2, double p2);

// Distribution of the effective sum D(n) on the dyadic grid of step
// 2^-(window-1).  With tail_correction the grid is shifted by 2^-window so
// that <D> = 1 exactly.
Pmf effective_sum_pmf(const SequenceModelParams& params);

// prod_d p_{N, floor(d/2)}^{Pr(D=d) * (L-N-1)} over the PMF grid.
double sequence_fidelity_numeric(const SequenceModelParams& params);

// Closed form p_N^{(L-N-1)(n+1)/6}.
double sequence_fidelity_closed(const SequenceModelParams& params);

// Rebased growth law T_AS(n) = T_AS(1)^{(n+1)/2} from a measured single-pass
// value.
double sequence_fidelity_rebased(double single_pass_fidelity, int n);

// Corrected-adder law: p_N^{(W/3)(ell/6)} * p_{N+ell}^{W'(n+1)/6} with
// W = L-N-1 and W' = L-N-ell-1; reduces to sequence_fidelity_closed at ell=0.
double corrected_fidelity(const SequenceModelParams& params);

// Smallest integer N with [1/2 + 1/2 cos(pi/2^N)]^{(n+2)L/12} >= 1 - epsilon.
int truncation_level_for_error(double epsilon, int n, int L);

}  // namespace truncq
