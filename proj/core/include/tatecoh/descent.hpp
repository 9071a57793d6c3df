#pragma once

// Cohomology of Tate twists over the cyclotomic tower, reduced to kernels and
// cokernels of gamma - theta(gamma)^{-1} on branch pieces of the top-level
// data.  The engine never invents a splitting: callers get the two graded
// pieces and may multiply orders.

#include <gmpxx.h>

#include "tatecoh/errors.hpp"
#include "tatecoh/finite_module.hpp"
#include "tatecoh/padic.hpp"

namespace tatecoh {

struct TwistCharacter {
    long p = 0;
    long branch_exponent = 0;  // m, read mod p-1
    PadicInt gamma_value;      // theta(gamma), a 1-unit
};

// the m-th Tate twist: omega^m on the tame part, gamma -> u^m
TwistCharacter tate_twist(long p, long m, int N, const mpz_class& u);

struct HData {
    FinitePModule h0, h1;
    bool h2_is_zero = true;
};

struct GradedPieces {
    FinitePModule coker_part, ker_part;
    mpz_class total_order() const { return coker_part.size() * ker_part.size(); }
};

// (ker, coker) of gamma - 1; the first-layer input to descent
KerCoker gamma1_cohomology(const FinitePModule& M);

// H^q pieces: coker(gamma - theta(gamma)^{-1} on e_{-m} h^{q-1}) and
// ker(... on e_{-m} h^q), with h^{-1} = h^2 = 0.  The branch-zero case
// (m = 0 mod p-1) sits outside the supported hypotheses and is refused
// unless allow_branch_zero is set; callers that force it must flag results.
GradedPieces twist_cohomology(const HData& H, const TwistCharacter& theta, int q,
                              bool allow_branch_zero = false);

struct BruteH01 {
    std::vector<int> h0_orders;
    std::vector<int> h1_orders;
};

// Finite-level cocycle computation of H^0 and H^1 of (Z/p)^* x Z/p^n acting
// through the twisted module.  Exact for the profinite group once the level
// kills the norm map; LevelTooSmall otherwise.
BruteH01 brute_force_h01(const FinitePModule& M, const TwistCharacter& theta,
                         int level_n);

// smallest level at which brute_force_h01 sees the profinite answer
int sufficient_level(const FinitePModule& M, const TwistCharacter& theta);

} // namespace tatecoh
