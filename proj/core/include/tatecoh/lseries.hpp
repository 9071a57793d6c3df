#pragma once

// Kubota-Leopoldt branch series from Stickelberger-type level sums.  The
// construction carries four sign/shift candidates; the surviving convention
// is the one matching the Bernoulli interpolation oracle, and every series
// records which candidate it is.  Finite-level sums are exactly compatible
// with level folding, so an evaluation at level n is accurate to n+1 digits;
// precision claims below lean on that bound.

#include <gmpxx.h>

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "tatecoh/errors.hpp"
#include "tatecoh/padic.hpp"
#include "tatecoh/power_series.hpp"

namespace tatecoh {

// exact Bernoulli numbers, B_1 = -1/2
mpq_class bernoulli(int n);

// -(1 - p^{n-1}) B_n / n mod p^N for n >= 1, n = j mod p-1
PadicInt lp_value(long p, long j, long n, int N);

struct Convention {
    int eps;  // global sign
    int eta;  // exponent direction
    std::string id() const;
};
std::array<Convention, 4> all_conventions();

// One candidate series at a fixed level: the normalized level sum, shifted
// and truncated to (p^N, T^M).  Throws NonIntegralResult if the level sum
// fails its divisibility, OddBranch / BranchZero on bad j.
PowerSeries stickelberger_series(long p, long j, int level, int N, int M,
                                 const Convention& conv, const mpz_class& u);

struct BranchSeries {
    long p = 0;
    long j = 0;
    PowerSeries series;
    std::string convention_id;
    int level_used = 0;
    mpz_class u;
};

// Full pipeline: level rule, calibration against lp_value at two points,
// stabilization check between consecutive levels.  CalibrationFailed when no
// unique candidate survives.
BranchSeries iwasawa_series(long p, long j, int N, int M, const mpz_class& u);

// smallest n with p^n >= p*M; the series is computed at n0 and n0+1
int level_floor(long p, int M);
// digits to which consecutive levels n, n+1 agree: max(1, n - floor(log_p(M-1)))
int stabilization_digits(long p, int M, int level_n);

struct BranchInvariants {
    int mu = 0;
    int lambda = 0;
    bool mu_certified = false;
    bool lambda_certified = false;
    int trust_digits = 0;  // coefficient digits backed by the fold bound
};

BranchInvariants branch_invariants(const BranchSeries& g);

struct ZeroCertificate {
    mpz_class zero;       // residue mod p^{modulus_digits}
    int modulus_digits;
    int certified_digits; // leading digits guaranteed by the fold bound
    int level;
};

struct TInvariant {
    int t = 0;
    bool certified = false;
    std::string certificate;  // "unit-value" | "simple-zero-distinct" | "all-branches-unit" | "ord-at"
    long branch_j = -1;
    std::optional<ZeroCertificate> zero;
};

using SeriesProvider = std::function<BranchSeries(long p, long j)>;

// default branch assignment j = -m mod p-1; only defined for even m, and
// refuses the zero branch
long default_branch_of(long p, long m);

// t_m for one assigned even branch
TInvariant t_invariant_on_branch(long p, long m, long j, int N, int M,
                                 const mpz_class& u,
                                 const SeriesProvider& provider = {});

// Resolves the branch through the map (explicit entry, else default for even
// m).  Odd m without an entry: certified t_m = 0 when every even branch of p
// is a certified unit, ConventionUnresolved otherwise.
TInvariant t_invariant(long p, long m, const std::map<long, long>& branch_map,
                       int N, int M, const mpz_class& u,
                       const SeriesProvider& provider = {});

// Newton refinement of the unique simple zero of a lambda = 1 branch,
// performed on the exact level-n sum.  Internal to t_invariant but exposed
// for the deep-zero tests.
ZeroCertificate locate_simple_zero(long p, long j, int digits, int level,
                                   const mpz_class& u);

} // namespace tatecoh
