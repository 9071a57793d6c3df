#pragma once

// Specialization of elementary Lambda-modules at f_m = T - (u^{-m} - 1):
// quotients and f_m-torsion as Z_p-modules, and the corank bookkeeping that
// feeds the cohomology report.  Factors are recognized as f_m only on exact
// match at working precision; close calls are surfaced, never merged.

#include <gmpxx.h>

#include <string>
#include <vector>

#include "tatecoh/errors.hpp"
#include "tatecoh/power_series.hpp"

namespace tatecoh {

struct PolyFactor {
    PowerSeries poly;  // distinguished, monic of the stated degree
    int degree = 0;
    int multiplicity = 1;
};

struct ElementaryModule {
    long p = 0;
    int rank = 0;                     // Lambda^rank
    std::vector<int> p_power_parts;   // l_i for Lambda/p^{l_i}
    std::vector<PolyFactor> poly_parts;
};

void validate_elementary(const ElementaryModule& E);

struct ZpModuleStructure {
    int free_rank = 0;
    std::vector<int> torsion_orders;  // exponents, descending
    std::string provenance;           // "exact" or "up to finite ambiguity"
    std::vector<std::string> near_misses;
};

// the specialization point u^{-m} - 1 at precision N
PadicInt fm_point(long p, int N, const mpz_class& u, long m);

// E / f_m E
ZpModuleStructure quotient_mod_fm(const ElementaryModule& E, long m,
                                  const mpz_class& u, int N);

// E[f_m], free of rank t_m; finite parts vanish whenever the non-matching
// factors are certified nonzero at the point
ZpModuleStructure torsion_mod_fm(const ElementaryModule& E, long m,
                                 const mpz_class& u, int N);

// Lambda-rank of the branch module: 1 for odd m, 0 for even m
int rank_formula(long p, long m);

struct HCoranks {
    int h1_corank = 0;
    int h2_corank = 0;
    int t_m = 0;
    std::string provenance;
    std::vector<std::string> near_misses;
};

// corank H^1 = rank + t_m, corank H^2 = t_m
HCoranks h_structures(const ElementaryModule& E, long m, const mpz_class& u, int N);

} // namespace tatecoh
