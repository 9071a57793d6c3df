#include "tatecoh/elementary.hpp"

#include <algorithm>

#include "tatecoh/padic.hpp"

namespace tatecoh {

void validate_elementary(const ElementaryModule& E) {
    PadicInt check(E.p, 1, 0);
    if (E.rank < 0) throw ValidationError("rank", "negative rank");
    for (int l : E.p_power_parts)
        if (l < 1) throw ValidationError("p_powers", "exponent below 1");
    for (const auto& f : E.poly_parts) {
        if (f.multiplicity < 1)
            throw ValidationError("polys", "multiplicity below 1");
        if (f.poly.p() != E.p)
            throw ValidationError("polys", "factor prime differs");
        if (f.degree < 1 || f.degree >= f.poly.truncation())
            throw ValidationError("polys", "degree outside window");
        if (f.poly[f.degree] != 1)
            throw NotDistinguished("factor not monic at stated degree");
        for (int k = f.degree + 1; k < f.poly.truncation(); ++k)
            if (f.poly[k] != 0)
                throw NotDistinguished("factor has terms above stated degree");
        for (int k = 0; k < f.degree; ++k)
            if (f.poly[k] % E.p != 0)
                throw NotDistinguished("factor lower coefficient is a unit");
    }
}

PadicInt fm_point(long p, int N, const mpz_class& u, long m) {
    return PadicInt(p, N, u).pow(mpz_class(-m)) - PadicInt(p, N, 1);
}

namespace {

void check_branch(long p, long m) {
    long pm1 = p - 1;
    if (((m % pm1) + pm1) % pm1 == 0)
        throw BranchZero("m = 0 mod p-1 sits outside the calculus");
}

// true when F is exactly T - (u^{-m} - 1) at working precision; near holds
// when the constant term agrees to N-2 digits but not fully
struct Recognition {
    bool exact = false;
    bool near = false;
    int agree_digits = 0;
};

Recognition recognize_fm(const PolyFactor& F, const PadicInt& c) {
    Recognition r;
    if (F.degree != 1) return r;
    int N = c.precision();
    PadicInt c0(F.poly.p(), N, F.poly[0]);
    PadicInt diff = c0 + c;  // poly = T + c0, matches iff c0 = -c
    int v = diff.valuation();
    r.agree_digits = v;
    if (v >= N) r.exact = true;
    else if (v >= N - 2) r.near = true;
    return r;
}

struct FactorScan {
    int t_m = 0;
    std::vector<int> finite_orders;
    std::vector<std::string> near_misses;
};

FactorScan scan_factors(const ElementaryModule& E, const PadicInt& c) {
    FactorScan out;
    for (const auto& F : E.poly_parts) {
        Recognition rec = recognize_fm(F, c);
        if (rec.exact) {
            ++out.t_m;
            continue;
        }
        if (rec.near)
            out.near_misses.push_back(
                "degree-1 factor agrees with f_m to " +
                std::to_string(rec.agree_digits) + " of " +
                std::to_string(c.precision()) + " digits");
        PadicInt val = evaluate_at(F.poly, c);
        int v = val.valuation();
        if (v >= val.precision())
            throw UncertifiedValuation(
                "factor vanishes at the point to working precision "
                "without matching f_m");
        if (v > 0) out.finite_orders.push_back(F.multiplicity * v);
    }
    return out;
}

} // namespace

ZpModuleStructure quotient_mod_fm(const ElementaryModule& E, long m,
                                  const mpz_class& u, int N) {
    validate_elementary(E);
    check_branch(E.p, m);
    PadicInt c = fm_point(E.p, N, u, m);
    FactorScan scan = scan_factors(E, c);

    ZpModuleStructure out;
    out.free_rank = E.rank + scan.t_m;
    out.torsion_orders = E.p_power_parts;
    for (int v : scan.finite_orders) out.torsion_orders.push_back(v);
    std::sort(out.torsion_orders.rbegin(), out.torsion_orders.rend());
    out.provenance = "exact";
    out.near_misses = scan.near_misses;
    return out;
}

ZpModuleStructure torsion_mod_fm(const ElementaryModule& E, long m,
                                 const mpz_class& u, int N) {
    validate_elementary(E);
    check_branch(E.p, m);
    PadicInt c = fm_point(E.p, N, u, m);
    FactorScan scan = scan_factors(E, c);  // certifies non-matching factors

    // p-power parts and certified non-matching factors contribute no
    // f_m-torsion: f_m is a nonzerodivisor on each
    ZpModuleStructure out;
    out.free_rank = scan.t_m;
    out.provenance = "exact";
    out.near_misses = scan.near_misses;
    return out;
}

int rank_formula(long p, long m) {
    check_branch(p, m);
    return (m % 2 == 0) ? 0 : 1;
}

HCoranks h_structures(const ElementaryModule& E, long m, const mpz_class& u,
                      int N) {
    validate_elementary(E);
    check_branch(E.p, m);
    PadicInt c = fm_point(E.p, N, u, m);
    FactorScan scan = scan_factors(E, c);

    HCoranks out;
    out.t_m = scan.t_m;
    out.h1_corank = E.rank + scan.t_m;
    out.h2_corank = scan.t_m;
    out.provenance = "up to finite ambiguity";
    out.near_misses = scan.near_misses;
    return out;
}

} // namespace tatecoh
