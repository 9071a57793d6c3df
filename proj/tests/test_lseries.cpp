#include <doctest.h>

#include <map>
#include <set>

#include "oracles.hpp"
#include "tatecoh/lseries.hpp"
#include "tatecoh/power_series.hpp"

using namespace tatecoh;

namespace {

// frozen against an independent high-precision prototype of the same sums
const long kG52_N8M16_level4[] = {107432, 9121,   59290,  196061, 112741, 280004,
                                  79315,  180286, 342104, 26656,  313976, 160475,
                                  241331, 86286,  357533, 93860};
const long kWinner52_level3_N6M8[] = {13682, 10996, 165, 7561, 13741, 11879, 11240, 3611};
const unsigned long kG3732_N6M16_level3[] = {
    803197517UL,  122109086UL,  422142332UL,  2526428152UL, 256663021UL,
    649876967UL,  2198051482UL, 1611186938UL, 32384343UL,   1690241324UL,
    2273557728UL, 2221880248UL, 2073990892UL, 701138118UL,  2144901552UL,
    53772234UL};

BranchSeries cached_series(long p, long j, int N, int M, const mpz_class& u) {
    static std::map<std::tuple<long, long, int, int, std::string>, BranchSeries> memo;
    auto key = std::make_tuple(p, j, N, M, u.get_str());
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, iwasawa_series(p, j, N, M, u)).first;
    return it->second;
}

SeriesProvider memo_provider(int N, int M, const mpz_class& u) {
    return [N, M, u](long p, long j) { return cached_series(p, j, N, M, u); };
}

} // namespace

TEST_CASE("pinned Bernoulli numbers") {
    CHECK(bernoulli(0) == mpq_class(1));
    CHECK(bernoulli(1) == mpq_class(-1, 2));
    CHECK(bernoulli(2) == mpq_class(1, 6));
    CHECK(bernoulli(3) == 0);
    CHECK(bernoulli(4) == mpq_class(-1, 30));
    CHECK(bernoulli(12) == mpq_class(-691, 2730));
}

TEST_CASE("pinned interpolation oracle values") {
    CHECK(lp_value(5, 2, 2, 3).value() == 42);
    CHECK(lp_value(5, 2, 6, 3).value() == 62);
    CHECK(lp_value(37, 32, 32, 1).value() == 0);  // irregular pair
    CHECK(lp_value(5, 2, 2, 3).value() % 5 != 0);
    CHECK(lp_value(7, 4, 4, 2).value() % 7 != 0);

    CHECK_THROWS_AS(lp_value(5, 3, 3, 3), OddBranch);
    CHECK_THROWS_AS(lp_value(5, 2, 4, 3), BranchMismatch);
    CHECK_THROWS_AS(lp_value(5, 2, 0, 3), ValidationError);
}

TEST_CASE("level rule and stabilization digits") {
    CHECK(level_floor(5, 16) == 3);
    CHECK(level_floor(5, 8) == 3);
    CHECK(level_floor(7, 8) == 3);
    CHECK(level_floor(13, 8) == 2);
    CHECK(level_floor(13, 16) == 3);
    CHECK(level_floor(37, 8) == 2);
    CHECK(level_floor(37, 16) == 2);

    CHECK(stabilization_digits(5, 16, 3) == 2);
    CHECK(stabilization_digits(5, 8, 3) == 2);
    CHECK(stabilization_digits(13, 8, 2) == 2);
    CHECK(stabilization_digits(37, 16, 3) == 3);
    CHECK(stabilization_digits(5, 2, 1) == 1);
}

TEST_CASE("conventions are four distinct labelled candidates") {
    auto cs = all_conventions();
    std::set<std::string> ids;
    for (const auto& c : cs) {
        CHECK((c.eps == 1 || c.eps == -1));
        CHECK((c.eta == 1 || c.eta == -1));
        ids.insert(c.id());
    }
    CHECK(ids.size() == 4);
    CHECK(ids.count("epsm1etap1") == 1);
}

TEST_CASE("frozen level sums at p = 5") {
    PowerSeries s = stickelberger_series(5, 2, 3, 6, 8, Convention{-1, 1}, mpz_class(6));
    for (int k = 0; k < 8; ++k) CHECK(s[k] == kWinner52_level3_N6M8[k]);

    BranchSeries g = cached_series(5, 2, 8, 16, mpz_class(6));
    CHECK(g.convention_id == "epsm1etap1");
    CHECK(g.level_used == 4);
    for (int k = 0; k < 16; ++k) CHECK(g.series[k] == kG52_N8M16_level4[k]);

    BranchInvariants inv = branch_invariants(g);
    CHECK(inv.mu == 0);
    CHECK(inv.lambda == 0);
    CHECK(inv.mu_certified);
    CHECK(inv.lambda_certified);
}

TEST_CASE("frozen irregular branch at p = 37") {
    BranchSeries g = cached_series(37, 32, 6, 16, mpz_class(38));
    CHECK(g.convention_id == "epsm1etap1");
    CHECK(g.level_used == 3);
    for (int k = 0; k < 16; ++k) CHECK(g.series[k] == mpz_class(kG3732_N6M16_level3[k]));

    BranchInvariants inv = branch_invariants(g);
    CHECK(inv.mu == 0);
    CHECK(inv.lambda == 1);
    CHECK(inv.mu_certified);
    CHECK(inv.lambda_certified);
}

TEST_CASE("regular branches are certified units") {
    for (long p : {5L, 7L}) {
        BranchSeries g = cached_series(p, 2, 6, 8, mpz_class(1 + p));
        BranchInvariants inv = branch_invariants(g);
        CHECK(inv.mu == 0);
        CHECK(inv.lambda == 0);
        CHECK(inv.mu_certified);
        CHECK(inv.lambda_certified);
    }
}

TEST_CASE("three interpolation points per branch") {
    for (long p : {5L, 7L, 13L}) {
        const mpz_class u(1 + p);
        for (long j = 2; j <= p - 3; j += 2) {
            BranchSeries g = cached_series(p, j, 6, 8, u);
            for (int step = 0; step < 3; ++step) {
                long n = j + step * (p - 1);
                PadicInt T0 = PadicInt(p, 6, u).pow(mpz_class(n)) - PadicInt(p, 6, 1);
                PadicInt got = evaluate_at(g.series, T0);
                PadicInt want = lp_value(p, j, n, got.precision());
                CHECK((got - want).valuation() >= 4);  // p^{-(N-2)} at N = 6
            }
        }
    }
}

TEST_CASE("consecutive levels agree to the stabilization bound") {
    const Convention conv{-1, 1};
    for (long p : {5L, 7L}) {
        int n0 = level_floor(p, 8);
        PowerSeries lo = stickelberger_series(p, 2, n0, 6, 8, conv, mpz_class(1 + p));
        PowerSeries hi = stickelberger_series(p, 2, n0 + 1, 6, 8, conv, mpz_class(1 + p));
        int N0 = stabilization_digits(p, 8, n0);
        CHECK(lo.reduce(N0, 8) == hi.reduce(N0, 8));
    }
}

TEST_CASE("wide and narrow integer paths produce the same sums") {
    // N = 12 keeps the accumulator inside 64 bits, N = 26 forces big integers
    const Convention conv{-1, 1};
    PowerSeries narrow = stickelberger_series(5, 2, 3, 12, 8, conv, mpz_class(6));
    PowerSeries wide = stickelberger_series(5, 2, 3, 26, 8, conv, mpz_class(6));
    CHECK(wide.reduce(12, 8) == narrow);

    PowerSeries n2 = stickelberger_series(7, 4, 2, 10, 6, conv, mpz_class(8));
    PowerSeries w2 = stickelberger_series(7, 4, 2, 24, 6, conv, mpz_class(8));
    CHECK(w2.reduce(10, 6) == n2);
}

TEST_CASE("branch argument screening") {
    CHECK_THROWS_AS(stickelberger_series(5, 3, 2, 4, 8, Convention{1, 1}, mpz_class(6)),
                    OddBranch);
    CHECK_THROWS_AS(stickelberger_series(5, 4, 2, 4, 8, Convention{1, 1}, mpz_class(6)),
                    BranchZero);
    CHECK_THROWS_AS(iwasawa_series(5, 2, 4, 8, mpz_class(7)), ValidationError);
    CHECK_THROWS_AS(iwasawa_series(5, 2, 4, 8, mpz_class(26)), ValidationError);
    CHECK(default_branch_of(5, 2) == 2);   // -2 mod 4
    CHECK(default_branch_of(7, 2) == 4);   // -2 mod 6
    CHECK_THROWS_AS(default_branch_of(5, 4), BranchZero);
    CHECK_THROWS_AS(default_branch_of(5, 1), ConventionUnresolved);
}

TEST_CASE("deep zero of the irregular branch") {
    ZeroCertificate z3 = locate_simple_zero(37, 32, 6, 3, mpz_class(38));
    CHECK(z3.zero == 2243652287);
    CHECK(z3.modulus_digits == 6);
    CHECK(z3.certified_digits == 4);

    ZeroCertificate z4 = locate_simple_zero(37, 32, 6, 4, mpz_class(38));
    CHECK(z4.zero == 1746999622);
    CHECK(z4.certified_digits == 5);

    // levels 3 and 4 agree to exactly 4 digits
    mpz_class diff = z3.zero - z4.zero;
    mpz_class d37 = 37;
    int v = 0;
    while (diff % d37 == 0) {
        diff /= d37;
        ++v;
    }
    CHECK(v == 4);
}

TEST_CASE("torsion invariant on regular branches") {
    auto provider = memo_provider(6, 8, mpz_class(6));
    TInvariant t2 = t_invariant(5, 2, {}, 6, 8, mpz_class(6), provider);
    CHECK(t2.t == 0);
    CHECK(t2.certified);
    CHECK(t2.certificate == "unit-value");
    CHECK(t2.branch_j == 2);

    CHECK_THROWS_AS(t_invariant(5, 4, {}, 6, 8, mpz_class(6), provider), BranchZero);

    TInvariant t1 = t_invariant(5, 1, {}, 6, 8, mpz_class(6), provider);
    CHECK(t1.t == 0);
    CHECK(t1.certified);
    CHECK(t1.certificate == "all-branches-unit");

    std::map<long, long> forced{{3, 2}};
    TInvariant t3 = t_invariant(5, 3, forced, 6, 8, mpz_class(6), provider);
    CHECK(t3.t == 0);
    CHECK(t3.certificate == "unit-value");
    CHECK(t3.branch_j == 2);
}

TEST_CASE("torsion invariant through the irregular branch") {
    auto provider = memo_provider(6, 16, mpz_class(38));
    // m = 4 maps to branch 32 where lambda = 1; the located zero is distinct
    // from the specialization point, so t_4 = 0 with a zero certificate
    TInvariant t4 = t_invariant(37, 4, {}, 6, 16, mpz_class(38), provider);
    CHECK(t4.t == 0);
    CHECK(t4.certified);
    CHECK(t4.certificate == "simple-zero-distinct");
    CHECK(t4.branch_j == 32);
    REQUIRE(t4.zero.has_value());
    CHECK(t4.zero->certified_digits >= 5);

    // odd m cannot fall back to the unit sweep here: branch 32 is not a unit
    CHECK_THROWS_AS(t_invariant(37, 1, {}, 6, 16, mpz_class(38), provider),
                    ConventionUnresolved);
}
