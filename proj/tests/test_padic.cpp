#include <doctest.h>

#include "oracles.hpp"
#include "tatecoh/errors.hpp"
#include "tatecoh/padic.hpp"

using namespace tatecoh;
using oracles::rnd;

TEST_CASE("pinned residue arithmetic") {
    CHECK(PadicInt(5, 3, 50).valuation() == 2);
    CHECK(PadicInt(5, 3, 0).valuation() == 3);
    CHECK(unit_inverse(PadicInt(5, 3, 6)).value() == 21);
    CHECK((PadicInt(5, 3, 6) * PadicInt(5, 3, 21)).value() == 1);
    CHECK(PadicInt(7, 4, -1).value() == 2400);
    CHECK_THROWS_AS(unit_inverse(PadicInt(5, 3, 10)), NonUnit);
    CHECK_THROWS_AS(PadicInt(4, 3, 1), ValidationError);
    CHECK_THROWS_AS(PadicInt(5, 0, 1), ValidationError);
}

TEST_CASE("pinned Teichmuller values") {
    CHECK(teichmuller(2, 5, 2).value() == 7);
    CHECK(teichmuller(2, 5, 3).value() == 57);
    CHECK(teichmuller(1, 5, 6).value() == 1);
    CHECK(teichmuller(4, 5, 3).value() == 124);  // omega(-1) = -1
    CHECK_THROWS_AS(teichmuller(5, 5, 3), NotCoprime);

    auto d = unit_decompose(PadicInt(5, 3, 2));
    CHECK(d.teich.value() == 57);
    CHECK(d.principal.value() == 11);
    auto e = unit_decompose(PadicInt(5, 3, 6));
    CHECK(e.teich.value() == 1);
    CHECK(e.principal.value() == 6);
}

TEST_CASE("Teichmuller against the Hensel oracle") {
    const long primes[] = {3, 5, 7, 13, 37};
    for (long p : primes)
        for (int N = 1; N <= 6; ++N)
            for (long a = 1; a < p; ++a)
                CHECK(teichmuller(a, p, N).value() == oracles::teich_hensel(a, p, N));
}

TEST_CASE("random unit decompositions round-trip") {
    const long primes[] = {3, 5, 7, 13, 37};
    for (int trial = 0; trial < 1000; ++trial) {
        long p = primes[rnd(0, 4)];
        int N = static_cast<int>(rnd(1, 8));
        mpz_class mod = oracles::pow_l(p, N);
        mpz_class a = rnd(1, 1000000) % mod;
        if (a % p == 0) a += 1;
        PadicInt x(p, N, a);
        auto d = unit_decompose(x);
        CHECK(d.teich * d.principal == x);
        CHECK(d.teich.pow(mpz_class(p - 1)).value() == 1);
        CHECK(d.principal.value() % p == 1);
        CHECK(unit_inverse(x).value() == oracles::egcd_inverse(a, mod));

        int v = static_cast<int>(rnd(0, N));
        PadicInt shifted = x * PadicInt(p, N, oracles::pow_l(p, v));
        CHECK(shifted.valuation() == std::min(v, N));
    }
}

TEST_CASE("log of 1-units is additive") {
    const long primes[] = {3, 5, 7, 13};
    for (int trial = 0; trial < 200; ++trial) {
        long p = primes[rnd(0, 3)];
        int N = static_cast<int>(rnd(2, 8));
        mpz_class mod = oracles::pow_l(p, N);
        mpz_class a = (rnd(0, 1 << 30) % (mod / p)) * p + 1;
        mpz_class b = (rnd(0, 1 << 30) % (mod / p)) * p + 1;
        PadicInt x(p, N, a), y(p, N, b);
        CHECK(padic_log(x * y) == padic_log(x) + padic_log(y));

        long k = rnd(1, 50);
        CHECK(padic_log(x.pow(mpz_class(k))) == padic_log(x) * PadicInt(p, N, k));
    }
    CHECK(padic_log(PadicInt(5, 4, 1)).value() == 0);
    CHECK_THROWS_AS(padic_log(PadicInt(5, 4, 2)), NonUnit);
}

TEST_CASE("discrete log against exact exponentiation") {
    const long primes[] = {3, 5, 7, 13};
    for (int trial = 0; trial < 200; ++trial) {
        long p = primes[rnd(0, 3)];
        int n = static_cast<int>(rnd(1, 4));
        mpz_class u = 1 + p;
        mpz_class mod = oracles::pow_l(p, n + 1);
        mpz_class a = rnd(1, 1 << 30) % mod;
        if (a % p == 0) a += 1;
        mpz_class iota = discrete_log_unit(a, u, p, n);
        CHECK(iota >= 0);
        CHECK(iota < oracles::pow_l(p, n));
        // u^iota must reproduce the principal part mod p^{n+1}
        mpz_class om = oracles::teich_hensel(mpz_class(a % p).get_si(), p, n + 1);
        mpz_class principal = (a * oracles::egcd_inverse(om, mod)) % mod;
        mpz_class got;
        mpz_powm(got.get_mpz_t(), u.get_mpz_t(), iota.get_mpz_t(), mod.get_mpz_t());
        CHECK(got == principal);
    }
}

TEST_CASE("primitive roots") {
    CHECK(smallest_primitive_root(3) == 2);
    CHECK(smallest_primitive_root(5) == 2);
    CHECK(smallest_primitive_root(7) == 3);
    CHECK(smallest_primitive_root(13) == 2);
    CHECK(smallest_primitive_root(37) == 2);
    CHECK(smallest_primitive_root(191) == 19);
}

TEST_CASE("context mixing is refused") {
    CHECK_THROWS_AS(PadicInt(5, 3, 1) + PadicInt(7, 3, 1), PrecisionMismatch);
    CHECK_THROWS_AS(PadicInt(5, 3, 1) * PadicInt(5, 4, 1), PrecisionMismatch);
    CHECK(PadicInt(5, 4, 57).reduce(2).value() == 7);
}
