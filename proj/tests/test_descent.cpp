#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "tatecoh/descent.hpp"
#include "tatecoh/module_json.hpp"

using namespace tatecoh;
using oracles::rnd;

namespace {

FinitePModule zero_module(long p) { return FinitePModule{p, {}, std::nullopt, std::nullopt}; }

// One brute run checks all three degrees: placing M in h^0 exposes H^0 as
// the q=0 kernel piece and H^1 as the q=1 cokernel piece; placing it in h^1
// moves the same groups to q=1 / q=2.
void check_agreement(const FinitePModule& M, long m, const mpz_class& u) {
    int a1 = M.orders.empty() ? 0 : M.orders[0];
    TwistCharacter th = tate_twist(M.p, m, a1 + 2, u);
    BruteH01 brute = brute_force_h01(M, th, sufficient_level(M, th));

    HData at0{M, zero_module(M.p), true};
    GradedPieces q0 = twist_cohomology(at0, th, 0);
    GradedPieces q1 = twist_cohomology(at0, th, 1);
    CHECK(q0.ker_part.orders == brute.h0_orders);
    CHECK(q0.coker_part.rank() == 0);
    CHECK(q1.coker_part.orders == brute.h1_orders);
    CHECK(q1.ker_part.rank() == 0);

    HData at1{zero_module(M.p), M, true};
    GradedPieces r1 = twist_cohomology(at1, th, 1);
    GradedPieces r2 = twist_cohomology(at1, th, 2);
    CHECK(r1.ker_part.orders == brute.h0_orders);
    CHECK(r2.coker_part.orders == brute.h1_orders);
    CHECK(r2.ker_part.rank() == 0);
}

} // namespace

TEST_CASE("pinned first-layer kernel and cokernel") {
    FinitePModule M{3, {2}, std::nullopt, std::nullopt};
    IntMat g(1, 1);
    g.at(0, 0) = 4;
    M.gamma_action = g;
    KerCoker kc = gamma1_cohomology(M);
    CHECK(kc.kernel.orders == std::vector<int>{1});
    CHECK(kc.cokernel.orders == std::vector<int>{1});
    CHECK_THROWS_AS(gamma1_cohomology(FinitePModule{3, {1}, std::nullopt, std::nullopt}),
                    MissingAction);
}

TEST_CASE("zero branch is refused unless forced") {
    FinitePModule M = oracles::random_acted_module(5, mpz_class(6));
    int a1 = M.orders[0];
    TwistCharacter th = tate_twist(5, 4, a1 + 2, mpz_class(6));  // 4 = 0 mod p-1
    HData H{M, M, true};
    CHECK_THROWS_AS(twist_cohomology(H, th, 1), BranchZeroUnsupported);
    CHECK_NOTHROW(twist_cohomology(H, th, 1, true));
}

TEST_CASE("insufficient twist precision is refused") {
    FinitePModule M{5, {3}, std::nullopt, std::nullopt};
    IntMat one = IntMat::identity(1);
    M.delta_action = one;
    M.gamma_action = one;
    TwistCharacter th = tate_twist(5, 1, 2, mpz_class(6));  // needs 4 digits
    HData H{M, M, true};
    CHECK_THROWS_AS(twist_cohomology(H, th, 1), InsufficientPrecision);
}

TEST_CASE("descent agrees with cocycle enumeration, small catalog at p = 3") {
    const std::vector<std::vector<int>> shapes = {{1},       {2},       {3},
                                                  {4},       {1, 1},    {2, 1},
                                                  {3, 1},    {2, 2},    {1, 1, 1},
                                                  {2, 1, 1}, {1, 1, 1, 1}};
    const mpz_class u(4);
    int count = 0;
    for (const auto& orders : shapes) {
        int r = static_cast<int>(orders.size());
        for (int mask = 0; mask < (1 << r); ++mask) {
            for (int gpat = 0; gpat < 2; ++gpat) {
                FinitePModule M{3, orders, std::nullopt, std::nullopt};
                int a1 = orders[0];
                mpz_class mod = oracles::pow_l(3, a1);
                IntMat D(r, r), G(r, r);
                for (int i = 0; i < r; ++i) {
                    D.at(i, i) = (mask >> i & 1) ? mpz_class(mod - 1) : mpz_class(1);
                    mpz_class e(gpat ? i + 1 : 3 - i);
                    mpz_powm(G.at(i, i).get_mpz_t(), u.get_mpz_t(), e.get_mpz_t(),
                             mod.get_mpz_t());
                }
                IntMat U, Uinv;
                oracles::random_conjugator(M, U, Uinv);
                IntMat Ad = U * D * Uinv, Ag = U * G * Uinv;
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r; ++j) {
                        mpz_class mi = oracles::pow_l(3, orders[i]);
                        mpz_mod(Ad.at(i, j).get_mpz_t(), Ad.at(i, j).get_mpz_t(),
                                mi.get_mpz_t());
                        mpz_mod(Ag.at(i, j).get_mpz_t(), Ag.at(i, j).get_mpz_t(),
                                mi.get_mpz_t());
                    }
                M.delta_action = Ad;
                M.gamma_action = Ag;
                for (long m : {1L, 5L}) {
                    check_agreement(M, m, u);
                    ++count;
                }
            }
        }
    }
    CHECK(count >= 150);
}

TEST_CASE("descent agrees with cocycle enumeration, random modules") {
    for (int trial = 0; trial < 120; ++trial) {
        long p = trial % 2 ? 5 : 7;
        mpz_class u(1 + p);
        FinitePModule M = oracles::random_acted_module(p, u, 3, 2);
        long m = rnd(1, 2 * (p - 1));
        if (m % (p - 1) == 0) m += 1;
        check_agreement(M, m, u);
    }
}

TEST_CASE("level gating of the enumeration") {
    FinitePModule M{5, {2}, std::nullopt, std::nullopt};
    IntMat one = IntMat::identity(1);
    M.delta_action = one;
    M.gamma_action = one;
    TwistCharacter th = tate_twist(5, 2, 4, mpz_class(6));
    CHECK_THROWS_AS(brute_force_h01(M, th, 0), LevelTooSmall);
    CHECK_THROWS_AS(brute_force_h01(M, th, 1), LevelTooSmall);
    int lvl = sufficient_level(M, th);
    CHECK(lvl >= 2);
    BruteH01 a = brute_force_h01(M, th, lvl);
    BruteH01 b = brute_force_h01(M, th, lvl + 1);
    CHECK(a.h0_orders == b.h0_orders);
    CHECK(a.h1_orders == b.h1_orders);
}

TEST_CASE("fixture records round-trip and validate") {
    const mpz_class u(6);
    FinitePModule M = oracles::random_acted_module(5, u, 2, 2);
    int a1 = M.orders[0];
    TwistCharacter th = tate_twist(5, 1, a1 + 2, u);
    HData H{M, M, true};
    GradedPieces got = twist_cohomology(H, th, 1);

    DescentFixture f;
    f.module = M;
    f.m = 1;
    f.q = 1;
    f.u = u;
    f.expected_coker = got.coker_part.orders;
    f.expected_ker = got.ker_part.orders;

    std::ostringstream blob;
    blob << descent_fixture_to_json(f) << "\n\n" << descent_fixture_to_json(f) << "\n";
    auto back = descent_fixtures_from_jsonl(blob.str());
    REQUIRE(back.size() == 2);
    CHECK(back[0].module.orders == M.orders);
    CHECK(back[0].m == 1);
    CHECK(back[0].q == 1);
    CHECK(back[0].u == u);
    REQUIRE(back[0].expected_coker.has_value());
    CHECK(*back[0].expected_coker == got.coker_part.orders);
    CHECK(endo_equal(M, *back[0].module.delta_action, *M.delta_action));

    CHECK_THROWS_AS(descent_fixtures_from_jsonl("{\"module\":{}}"), ValidationError);
}
