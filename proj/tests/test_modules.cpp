#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "tatecoh/finite_module.hpp"

using namespace tatecoh;
using oracles::rnd;

namespace {

FinitePModule plain(long p, std::vector<int> orders) {
    FinitePModule M;
    M.p = p;
    M.orders = std::move(orders);
    return M;
}

} // namespace

TEST_CASE("validation rejects malformed presentations") {
    CHECK_THROWS_AS(validate_module(plain(4, {1})), ValidationError);
    CHECK_THROWS_AS(validate_module(plain(5, {1, 2})), ValidationError);
    CHECK_THROWS_AS(validate_module(plain(5, {2, 0})), ValidationError);

    FinitePModule M = plain(5, {2, 1});
    IntMat bad(2, 2);
    bad.at(0, 0) = 1;
    bad.at(0, 1) = 1;  // needs a factor of 5
    bad.at(1, 1) = 1;
    M.delta_action = bad;
    CHECK_THROWS_AS(validate_module(M), IllDefinedEndomorphism);
    CHECK_FALSE(endo_well_defined(M, bad));
}

TEST_CASE("pinned kernel and cokernel") {
    FinitePModule M = plain(5, {2, 1});
    IntMat psi(2, 2);
    psi.at(0, 0) = 5;  // diag(5, 0) on Z/25 + Z/5
    KerCoker kc = endo_ker_coker(M, psi);
    CHECK(kc.kernel.orders == std::vector<int>{1, 1});
    CHECK(kc.cokernel.orders == std::vector<int>{1, 1});
}

TEST_CASE("pinned dual action") {
    FinitePModule M = plain(3, {2});
    IntMat g(1, 1);
    g.at(0, 0) = 4;
    M.gamma_action = g;
    FinitePModule D = pontryagin_dual(M);
    CHECK(D.orders == M.orders);
    REQUIRE(D.gamma_action.has_value());
    CHECK(D.gamma_action->at(0, 0) == 7);
    CHECK_THROWS_AS([&] {
        FinitePModule B = plain(3, {1});
        IntMat z(1, 1);
        B.gamma_action = z;
        pontryagin_dual(B);
    }(), NonInvertibleAction);
}

TEST_CASE("kernel and cokernel have equal order, and match enumeration") {
    int checked_against_oracle = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        long p = (trial % 3 == 0) ? 3 : (trial % 3 == 1 ? 5 : 7);
        FinitePModule M = plain(p, oracles::random_orders(3, 3));
        IntMat psi = oracles::random_endo(M);
        KerCoker kc = endo_ker_coker(M, psi);
        CHECK(kc.kernel.size() == kc.cokernel.size());

        oracles::Elements en(M);
        if (en.total <= 3000) {
            ++checked_against_oracle;
            CHECK(kc.kernel.orders == oracles::kernel_orders_oracle(M, psi));
            CHECK(kc.cokernel.orders == oracles::cokernel_orders_oracle(M, psi));
        }
    }
    CHECK(checked_against_oracle >= 200);
}

TEST_CASE("inverse of invertible endomorphisms") {
    for (int trial = 0; trial < 200; ++trial) {
        long p = trial % 2 ? 5 : 13;
        FinitePModule M = oracles::random_acted_module(p, mpz_class(1 + p));
        const IntMat& A = *M.delta_action;
        IntMat Ainv = endo_inverse(M, A);
        CHECK(endo_equal(M, A * Ainv, IntMat::identity(M.rank())));
        CHECK(endo_equal(M, Ainv * A, IntMat::identity(M.rank())));
    }
    FinitePModule M = plain(5, {2});
    IntMat nil(1, 1);
    nil.at(0, 0) = 5;
    CHECK_THROWS_AS(endo_inverse(M, nil), NonInvertibleAction);
}

TEST_CASE("double duality is the identity on orders and actions") {
    for (int trial = 0; trial < 300; ++trial) {
        long p = (trial % 3 == 0) ? 3 : (trial % 3 == 1 ? 5 : 7);
        FinitePModule M = oracles::random_acted_module(p, mpz_class(1 + p));
        FinitePModule DD = pontryagin_dual(pontryagin_dual(M));
        CHECK(DD.orders == M.orders);
        CHECK(endo_equal(M, *DD.delta_action, *M.delta_action));
        CHECK(endo_equal(M, *DD.gamma_action, *M.gamma_action));
    }
}

TEST_CASE("duality swaps branches j and -j") {
    for (int trial = 0; trial < 500; ++trial) {
        long p = (trial % 3 == 0) ? 5 : (trial % 3 == 1 ? 7 : 13);
        FinitePModule M = oracles::random_acted_module(p, mpz_class(1 + p));
        long j = rnd(0, p - 2);
        FinitePModule lhs = branch_project(pontryagin_dual(M), j);
        FinitePModule rhs = branch_project(M, -j);
        CHECK(lhs.orders == rhs.orders);
    }
}

TEST_CASE("branch projection is idempotent and respects the actions") {
    for (int trial = 0; trial < 100; ++trial) {
        long p = trial % 2 ? 5 : 7;
        FinitePModule M = oracles::random_acted_module(p, mpz_class(1 + p));
        long j = rnd(0, p - 2);
        FinitePModule B = branch_project(M, j);
        validate_module(B);
        if (B.rank() == 0) continue;
        FinitePModule B2 = branch_project(B, j);
        CHECK(B2.orders == B.orders);
        // delta acts on e_j M by the scalar omega(delta_0)^j
        mpz_class w =
            teichmuller(smallest_primitive_root(p), p, B.orders[0]).pow(mpz_class(j)).value();
        CHECK(endo_equal(B, *B.delta_action, scalar_endo(B, w)));
    }
}

TEST_CASE("projection needs a finite-order delta action") {
    FinitePModule M = plain(5, {1});
    IntMat g(1, 1);
    g.at(0, 0) = 2;  // order 4 divides p-1: fine
    M.delta_action = g;
    CHECK_NOTHROW(branch_project(M, 1));

    FinitePModule B = plain(5, {2});
    IntMat h(1, 1);
    h.at(0, 0) = 2;  // order 20 mod 25: not a Delta action
    B.delta_action = h;
    CHECK_THROWS_AS(branch_project(B, 1), ActionOrderInvalid);
    CHECK_THROWS_AS(branch_project(plain(5, {1}), 0), MissingAction);
}
