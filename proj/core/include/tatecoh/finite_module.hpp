#pragma once

// Finite abelian p-groups presented by invariant exponents a_1 >= ... >= a_r,
// with optional commuting actions of the tame generator delta_0 and the
// wild generator gamma.  An endomorphism is a matrix acting on generator
// columns; entry (i, j) must be divisible by p^{max(0, a_i - a_j)} for the
// map to be well defined.

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "tatecoh/errors.hpp"
#include "tatecoh/smith.hpp"

namespace tatecoh {

struct FinitePModule {
    long p = 0;
    std::vector<int> orders;  // exponents, descending, all >= 1
    std::optional<IntMat> delta_action;  // action of delta_0 (smallest primitive root)
    std::optional<IntMat> gamma_action;

    int rank() const { return static_cast<int>(orders.size()); }
    mpz_class size() const;
};

void validate_module(const FinitePModule& M);

// entrywise congruence as maps out of the generator presentation
bool endo_equal(const FinitePModule& M, const IntMat& A, const IntMat& B);

bool endo_well_defined(const FinitePModule& M, const IntMat& psi);

IntMat scalar_endo(const FinitePModule& M, const mpz_class& c);

// A^{-1} mod p^{a_1}; throws NonInvertibleAction when det(A) = 0 mod p
IntMat endo_inverse(const FinitePModule& M, const IntMat& A);

struct KerCoker {
    FinitePModule kernel;    // plain (no actions)
    FinitePModule cokernel;
};

KerCoker endo_ker_coker(const FinitePModule& M, const IntMat& psi);

// e_j M as a module with both actions carried over.  delta_action must be
// present and have order dividing p-1.
FinitePModule branch_project(const FinitePModule& M, long j);

// Same orders; each action A becomes the pairing-adjoint of A^{-1}.
FinitePModule pontryagin_dual(const FinitePModule& M);

} // namespace tatecoh
