#pragma once

// Group ring (Z/p^N)[Delta] for Delta = (Z/p)^*, the tame quotient.  Branch
// idempotents e_j live here; j is read mod p-1.

#include <gmpxx.h>

#include <vector>

#include "tatecoh/errors.hpp"
#include "tatecoh/padic.hpp"

namespace tatecoh {

class DeltaRingElement {
public:
    DeltaRingElement(long p, int N);

    long p() const { return p_; }
    int precision() const { return N_; }

    // coefficient of [delta], delta in 1..p-1
    const mpz_class& coeff(long delta) const { return c_[delta - 1]; }
    void set_coeff(long delta, const mpz_class& v);

    DeltaRingElement operator+(const DeltaRingElement& o) const;
    DeltaRingElement operator-(const DeltaRingElement& o) const;
    DeltaRingElement operator*(const DeltaRingElement& o) const;
    bool operator==(const DeltaRingElement& o) const;
    bool operator!=(const DeltaRingElement& o) const { return !(*this == o); }

    static DeltaRingElement identity(long p, int N);
    static DeltaRingElement zero(long p, int N);

private:
    void check_same(const DeltaRingElement& o) const;
    long p_;
    int N_;
    mpz_class modulus_;
    std::vector<mpz_class> c_;
};

// e_j = (p-1)^{-1} sum_delta omega^{-j}(delta) [delta]
DeltaRingElement idempotent(long j, long p, int N);

} // namespace tatecoh
