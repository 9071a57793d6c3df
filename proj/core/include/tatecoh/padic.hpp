#pragma once

// Arithmetic in Z/p^N viewed as a truncation of Z_p.  Every value carries its
// (p, N) context; mixing contexts is an error, never a silent coercion.

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "tatecoh/errors.hpp"

namespace tatecoh {

mpz_class pow_ui(const mpz_class& base, unsigned long e);
mpz_class pow_pN(long p, int N);

class PadicInt {
public:
    PadicInt() : p_(0), N_(0), value_(0), modulus_(1) {}
    PadicInt(long p, int N, const mpz_class& value);
    PadicInt(long p, int N, long value) : PadicInt(p, N, mpz_class(value)) {}

    long p() const { return p_; }
    int precision() const { return N_; }
    const mpz_class& value() const { return value_; }
    const mpz_class& modulus() const { return modulus_; }

    bool is_zero() const { return value_ == 0; }
    bool is_unit() const;

    // v_p truncated to the window: returns N for the zero residue, meaning ">= N".
    int valuation() const;

    PadicInt operator+(const PadicInt& o) const;
    PadicInt operator-(const PadicInt& o) const;
    PadicInt operator*(const PadicInt& o) const;
    PadicInt operator-() const;
    bool operator==(const PadicInt& o) const;
    bool operator!=(const PadicInt& o) const { return !(*this == o); }

    PadicInt pow(const mpz_class& e) const;  // negative e inverts first
    PadicInt reduce(int N_smaller) const;

    std::string str() const { return value_.get_str(); }

private:
    void check_same(const PadicInt& o) const;
    long p_;
    int N_;
    mpz_class value_;
    mpz_class modulus_;
};

// Multiplicative inverse of a unit.  Throws NonUnit when p | a.
PadicInt unit_inverse(const PadicInt& a);

// Teichmuller lift: the unique (p-1)-st root of unity congruent to a mod p,
// reached by iterating x -> x^p (at most N steps to stabilize mod p^N).
// Throws NotCoprime when p | a.
PadicInt teichmuller(long a, long p, int N);
PadicInt teichmuller(const PadicInt& a);

struct UnitDecomposition {
    PadicInt teich;      // omega(a)
    PadicInt principal;  // <a> = a / omega(a), congruent to 1 mod p
};

// a = omega(a) * <a> for a unit a.  Throws NonUnit otherwise.
UnitDecomposition unit_decompose(const PadicInt& a);

// log of a 1-unit (x = 1 mod p), by the alternating series; exact mod p^N.
// Requires p odd.  Throws NonUnit when x is not a 1-unit.
PadicInt padic_log(const PadicInt& x);

// Exponent iota in [0, p^n) with u^iota = <a> mod p^{n+1}, for a a unit mod
// p^{n+1} and u = 1 mod p a topological generator (u != 1 mod p^2).  Computed
// as a log ratio, then verified by exact exponentiation.
mpz_class discrete_log_unit(const mpz_class& a, const mpz_class& u, long p, int n);

// Smallest primitive root mod p (delta_0 in branch constructions).
long smallest_primitive_root(long p);

} // namespace tatecoh
