#pragma once

// Truncated Iwasawa algebra: Z_p[[T]] mod (p^N, T^M).  The variable is tied to
// the tower by gamma^{-1} -> 1 + T, so the level-m specialization point is
// u^{-m} - 1.

#include <gmpxx.h>

#include <string>
#include <vector>

#include "tatecoh/errors.hpp"
#include "tatecoh/padic.hpp"

namespace tatecoh {

class PowerSeries {
public:
    PowerSeries() : p_(0), N_(0), M_(0) {}
    PowerSeries(long p, int N, int M);
    PowerSeries(long p, int N, int M, std::vector<mpz_class> coeffs);

    long p() const { return p_; }
    int precision() const { return N_; }
    int truncation() const { return M_; }
    const mpz_class& operator[](int k) const { return coeffs_[k]; }
    void set(int k, const mpz_class& c);

    bool is_zero() const;

    PowerSeries operator+(const PowerSeries& o) const;
    PowerSeries operator-(const PowerSeries& o) const;
    PowerSeries operator*(const PowerSeries& o) const;
    bool operator==(const PowerSeries& o) const;
    bool operator!=(const PowerSeries& o) const { return !(*this == o); }

    PowerSeries scalar_mul(const mpz_class& c) const;
    // multiplicative inverse; constant term must be a unit
    PowerSeries inverse() const;
    PowerSeries reduce(int N_smaller, int M_smaller) const;

    static PowerSeries one(long p, int N, int M);
    static PowerSeries monomial(long p, int N, int M, int k, const mpz_class& c);

private:
    void check_same(const PowerSeries& o) const;
    long p_;
    int N_, M_;
    std::vector<mpz_class> coeffs_;
    mpz_class modulus_;
};

struct MuLambda {
    int mu;
    int lambda;
};

// mu = min coefficient valuation, lambda = first index attaining it.
// Throws InsufficientPrecision when f = 0 mod (p^N, T^M).
MuLambda mu_lambda(const PowerSeries& f);

struct WeierstrassData {
    int mu;
    int lambda;
    PowerSeries distinguished;  // monic degree lambda, lower coefficients in pZ_p
    PowerSeries unit;
    // p^mu * unit * distinguished = f mod (p^{N-mu}, T^M)
};

WeierstrassData weierstrass_prepare(const PowerSeries& f);

struct DivisionResult {
    PowerSeries quotient;
    PowerSeries remainder;  // degree < deg P
};

// Division by a distinguished polynomial P (monic degree d stored in the same
// ring, coefficients above d zero).  Exact as polynomials: q*P + r = g.
DivisionResult divide_by_distinguished(const PowerSeries& g, const PowerSeries& P,
                                       int degree);

// Horner evaluation at a point of the maximal ideal; effective precision is
// min(N, M) digits and the result is reported at that precision.
PadicInt evaluate_at(const PowerSeries& f, const PadicInt& c);

struct OrdAtResult {
    int order;
    bool certified;  // next remainder has valuation < N - order
};

// Largest k with (T - c)^k | f at working precision, by repeated synthetic
// division.  Requires v(c) >= 1 and f != 0.
OrdAtResult ord_at(const PowerSeries& f, const PadicInt& c);

// T - c as a degree-1 distinguished polynomial; v(c) >= 1 required.
PowerSeries linear_distinguished(long p, int N, int M, const PadicInt& c);

// serialization: versioned header line then one base-10 coefficient per line
std::string serialize_series(const PowerSeries& f, const mpz_class& u,
                             const std::string& convention_id);
struct SeriesFile {
    PowerSeries series;
    mpz_class u;
    std::string convention_id;
};
SeriesFile deserialize_series(const std::string& text);

} // namespace tatecoh
