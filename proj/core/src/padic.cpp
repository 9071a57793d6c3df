#include "tatecoh/padic.hpp"

#include <vector>

namespace tatecoh {

mpz_class pow_ui(const mpz_class& base, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

mpz_class pow_pN(long p, int N) {
    return pow_ui(mpz_class(p), static_cast<unsigned long>(N));
}

static bool is_prime(long p) {
    if (p < 2) return false;
    mpz_class z(p);
    return mpz_probab_prime_p(z.get_mpz_t(), 30) != 0;
}

PadicInt::PadicInt(long p, int N, const mpz_class& value) : p_(p), N_(N) {
    if (!is_prime(p)) throw ValidationError("p", "not prime: " + std::to_string(p));
    if (N < 1) throw ValidationError("N", "precision must be >= 1");
    modulus_ = pow_pN(p, N);
    mpz_mod(value_.get_mpz_t(), value.get_mpz_t(), modulus_.get_mpz_t());
}

void PadicInt::check_same(const PadicInt& o) const {
    if (p_ != o.p_ || N_ != o.N_)
        throw PrecisionMismatch("operands carry different (p, N) contexts");
}

bool PadicInt::is_unit() const {
    return p_ != 0 && value_ % p_ != 0;
}

int PadicInt::valuation() const {
    if (value_ == 0) return N_;
    int v = 0;
    mpz_class t = value_;
    while (t % p_ == 0) {
        t /= p_;
        ++v;
    }
    return v;
}

PadicInt PadicInt::operator+(const PadicInt& o) const {
    check_same(o);
    return PadicInt(p_, N_, value_ + o.value_);
}

PadicInt PadicInt::operator-(const PadicInt& o) const {
    check_same(o);
    return PadicInt(p_, N_, value_ - o.value_);
}

PadicInt PadicInt::operator*(const PadicInt& o) const {
    check_same(o);
    return PadicInt(p_, N_, value_ * o.value_);
}

PadicInt PadicInt::operator-() const {
    return PadicInt(p_, N_, -value_);
}

bool PadicInt::operator==(const PadicInt& o) const {
    return p_ == o.p_ && N_ == o.N_ && value_ == o.value_;
}

PadicInt PadicInt::pow(const mpz_class& e) const {
    mpz_class base = value_;
    mpz_class exp = e;
    if (exp < 0) {
        base = unit_inverse(*this).value();
        exp = -exp;
    }
    mpz_class r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus_.get_mpz_t());
    return PadicInt(p_, N_, r);
}

PadicInt PadicInt::reduce(int N_smaller) const {
    if (N_smaller < 1 || N_smaller > N_)
        throw PrecisionMismatch("reduce target outside [1, N]");
    return PadicInt(p_, N_smaller, value_);
}

PadicInt unit_inverse(const PadicInt& a) {
    if (!a.is_unit()) throw NonUnit("p divides " + a.str());
    mpz_class r;
    mpz_invert(r.get_mpz_t(), a.value().get_mpz_t(), a.modulus().get_mpz_t());
    return PadicInt(a.p(), a.precision(), r);
}

PadicInt teichmuller(const PadicInt& a) {
    if (!a.is_unit()) throw NotCoprime("p divides " + a.str());
    // x -> x^p gains one digit of stability per step; N steps always suffice.
    mpz_class x = a.value();
    const mpz_class& m = a.modulus();
    for (int i = 0; i <= a.precision(); ++i) {
        mpz_class y;
        mpz_powm_ui(y.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(a.p()),
                    m.get_mpz_t());
        if (y == x) break;
        x = y;
    }
    return PadicInt(a.p(), a.precision(), x);
}

PadicInt teichmuller(long a, long p, int N) {
    return teichmuller(PadicInt(p, N, a));
}

UnitDecomposition unit_decompose(const PadicInt& a) {
    if (!a.is_unit()) throw NonUnit("p divides " + a.str());
    PadicInt t = teichmuller(a);
    PadicInt principal = a * unit_inverse(t);
    return UnitDecomposition{t, principal};
}

static int ilog(long p, long k) {
    int e = 0;
    while (k >= p) {
        k /= p;
        ++e;
    }
    return e;
}

PadicInt padic_log(const PadicInt& x) {
    long p = x.p();
    int N = x.precision();
    if (p == 2) throw Error("padic_log requires p odd");
    if (x.value() % p != 1) throw NonUnit("not a 1-unit: " + x.str());

    // term k has valuation >= k - v_p(k); stop once that floor reaches N
    long maxk = 1;
    while (maxk - ilog(p, maxk) < N) ++maxk;
    int guard = ilog(p, maxk) + 1;
    mpz_class big = pow_pN(p, N + guard);

    mpz_class t = x.value() - 1;
    mpz_class tk = 1, acc = 0;
    for (long k = 1; k <= maxk; ++k) {
        tk = (tk * t) % big;
        long k1 = k;
        int v = 0;
        while (k1 % p == 0) {
            k1 /= p;
            ++v;
        }
        mpz_class term = tk / pow_pN(p, v);  // exact: v_p(t^k) >= k >= v
        mpz_class inv;
        mpz_class k1z(k1);
        mpz_invert(inv.get_mpz_t(), k1z.get_mpz_t(), big.get_mpz_t());
        term = (term * inv) % big;
        if (k % 2 == 0) term = -term;
        acc = (acc + term) % big;
    }
    return PadicInt(p, N, acc);
}

mpz_class discrete_log_unit(const mpz_class& a, const mpz_class& u, long p, int n) {
    int K = n + 1;
    PadicInt av(p, K, a);
    PadicInt uv(p, K, u);
    if (!av.is_unit()) throw NonUnit("p divides a");
    if (uv.value() % p != 1 || ((uv.value() - 1) / p) % p == 0)
        throw Error("u is not a topological generator of 1-units");

    PadicInt principal = unit_decompose(av).principal;
    mpz_class la = padic_log(principal).value();
    mpz_class lu = padic_log(uv).value();
    mpz_class pn = pow_pN(p, n);
    mpz_class alpha = (la / p) % pn;
    mpz_class beta = (lu / p) % pn;
    mpz_class beta_inv;
    mpz_invert(beta_inv.get_mpz_t(), beta.get_mpz_t(), pn.get_mpz_t());
    mpz_class iota = (alpha * beta_inv) % pn;

    mpz_class check;
    mpz_powm(check.get_mpz_t(), uv.value().get_mpz_t(), iota.get_mpz_t(),
             av.modulus().get_mpz_t());
    if (check != principal.value())
        throw Error("discrete log verification failed");
    return iota;
}

long smallest_primitive_root(long p) {
    if (p == 2) return 1;
    std::vector<long> qs;
    long m = p - 1;
    for (long q = 2; q * q <= m; ++q) {
        if (m % q == 0) {
            qs.push_back(q);
            while (m % q == 0) m /= q;
        }
    }
    if (m > 1) qs.push_back(m);

    for (long g = 2; g < p; ++g) {
        bool ok = true;
        for (long q : qs) {
            mpz_class r;
            mpz_class base(g), mod(p), e((p - 1) / q);
            mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
            if (r == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw Error("no primitive root found");
}

} // namespace tatecoh
