#include "tatecoh/delta_ring.hpp"

namespace tatecoh {

DeltaRingElement::DeltaRingElement(long p, int N) : p_(p), N_(N) {
    PadicInt check(p, N, 0);
    modulus_ = pow_pN(p, N);
    c_.assign(static_cast<size_t>(p - 1), mpz_class(0));
}

void DeltaRingElement::set_coeff(long delta, const mpz_class& v) {
    mpz_mod(c_[delta - 1].get_mpz_t(), v.get_mpz_t(), modulus_.get_mpz_t());
}

void DeltaRingElement::check_same(const DeltaRingElement& o) const {
    if (p_ != o.p_ || N_ != o.N_)
        throw PrecisionMismatch("operands carry different (p, N) contexts");
}

DeltaRingElement DeltaRingElement::operator+(const DeltaRingElement& o) const {
    check_same(o);
    DeltaRingElement r(p_, N_);
    for (long d = 1; d < p_; ++d) r.set_coeff(d, c_[d - 1] + o.c_[d - 1]);
    return r;
}

DeltaRingElement DeltaRingElement::operator-(const DeltaRingElement& o) const {
    check_same(o);
    DeltaRingElement r(p_, N_);
    for (long d = 1; d < p_; ++d) r.set_coeff(d, c_[d - 1] - o.c_[d - 1]);
    return r;
}

DeltaRingElement DeltaRingElement::operator*(const DeltaRingElement& o) const {
    check_same(o);
    DeltaRingElement r(p_, N_);
    for (long a = 1; a < p_; ++a) {
        if (c_[a - 1] == 0) continue;
        for (long b = 1; b < p_; ++b) {
            if (o.c_[b - 1] == 0) continue;
            long ab = (a * b) % p_;
            r.c_[ab - 1] += c_[a - 1] * o.c_[b - 1];
        }
    }
    for (long d = 1; d < p_; ++d) r.set_coeff(d, r.c_[d - 1]);
    return r;
}

bool DeltaRingElement::operator==(const DeltaRingElement& o) const {
    return p_ == o.p_ && N_ == o.N_ && c_ == o.c_;
}

DeltaRingElement DeltaRingElement::identity(long p, int N) {
    DeltaRingElement r(p, N);
    r.set_coeff(1, 1);
    return r;
}

DeltaRingElement DeltaRingElement::zero(long p, int N) {
    return DeltaRingElement(p, N);
}

DeltaRingElement idempotent(long j, long p, int N) {
    DeltaRingElement e(p, N);
    PadicInt inv_order = unit_inverse(PadicInt(p, N, p - 1));
    for (long d = 1; d < p; ++d) {
        PadicInt w = teichmuller(d, p, N).pow(mpz_class(-j));
        e.set_coeff(d, inv_order.value() * w.value());
    }
    return e;
}

} // namespace tatecoh
