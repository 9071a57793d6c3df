#pragma once

// Independent mini-implementations used to cross-check the library. Slow and
// naive on purpose: a different algorithm for every value we assert.

#include <gmpxx.h>

#include <random>
#include <unordered_set>
#include <vector>

#include "tatecoh/finite_module.hpp"
#include "tatecoh/padic.hpp"

namespace oracles {

using tatecoh::FinitePModule;
using tatecoh::IntMat;

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(0x7a7ec0517e57ULL);
    return g;
}

inline long rnd(long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    return d(rng());
}

inline mpz_class pow_l(long p, int e) {
    mpz_class m = 1;
    for (int i = 0; i < e; ++i) m *= p;
    return m;
}

// inverse by extended Euclid; no mpz_invert
inline mpz_class egcd_inverse(const mpz_class& a, const mpz_class& mod) {
    mpz_class old_r = ((a % mod) + mod) % mod, r = mod;
    mpz_class old_s = 1, s = 0;
    while (r != 0) {
        mpz_class q = old_r / r;
        mpz_class t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    return ((old_s % mod) + mod) % mod;  // old_r must be 1, caller's burden
}

// Teichmuller digit by Newton steps on x^{p-1} - 1, lifting one digit at a
// time; independent of the x -> x^p iteration used by the library
inline mpz_class teich_hensel(long a, long p, int N) {
    mpz_class x = ((a % p) + p) % p;
    mpz_class pe = p;
    for (int e = 1; e < N; ++e) {
        mpz_class next = pe * p;
        mpz_class fx;
        mpz_powm_ui(fx.get_mpz_t(), x.get_mpz_t(), p - 1, next.get_mpz_t());
        fx = (fx - 1) % next;
        if (fx < 0) fx += next;
        mpz_class dfx;
        mpz_powm_ui(dfx.get_mpz_t(), x.get_mpz_t(), p - 2, next.get_mpz_t());
        dfx = (dfx * (p - 1)) % next;
        x = (x - fx * egcd_inverse(dfx, next)) % next;
        if (x < 0) x += next;
        pe = next;
    }
    return x;
}

// ---- element-level group oracle -------------------------------------------

struct Elements {
    long p;
    std::vector<long> sizes;
    long total = 1;

    explicit Elements(const FinitePModule& M) : p(M.p) {
        for (int a : M.orders) {
            long s = 1;
            for (int k = 0; k < a; ++k) s *= M.p;
            sizes.push_back(s);
            total *= s;
        }
    }
    std::vector<long> decode(long idx) const {
        std::vector<long> x(sizes.size());
        for (size_t i = 0; i < sizes.size(); ++i) {
            x[i] = idx % sizes[i];
            idx /= sizes[i];
        }
        return x;
    }
    long encode(const std::vector<long>& x) const {
        long idx = 0;
        for (size_t i = sizes.size(); i-- > 0;) idx = idx * sizes[i] + x[i];
        return idx;
    }
    long apply(const IntMat& A, long idx) const {
        auto x = decode(idx);
        std::vector<long> y(x.size());
        for (size_t i = 0; i < x.size(); ++i) {
            mpz_class acc = 0;
            for (size_t j = 0; j < x.size(); ++j) acc += A.at(int(i), int(j)) * x[j];
            acc %= sizes[i];
            if (acc < 0) acc += sizes[i];
            y[i] = acc.get_si();
        }
        return encode(y);
    }
    long scale(long c, long idx) const {
        auto x = decode(idx);
        for (size_t i = 0; i < x.size(); ++i) x[i] = (x[i] * (c % sizes[i])) % sizes[i];
        return encode(x);
    }
};

// invariant exponents from annihilator counts m_k = #Q[p^k]
inline std::vector<int> orders_from_annihilators(long p, const std::vector<long>& mk) {
    std::vector<int> logs;
    for (long c : mk) {
        int e = 0;
        while (c > 1) {
            c /= p;
            ++e;
        }
        logs.push_back(e);
    }
    std::vector<int> out;
    for (size_t k = 1; k < logs.size(); ++k) {
        int here = logs[k] - logs[k - 1];
        int next = (k + 1 < logs.size()) ? logs[k + 1] - logs[k] : 0;
        for (int i = 0; i < here - next; ++i) out.push_back(static_cast<int>(k));
    }
    std::sort(out.rbegin(), out.rend());
    return out;
}

inline std::vector<int> kernel_orders_oracle(const FinitePModule& M, const IntMat& psi) {
    Elements en(M);
    std::vector<long> members;
    for (long x = 0; x < en.total; ++x)
        if (en.apply(psi, x) == 0) members.push_back(x);
    std::vector<long> mk{1};
    long pk = 1;
    int a1 = M.orders.empty() ? 0 : M.orders[0];
    for (int k = 1; k <= a1; ++k) {
        pk *= M.p;
        long c = 0;
        for (long x : members)
            if (en.scale(pk, x) == 0) ++c;
        mk.push_back(c);
    }
    mk.push_back(static_cast<long>(members.size()));
    return orders_from_annihilators(M.p, mk);
}

inline std::vector<int> cokernel_orders_oracle(const FinitePModule& M, const IntMat& psi) {
    Elements en(M);
    std::unordered_set<long> image;
    for (long x = 0; x < en.total; ++x) image.insert(en.apply(psi, x));
    const long isz = static_cast<long>(image.size());
    std::vector<long> mk{1};
    long pk = 1;
    int a1 = M.orders.empty() ? 0 : M.orders[0];
    for (int k = 1; k <= a1; ++k) {
        pk *= M.p;
        long c = 0;
        for (long x = 0; x < en.total; ++x)
            if (image.count(en.scale(pk, x))) ++c;
        mk.push_back(c / isz);
    }
    mk.push_back(en.total / isz);
    return orders_from_annihilators(M.p, mk);
}

// ---- random generators ----------------------------------------------------

inline std::vector<int> random_orders(int max_rank, int max_exp, int budget = 6) {
    int r = static_cast<int>(rnd(1, max_rank));
    std::vector<int> orders;
    int spent = 0;
    for (int i = 0; i < r; ++i) {
        int a = static_cast<int>(rnd(1, max_exp));
        if (spent + a > budget) a = 1;
        spent += a;
        orders.push_back(a);
    }
    std::sort(orders.rbegin(), orders.rend());
    return orders;
}

// random well-defined endomorphism: entry (i, j) divisible by p^{(a_i-a_j)+}
inline IntMat random_endo(const FinitePModule& M) {
    int r = M.rank();
    IntMat A(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            int gap = std::max(0, M.orders[i] - M.orders[j]);
            A.at(i, j) = pow_l(M.p, gap) * rnd(0, 2 * M.p * M.p);
        }
    return A;
}

// unimodular conjugator with the filtration pattern, built from integer
// shears so that U Uinv = 1 exactly over Z
inline void random_conjugator(const FinitePModule& M, IntMat& U, IntMat& Uinv) {
    int r = M.rank();
    U = IntMat::identity(r);
    Uinv = IntMat::identity(r);
    for (int t = 0; t < 2 * r; ++t) {
        int i = static_cast<int>(rnd(0, r - 1));
        int j = static_cast<int>(rnd(0, r - 1));
        if (i == j) continue;
        mpz_class c = pow_l(M.p, std::max(0, M.orders[i] - M.orders[j])) * rnd(0, 4);
        IntMat E = IntMat::identity(r), Einv = IntMat::identity(r);
        E.at(i, j) = c;
        Einv.at(i, j) = -c;
        U = U * E;
        Uinv = Einv * Uinv;
    }
}

// module with commuting delta/gamma actions: conjugated diagonals, delta
// eigenvalues Teichmuller, gamma eigenvalues powers of u
inline FinitePModule random_acted_module(long p, const mpz_class& u, int max_rank = 3,
                                         int max_exp = 3) {
    FinitePModule M;
    M.p = p;
    M.orders = random_orders(max_rank, max_exp);
    int r = M.rank();
    int a1 = M.orders[0];
    mpz_class mod = pow_l(p, a1);

    IntMat D(r, r), G(r, r);
    for (int i = 0; i < r; ++i) {
        D.at(i, i) = tatecoh::teichmuller(rnd(1, p - 1), p, a1).value();
        mpz_class e(rnd(0, 3 * p));
        mpz_powm(G.at(i, i).get_mpz_t(), u.get_mpz_t(), e.get_mpz_t(),
                 mod.get_mpz_t());
    }
    IntMat U, Uinv;
    random_conjugator(M, U, Uinv);
    IntMat Ad = U * D * Uinv, Ag = U * G * Uinv;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            mpz_class mi = pow_l(p, M.orders[i]);
            mpz_mod(Ad.at(i, j).get_mpz_t(), Ad.at(i, j).get_mpz_t(), mi.get_mpz_t());
            mpz_mod(Ag.at(i, j).get_mpz_t(), Ag.at(i, j).get_mpz_t(), mi.get_mpz_t());
        }
    M.delta_action = Ad;
    M.gamma_action = Ag;
    return M;
}

} // namespace oracles
