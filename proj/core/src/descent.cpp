#include "tatecoh/descent.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

namespace tatecoh {

TwistCharacter tate_twist(long p, long m, int N, const mpz_class& u) {
    PadicInt uval(p, N, u);
    if (uval.value() % p != 1)
        throw ValidationError("u", "generator must be a 1-unit");
    return TwistCharacter{p, m, uval.pow(mpz_class(m))};
}

KerCoker gamma1_cohomology(const FinitePModule& M) {
    validate_module(M);
    if (!M.gamma_action) throw MissingAction("gamma action required");
    IntMat psi = *M.gamma_action;
    for (int i = 0; i < psi.rows; ++i) psi.at(i, i) -= 1;
    return endo_ker_coker(M, psi);
}

namespace {

FinitePModule trivial_module(long p) {
    return FinitePModule{p, {}, std::nullopt, std::nullopt};
}

int max_exponent(const HData& H) {
    int a = 0;
    for (int x : H.h0.orders) a = std::max(a, x);
    for (int x : H.h1.orders) a = std::max(a, x);
    return a;
}

FinitePModule piece(const FinitePModule& M, long m, const mpz_class& s, bool want_ker) {
    if (M.rank() == 0) return trivial_module(M.p);
    FinitePModule e = branch_project(M, -m);
    if (e.rank() == 0) return trivial_module(M.p);
    if (!e.gamma_action) throw MissingAction("gamma action required");
    IntMat psi = *e.gamma_action;
    for (int i = 0; i < psi.rows; ++i) psi.at(i, i) -= s;
    KerCoker kc = endo_ker_coker(e, psi);
    return want_ker ? kc.kernel : kc.cokernel;
}

} // namespace

GradedPieces twist_cohomology(const HData& H, const TwistCharacter& theta, int q,
                              bool allow_branch_zero) {
    if (q < 0 || q > 2) throw ValidationError("q", "degree must be 0, 1 or 2");
    if (!H.h2_is_zero) throw Error("inputs with nonzero h2 are not supported");
    if (H.h0.p != theta.p || H.h1.p != theta.p)
        throw PrecisionMismatch("twist and module primes differ");
    long pm1 = theta.p - 1;
    long m_red = ((theta.branch_exponent % pm1) + pm1) % pm1;
    if (m_red == 0 && !allow_branch_zero)
        throw BranchZeroUnsupported(
            "m = 0 mod p-1 sits outside the supported hypotheses");
    int guard = max_exponent(H) + 1;
    if (theta.gamma_value.precision() < guard)
        throw InsufficientPrecision("gamma value carries fewer than " +
                                    std::to_string(guard) + " digits");
    mpz_class s = unit_inverse(theta.gamma_value).value();
    long m = theta.branch_exponent;

    GradedPieces out{trivial_module(theta.p), trivial_module(theta.p)};
    switch (q) {
        case 0:
            out.ker_part = piece(H.h0, m, s, true);
            break;
        case 1:
            out.coker_part = piece(H.h0, m, s, false);
            out.ker_part = piece(H.h1, m, s, true);
            break;
        case 2:
            out.coker_part = piece(H.h1, m, s, false);
            break;
    }
    return out;
}

namespace {

struct Enumerator {
    long p;
    std::vector<long> sizes;  // p^{a_i}
    long total;

    explicit Enumerator(const FinitePModule& M) : p(M.p) {
        total = 1;
        for (int a : M.orders) {
            long s = 1;
            for (int k = 0; k < a; ++k) s *= M.p;
            sizes.push_back(s);
            total *= s;
            if (total > 200000) throw Error("module too large for the oracle");
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
    long scalar(long c, long idx) const {
        auto x = decode(idx);
        for (size_t i = 0; i < x.size(); ++i) x[i] = (x[i] * (c % sizes[i])) % sizes[i];
        return encode(x);
    }
};

// matrix reduced rowwise into long entries
struct LongMat {
    std::vector<std::vector<long>> a;

    LongMat(const IntMat& A, const Enumerator& en) {
        a.resize(A.rows, std::vector<long>(A.cols));
        for (int i = 0; i < A.rows; ++i)
            for (int j = 0; j < A.cols; ++j) {
                mpz_class v = A.at(i, j) % en.sizes[i];
                if (v < 0) v += en.sizes[i];
                a[i][j] = v.get_si();
            }
    }
    long apply(const Enumerator& en, long idx) const {
        auto x = en.decode(idx);
        std::vector<long> y(x.size());
        for (size_t i = 0; i < x.size(); ++i) {
            long acc = 0;
            for (size_t j = 0; j < x.size(); ++j)
                acc = (acc + a[i][j] % en.sizes[i] * x[j]) % en.sizes[i];
            y[i] = acc;
        }
        return en.encode(y);
    }
};

IntMat matpow_mod(const IntMat& A, const mpz_class& e, const mpz_class& mod) {
    IntMat r = IntMat::identity(A.rows), b = A;
    mpz_class k = e;
    auto red = [&](IntMat& m) {
        for (auto& x : m.a) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
    };
    red(b);
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) {
            r = r * b;
            red(r);
        }
        b = b * b;
        red(b);
        k /= 2;
    }
    return r;
}

std::vector<int> orders_from_torsion_counts(long p, const std::vector<long>& counts) {
    // counts[k] = #Q[p^k]; differences of log_p give exponent multiplicities
    std::vector<int> ms;
    for (long c : counts) {
        int e = 0;
        long t = c;
        while (t > 1) {
            if (t % p != 0) throw Error("torsion count not a p-power");
            t /= p;
            ++e;
        }
        ms.push_back(e);
    }
    std::vector<int> orders;
    for (size_t k = 1; k < ms.size(); ++k) {
        int ck = ms[k] - ms[k - 1];
        int next = (k + 1 < ms.size()) ? ms[k + 1] - ms[k] : 0;
        for (int i = 0; i < ck - next; ++i) orders.push_back(static_cast<int>(k));
    }
    std::sort(orders.rbegin(), orders.rend());
    return orders;
}

} // namespace

int sufficient_level(const FinitePModule& M, const TwistCharacter& theta) {
    validate_module(M);
    if (!M.gamma_action) throw MissingAction("gamma action required");
    int a1 = M.orders.empty() ? 0 : M.orders[0];
    mpz_class mod = pow_pN(M.p, std::max(a1, 1));
    IntMat Ag = *M.gamma_action;
    for (auto& x : Ag.a) x *= theta.gamma_value.value();
    for (int e = 0; e <= 4 * a1 + 4; ++e) {
        if (endo_equal(M, matpow_mod(Ag, pow_pN(M.p, e), mod),
                       IntMat::identity(M.rank())))
            return e + a1;
    }
    throw Error("twisted gamma action has unexpected order");
}

BruteH01 brute_force_h01(const FinitePModule& M, const TwistCharacter& theta,
                         int level_n) {
    validate_module(M);
    if (!M.delta_action || !M.gamma_action)
        throw MissingAction("oracle needs both actions");
    long p = M.p;
    int a1 = M.orders.empty() ? 1 : M.orders[0];
    if (theta.gamma_value.precision() < a1)
        throw InsufficientPrecision("gamma value carries too few digits");
    mpz_class mod = pow_pN(p, a1);

    // twisted generator actions
    mpz_class wm = teichmuller(smallest_primitive_root(p), p, a1)
                       .pow(mpz_class(theta.branch_exponent))
                       .value();
    IntMat Ad = *M.delta_action;
    for (auto& x : Ad.a) x = (x * wm) % mod;
    IntMat Ag = *M.gamma_action;
    for (auto& x : Ag.a) x = (x * theta.gamma_value.value()) % mod;

    // the level must kill the twisted norm: gamma'^{p^n} = 1 and N_gamma = 0
    mpz_class pn = pow_pN(p, level_n);
    if (!endo_equal(M, matpow_mod(Ag, pn, mod), IntMat::identity(M.rank())))
        throw LevelTooSmall("twisted gamma order exceeds the level");
    // N_gamma = sum of gamma'^k: with gamma'^{p^e} = 1, the sum collapses to
    // p^{n-e} * (orbit sum); vanishes once p^{n-e} reaches the exponent
    IntMat Ng(M.rank(), M.rank());
    {
        int e = 0;
        while (!endo_equal(M, matpow_mod(Ag, pow_pN(p, e), mod),
                           IntMat::identity(M.rank())))
            ++e;
        IntMat orbit(M.rank(), M.rank());
        IntMat g = IntMat::identity(M.rank());
        mpz_class pe = pow_pN(p, e);
        for (mpz_class k = 0; k < pe; ++k) {
            orbit = orbit + g;
            g = g * Ag;
            for (auto& x : g.a) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
            for (auto& x : orbit.a)
                mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
        }
        mpz_class rep = pn / pe;
        Ng = orbit;
        for (auto& x : Ng.a) x = (x * rep) % mod;
    }
    if (!endo_equal(M, Ng, IntMat(M.rank(), M.rank())))
        throw LevelTooSmall("norm map does not vanish at this level");

    Enumerator en(M);
    LongMat ad(Ad, en), ag(Ag, en);

    // N_delta as a matrix
    IntMat NdM(M.rank(), M.rank());
    {
        IntMat g = IntMat::identity(M.rank());
        for (long k = 0; k < p - 1; ++k) {
            NdM = NdM + g;
            g = g * Ad;
            for (auto& x : g.a) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
            for (auto& x : NdM.a) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
        }
    }
    LongMat nd(NdM, en);

    // H^0: joint fixed points
    std::vector<long> h0;
    for (long x = 0; x < en.total; ++x)
        if (ad.apply(en, x) == x && ag.apply(en, x) == x) h0.push_back(x);
    std::vector<long> h0counts{1};
    {
        long pk = 1;
        for (int k = 1; k <= a1 + 1; ++k) {
            pk *= p;
            long c = 0;
            for (long x : h0)
                if (en.scalar(pk, x) == 0) ++c;
            h0counts.push_back(c);
            if (c == static_cast<long>(h0.size())) break;
        }
    }

    // H^1 via cocycle pairs (x, y) = (c(delta), c(gamma))
    std::vector<long> ker_nd;
    for (long x = 0; x < en.total; ++x)
        if (nd.apply(en, x) == 0) ker_nd.push_back(x);

    auto dminus1 = [&](long x) {
        long ax = ad.apply(en, x);
        auto v = en.decode(ax), w = en.decode(x);
        for (size_t i = 0; i < v.size(); ++i)
            v[i] = (v[i] - w[i] % en.sizes[i] + en.sizes[i]) % en.sizes[i];
        return en.encode(v);
    };
    auto gminus1 = [&](long x) {
        long ax = ag.apply(en, x);
        auto v = en.decode(ax), w = en.decode(x);
        for (size_t i = 0; i < v.size(); ++i)
            v[i] = (v[i] - w[i] % en.sizes[i] + en.sizes[i]) % en.sizes[i];
        return en.encode(v);
    };

    std::unordered_map<long, long> d_image_pre;  // (delta'-1)y -> one y
    std::vector<long> Dker;                      // ker(delta'-1)
    for (long y = 0; y < en.total; ++y) {
        long im = dminus1(y);
        d_image_pre.emplace(im, y);
        if (im == 0) Dker.push_back(y);
    }

    std::vector<std::pair<long, long>> zgens;  // (x, base y) per admissible x
    for (long x : ker_nd) {
        auto it = d_image_pre.find(gminus1(x));
        if (it != d_image_pre.end()) zgens.emplace_back(x, it->second);
    }

    std::unordered_set<uint64_t> b1;
    for (long w = 0; w < en.total; ++w)
        b1.insert((static_cast<uint64_t>(dminus1(w)) << 32) |
                  static_cast<uint64_t>(gminus1(w)));

    auto addidx = [&](long a, long b) {
        auto v = en.decode(a), w = en.decode(b);
        for (size_t i = 0; i < v.size(); ++i) v[i] = (v[i] + w[i]) % en.sizes[i];
        return en.encode(v);
    };

    uint64_t z1 = static_cast<uint64_t>(zgens.size()) * Dker.size();
    if (z1 > 6000000ULL) throw Error("cocycle set too large for the oracle");

    std::vector<long> h1counts{1};
    long b1size = static_cast<long>(b1.size());
    long pk = 1;
    for (int k = 1; k <= a1 + 2; ++k) {
        pk *= p;
        long hits = 0;
        for (auto [x, y0] : zgens)
            for (long d : Dker) {
                long y = addidx(y0, d);
                uint64_t key = (static_cast<uint64_t>(en.scalar(pk, x)) << 32) |
                               static_cast<uint64_t>(en.scalar(pk, y));
                if (b1.count(key)) ++hits;
            }
        if (hits % b1size != 0) throw Error("cocycle torsion count inconsistent");
        h1counts.push_back(hits / b1size);
        if (static_cast<uint64_t>(hits) == z1) break;
    }

    BruteH01 out;
    out.h0_orders = orders_from_torsion_counts(p, h0counts);
    out.h1_orders = orders_from_torsion_counts(p, h1counts);
    return out;
}

} // namespace tatecoh
