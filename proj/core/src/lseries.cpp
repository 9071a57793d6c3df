#include "tatecoh/lseries.hpp"

#include <algorithm>
#include <cstdint>
#include <tuple>
#include <vector>

namespace tatecoh {

namespace {

std::vector<mpq_class>& bernoulli_cache() {
    static std::vector<mpq_class> cache{mpq_class(1)};
    return cache;
}

} // namespace

mpq_class bernoulli(int n) {
    if (n < 0) throw ValidationError("n", "negative Bernoulli index");
    auto& B = bernoulli_cache();
    // B_m = -1/(m+1) * sum_{k<m} C(m+1, k) B_k
    while (static_cast<int>(B.size()) <= n) {
        int m = static_cast<int>(B.size());
        mpq_class s = 0;
        mpz_class binom = 1;  // C(m+1, k), updated incrementally
        for (int k = 0; k < m; ++k) {
            s += mpq_class(binom) * B[k];
            binom = binom * (m + 1 - k) / (k + 1);
        }
        mpq_class val = -s / (m + 1);
        val.canonicalize();
        B.push_back(val);
    }
    return B[n];
}

PadicInt lp_value(long p, long j, long n, int N) {
    long pm1 = p - 1;
    long j_red = ((j % pm1) + pm1) % pm1;
    if (j_red % 2 != 0) throw OddBranch("branch exponent must be even");
    if (n < 1) throw ValidationError("n", "interpolation index must be >= 1");
    if (((n - j_red) % pm1 + pm1) % pm1 != 0)
        throw BranchMismatch("n = " + std::to_string(n) + " is not " +
                             std::to_string(j_red) + " mod p-1");
    mpq_class b = bernoulli(static_cast<int>(n));
    mpq_class val = -(1 - mpq_class(pow_pN(p, static_cast<int>(n - 1)))) * b / n;
    val.canonicalize();
    mpz_class mod = pow_pN(p, N);
    if (val.get_den() % p == 0)
        throw NonIntegralResult("denominator divisible by p");
    mpz_class den_inv;
    mpz_invert(den_inv.get_mpz_t(), val.get_den().get_mpz_t(), mod.get_mpz_t());
    return PadicInt(p, N, val.get_num() * den_inv);
}

std::string Convention::id() const {
    std::string s = "eps";
    s += (eps > 0 ? "p1" : "m1");
    s += "eta";
    s += (eta > 0 ? "p1" : "m1");
    return s;
}

std::array<Convention, 4> all_conventions() {
    return {Convention{+1, +1}, Convention{+1, -1}, Convention{-1, +1},
            Convention{-1, -1}};
}

int level_floor(long p, int M) {
    mpz_class bound = mpz_class(p) * M;
    int n = 1;
    while (pow_pN(p, n) < bound) ++n;
    return n;
}

int stabilization_digits(long p, int M, int level_n) {
    int e = 0;
    while (pow_pN(p, e + 1) <= M - 1) ++e;
    return std::max(1, level_n - e);
}

namespace {

bool fits_u64(long p, int K) {
    mpz_class lim("9223372036854775807");
    return pow_pN(p, K) <= lim;
}

uint64_t mulmod64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t to_u64(const mpz_class& z) { return mpz_get_ui(z.get_mpz_t()); }

long normalize_branch(long p, long j) {
    long pm1 = p - 1;
    long j_red = ((j % pm1) + pm1) % pm1;
    if (j_red % 2 != 0) throw OddBranch("branch exponent must be even");
    if (j_red == 0) throw BranchZero("zero branch has no series");
    return j_red;
}

void check_generator(long p, int K, const mpz_class& u) {
    PadicInt uv(p, std::max(K, 2), u);
    if (uv.value() % p != 1 || ((uv.value() - 1) / p) % p == 0)
        throw ValidationError("u", "generator must be 1 mod p and not 1 mod p^2");
}

// acc[iota] = sum_c rep(omega(c) u^iota mod p^{n+1}) omega^{j-1}(c) mod p^K
std::vector<mpz_class> level_sum_mpz(long p, long j_red, int n, int K,
                                     const mpz_class& u) {
    mpz_class P1 = pow_pN(p, n + 1), PK = pow_pN(p, K);
    long count = 1;
    for (int i = 0; i < n; ++i) count *= p;
    std::vector<mpz_class> acc(count, mpz_class(0));
    mpz_class u_mod = u % P1;
    for (long c = 1; c < p; ++c) {
        mpz_class tc = teichmuller(c, p, n + 1).value();
        mpz_class wc = teichmuller(c, p, K).pow(mpz_class(j_red - 1)).value();
        mpz_class a = tc;
        for (long i = 0; i < count; ++i) {
            acc[i] = (acc[i] + a * wc) % PK;
            a = (a * u_mod) % P1;
        }
    }
    return acc;
}

std::vector<uint64_t> level_sum_u64(long p, long j_red, int n, int K,
                                    const mpz_class& u) {
    uint64_t P1 = to_u64(pow_pN(p, n + 1));
    uint64_t PK = to_u64(pow_pN(p, K));
    long count = 1;
    for (int i = 0; i < n; ++i) count *= p;
    std::vector<uint64_t> acc(count, 0);
    uint64_t u_mod = to_u64(u % mpz_class(pow_pN(p, n + 1)));
    for (long c = 1; c < p; ++c) {
        uint64_t tc = to_u64(teichmuller(c, p, n + 1).value());
        uint64_t wc = to_u64(teichmuller(c, p, K).pow(mpz_class(j_red - 1)).value());
        uint64_t a = tc;
        for (long i = 0; i < count; ++i) {
            acc[i] = (acc[i] + mulmod64(a % PK, wc, PK)) % PK;
            a = mulmod64(a, u_mod, P1);
        }
    }
    return acc;
}

// weights W[e], e the (1+T)-exponent: W[e] = eps * (acc[iota]/p^{n+1}) * u^{-eta*iota}
// with e = eta*iota mod p^n
std::vector<mpz_class> weights_mpz(const std::vector<mpz_class>& acc, long p, int n,
                                   int N, int eps, int eta, const mpz_class& u) {
    mpz_class P1 = pow_pN(p, n + 1), PN = pow_pN(p, N);
    long count = static_cast<long>(acc.size());
    std::vector<mpz_class> W(count);
    mpz_class step = (eta > 0) ? unit_inverse(PadicInt(p, N, u)).value() : (u % PN);
    mpz_class sh = 1;
    for (long iota = 0; iota < count; ++iota) {
        if (acc[iota] % P1 != 0)
            throw NonIntegralResult("level sum fails divisibility at exponent " +
                                    std::to_string(iota));
        mpz_class F = (acc[iota] / P1) % PN;
        F = (F * sh) % PN;
        if (eps < 0) F = (PN - F) % PN;
        long e = (eta > 0) ? iota : ((count - iota) % count);
        W[e] = F;
        sh = (sh * step) % PN;
    }
    return W;
}

std::vector<uint64_t> weights_u64(const std::vector<uint64_t>& acc, long p, int n,
                                  int N, int eps, int eta, const mpz_class& u) {
    uint64_t P1 = to_u64(pow_pN(p, n + 1));
    uint64_t PN = to_u64(pow_pN(p, N));
    long count = static_cast<long>(acc.size());
    std::vector<uint64_t> W(count);
    uint64_t step = (eta > 0) ? to_u64(unit_inverse(PadicInt(p, N, u)).value())
                              : to_u64(u % mpz_class(pow_pN(p, N)));
    uint64_t sh = 1;
    for (long iota = 0; iota < count; ++iota) {
        if (acc[iota] % P1 != 0)
            throw NonIntegralResult("level sum fails divisibility at exponent " +
                                    std::to_string(iota));
        uint64_t F = (acc[iota] / P1) % PN;
        F = mulmod64(F, sh, PN);
        if (eps < 0) F = (PN - F) % PN;
        long e = (eta > 0) ? iota : ((count - iota) % count);
        W[e] = F;
        sh = mulmod64(sh, step, PN);
    }
    return W;
}

// coeffs[k] = sum_e W[e] * C(e, k) mod p^N via one Pascal sweep
PowerSeries pascal_assemble_u64(const std::vector<uint64_t>& W, long p, int N,
                                int M) {
    uint64_t PN = to_u64(pow_pN(p, N));
    std::vector<uint64_t> row(M, 0), out(M, 0);
    row[0] = 1;
    long count = static_cast<long>(W.size());
    for (long e = 0; e < count; ++e) {
        if (W[e] != 0)
            for (int k = 0; k < M; ++k) {
                if (row[k] == 0) continue;
                out[k] = (out[k] + mulmod64(W[e], row[k], PN)) % PN;
            }
        for (int k = M - 1; k >= 1; --k) {
            row[k] += row[k - 1];
            if (row[k] >= PN) row[k] -= PN;
        }
    }
    std::vector<mpz_class> coeffs(M);
    for (int k = 0; k < M; ++k) coeffs[k] = mpz_class(static_cast<unsigned long>(out[k]));
    return PowerSeries(p, N, M, coeffs);
}

PowerSeries pascal_assemble_mpz(const std::vector<mpz_class>& W, long p, int N,
                                int M) {
    mpz_class PN = pow_pN(p, N);
    std::vector<mpz_class> row(M, mpz_class(0)), out(M, mpz_class(0));
    row[0] = 1;
    long count = static_cast<long>(W.size());
    for (long e = 0; e < count; ++e) {
        if (W[e] != 0)
            for (int k = 0; k < M; ++k) {
                if (row[k] == 0) continue;
                out[k] = (out[k] + W[e] * row[k]) % PN;
            }
        for (int k = M - 1; k >= 1; --k) {
            row[k] += row[k - 1];
            if (row[k] >= PN) row[k] -= PN;
        }
    }
    return PowerSeries(p, N, M, out);
}

PowerSeries build_candidate(long p, long j_red, int level, int N, int M,
                            const Convention& conv, const mpz_class& u) {
    int Kint = N + level + 1;
    if (fits_u64(p, Kint)) {
        auto acc = level_sum_u64(p, j_red, level, Kint, u);
        auto W = weights_u64(acc, p, level, N, conv.eps, conv.eta, u);
        return pascal_assemble_u64(W, p, N, M);
    }
    auto acc = level_sum_mpz(p, j_red, level, Kint, u);
    auto W = weights_mpz(acc, p, level, N, conv.eps, conv.eta, u);
    return pascal_assemble_mpz(W, p, N, M);
}

// all four candidates from one shared level sum
std::array<PowerSeries, 4> build_all_candidates(long p, long j_red, int level,
                                                int N, int M, const mpz_class& u) {
    int Kint = N + level + 1;
    std::array<PowerSeries, 4> out;
    auto convs = all_conventions();
    if (fits_u64(p, Kint)) {
        auto acc = level_sum_u64(p, j_red, level, Kint, u);
        for (int i = 0; i < 4; ++i) {
            auto W = weights_u64(acc, p, level, N, convs[i].eps, convs[i].eta, u);
            out[i] = pascal_assemble_u64(W, p, N, M);
        }
    } else {
        auto acc = level_sum_mpz(p, j_red, level, Kint, u);
        for (int i = 0; i < 4; ++i) {
            auto W = weights_mpz(acc, p, level, N, convs[i].eps, convs[i].eta, u);
            out[i] = pascal_assemble_mpz(W, p, N, M);
        }
    }
    return out;
}

int agreement_valuation(const PadicInt& a, const PadicInt& b) {
    return (a - b).valuation();
}

} // namespace

PowerSeries stickelberger_series(long p, long j, int level, int N, int M,
                                 const Convention& conv, const mpz_class& u) {
    long j_red = normalize_branch(p, j);
    check_generator(p, N, u);
    if (level < 1) throw ValidationError("level", "level must be >= 1");
    return build_candidate(p, j_red, level, N, M, conv, u);
}

BranchSeries iwasawa_series(long p, long j, int N, int M, const mpz_class& u) {
    long j_red = normalize_branch(p, j);
    check_generator(p, N, u);
    int n0 = level_floor(p, M);
    int n1 = n0 + 1;

    auto cands = build_all_candidates(p, j_red, n1, N, M, u);
    auto convs = all_conventions();

    // two interpolation points n = j, j + (p-1); finite level caps the
    // achievable agreement at level+1 digits
    int thr = std::min(N - 2, n1 + 1);
    if (thr < 1) throw InsufficientPrecision("no room for calibration digits");
    long pts[2] = {j_red, j_red + (p - 1)};
    int winner = -1;
    for (int i = 0; i < 4; ++i) {
        bool ok = true;
        for (long n : pts) {
            PadicInt T0 = PadicInt(p, N, u).pow(mpz_class(n)) - PadicInt(p, N, 1);
            PadicInt got = evaluate_at(cands[i], T0);
            PadicInt want = lp_value(p, j_red, n, got.precision());
            int thr_eff = std::min(thr, got.precision());
            if (agreement_valuation(got, want.reduce(got.precision())) < thr_eff) {
                ok = false;
                break;
            }
        }
        if (ok) {
            if (winner >= 0)
                throw CalibrationFailed("two candidates match the oracle");
            winner = i;
        }
    }
    if (winner < 0) throw CalibrationFailed("no candidate matches the oracle");

    // stabilization against the previous level
    PowerSeries prev = build_candidate(p, j_red, n0, N, M, convs[winner], u);
    int N0 = stabilization_digits(p, M, n0);
    if (prev.reduce(N0, M) != cands[winner].reduce(N0, M))
        throw InsufficientPrecision("levels " + std::to_string(n0) + "," +
                                    std::to_string(n1) + " disagree past " +
                                    std::to_string(N0) + " digits");

    return BranchSeries{p, j_red, cands[winner], convs[winner].id(), n1, u};
}

BranchInvariants branch_invariants(const BranchSeries& g) {
    MuLambda ml = mu_lambda(g.series);
    BranchInvariants out;
    out.mu = ml.mu;
    out.lambda = ml.lambda;
    out.trust_digits =
        stabilization_digits(g.p, g.series.truncation(), g.level_used);
    out.mu_certified = ml.mu < out.trust_digits;
    out.lambda_certified = ml.mu + 1 <= out.trust_digits;
    return out;
}

long default_branch_of(long p, long m) {
    if (m % 2 != 0)
        throw ConventionUnresolved("no default branch for odd m");
    long pm1 = p - 1;
    long j = (((-m) % pm1) + pm1) % pm1;
    if (j == 0) throw BranchZero("m maps to the zero branch");
    return j;
}

namespace {

Convention convention_from_id(const std::string& id) {
    for (const auto& c : all_conventions())
        if (c.id() == id) return c;
    throw ValidationError("convention_id", "unknown id " + id);
}

struct ZeroKey {
    long p, j;
    int digits, level;
    std::string u;
    bool operator<(const ZeroKey& o) const {
        return std::tie(p, j, digits, level, u) <
               std::tie(o.p, o.j, o.digits, o.level, o.u);
    }
};

std::map<ZeroKey, ZeroCertificate>& zero_memo() {
    static std::map<ZeroKey, ZeroCertificate> memo;
    return memo;
}

} // namespace

ZeroCertificate locate_simple_zero(long p, long j, int digits, int level,
                                   const mpz_class& u) {
    long j_red = normalize_branch(p, j);
    check_generator(p, digits, u);
    ZeroKey key{p, j_red, digits, level, u.get_str()};
    auto& memo = zero_memo();
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    int K = digits;
    int Kint = K + level + 1;
    if (!fits_u64(p, Kint))
        throw InsufficientPrecision("zero search outside the fast range");

    // winner convention weights in the (1+T)-power basis
    auto acc = level_sum_u64(p, j_red, level, Kint, u);
    auto W = weights_u64(acc, p, level, K, -1, +1, u);
    uint64_t PK = to_u64(pow_pN(p, K));

    auto evalH = [&](uint64_t T) {
        uint64_t y = (1 + T) % PK, acc_h = 0;
        for (long i = static_cast<long>(W.size()) - 1; i >= 0; --i)
            acc_h = (mulmod64(acc_h, y, PK) + W[i]) % PK;
        return acc_h;
    };
    auto evalDH = [&](uint64_t T) {
        uint64_t y = (1 + T) % PK, acc_h = 0;
        for (long i = static_cast<long>(W.size()) - 1; i >= 1; --i)
            acc_h = (mulmod64(acc_h, y, PK) +
                     mulmod64(static_cast<uint64_t>(i) % PK, W[i], PK)) %
                    PK;
        return acc_h;
    };

    // start from the truncated series: -c0/c1, valid for a simple zero
    PowerSeries s = pascal_assemble_u64(W, p, K, 4);
    if (s[0] % p == 0 && s[1] % p != 0) {
        // expected shape: mu = 0, lambda = 1
    } else {
        throw Error("branch is not a certified simple-zero branch");
    }
    mpz_class c1inv;
    {
        mpz_class mod = pow_pN(p, K);
        mpz_invert(c1inv.get_mpz_t(), s[1].get_mpz_t(), mod.get_mpz_t());
    }
    uint64_t T = to_u64(((pow_pN(p, K) - s[0]) * c1inv) % pow_pN(p, K));

    for (int it = 0; it < 16; ++it) {
        uint64_t h = evalH(T);
        if (h == 0) break;
        uint64_t d = evalDH(T);
        if (d % p == 0) throw Error("derivative not a unit at the zero");
        mpz_class dinv;
        mpz_class dz(static_cast<unsigned long>(d)), mod = pow_pN(p, K);
        mpz_invert(dinv.get_mpz_t(), dz.get_mpz_t(), mod.get_mpz_t());
        uint64_t stepv = mulmod64(h, to_u64(dinv), PK);
        uint64_t T2 = (T + PK - stepv) % PK;
        if (T2 == T) break;
        T = T2;
    }
    if (evalH(T) != 0) throw Error("zero refinement did not converge");
    if (T % p != 0) throw Error("zero escaped the maximal ideal");

    ZeroCertificate cert{mpz_class(static_cast<unsigned long>(T)), K,
                         std::min(K, level + 1), level};
    memo.emplace(key, cert);
    return cert;
}

TInvariant t_invariant_on_branch(long p, long m, long j, int N, int M,
                                 const mpz_class& u,
                                 const SeriesProvider& provider) {
    long j_red = normalize_branch(p, j);
    BranchSeries G = provider ? provider(p, j_red)
                              : iwasawa_series(p, j_red, N, M, u);
    int Ns = G.series.precision();
    PadicInt cm = PadicInt(p, Ns, u).pow(mpz_class(-m)) - PadicInt(p, Ns, 1);
    OrdAtResult oa = ord_at(G.series, cm);
    BranchInvariants inv = branch_invariants(G);

    TInvariant out;
    out.t = oa.order;
    out.branch_j = j_red;
    if (inv.lambda == 0) {
        out.certificate = "unit-value";
        out.certified = oa.certified && inv.lambda_certified;
        return out;
    }
    if (inv.lambda == 1 && inv.mu == 0 && inv.lambda_certified) {
        int level_z = std::max(level_floor(p, M) + 1, 4);
        int digits = 6;
        ZeroCertificate zc = locate_simple_zero(p, G.j, digits, level_z, u);
        mpz_class modz = pow_pN(p, zc.modulus_digits);
        mpz_class cmz =
            (PadicInt(p, zc.modulus_digits, u).pow(mpz_class(-m)).value() - 1 + modz) %
            modz;
        mpz_class diff = (zc.zero - cmz) % modz;
        if (diff < 0) diff += modz;
        int v = PadicInt(p, zc.modulus_digits, diff).valuation();
        out.zero = zc;
        if (v < zc.certified_digits) {
            // the unique zero provably differs from the evaluation point
            out.t = 0;
            out.certified = true;
            out.certificate = "simple-zero-distinct";
        } else {
            out.certified = false;
            out.certificate = "zero-indistinct";
        }
        return out;
    }
    out.certificate = "ord-at";
    out.certified = false;
    return out;
}

TInvariant t_invariant(long p, long m, const std::map<long, long>& branch_map,
                       int N, int M, const mpz_class& u,
                       const SeriesProvider& provider) {
    long pm1 = p - 1;
    if (((m % pm1) + pm1) % pm1 == 0)
        throw BranchZero("m = 0 mod p-1 has no torsion invariant here");
    if (auto it = branch_map.find(m); it != branch_map.end())
        return t_invariant_on_branch(p, m, it->second, N, M, u, provider);
    if (m % 2 == 0)
        return t_invariant_on_branch(p, m, default_branch_of(p, m), N, M, u,
                                     provider);

    // odd m without an assignment: certified 0 when every even branch is a
    // unit series, since any admissible assignment then gives order 0
    for (long j = 2; j <= pm1 - 2; j += 2) {
        BranchSeries G = provider ? provider(p, j) : iwasawa_series(p, j, N, M, u);
        BranchInvariants inv = branch_invariants(G);
        if (!(inv.mu == 0 && inv.lambda == 0 && inv.mu_certified &&
              inv.lambda_certified))
            throw ConventionUnresolved(
                "odd m needs an explicit branch map: branch " + std::to_string(j) +
                " is not a certified unit");
    }
    TInvariant out;
    out.t = 0;
    out.certified = true;
    out.certificate = "all-branches-unit";
    return out;
}

} // namespace tatecoh
