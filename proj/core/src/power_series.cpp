#include "tatecoh/power_series.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace tatecoh {

PowerSeries::PowerSeries(long p, int N, int M) : p_(p), N_(N), M_(M) {
    PadicInt check(p, N, 0);  // validates p, N
    if (M < 1) throw ValidationError("M", "truncation must be >= 1");
    modulus_ = pow_pN(p, N);
    coeffs_.assign(static_cast<size_t>(M), mpz_class(0));
}

PowerSeries::PowerSeries(long p, int N, int M, std::vector<mpz_class> coeffs)
    : PowerSeries(p, N, M) {
    if (coeffs.size() > static_cast<size_t>(M))
        throw ValidationError("coeffs", "more coefficients than truncation order");
    for (size_t k = 0; k < coeffs.size(); ++k) set(static_cast<int>(k), coeffs[k]);
}

void PowerSeries::set(int k, const mpz_class& c) {
    mpz_mod(coeffs_[k].get_mpz_t(), c.get_mpz_t(), modulus_.get_mpz_t());
}

bool PowerSeries::is_zero() const {
    for (const auto& c : coeffs_)
        if (c != 0) return false;
    return true;
}

void PowerSeries::check_same(const PowerSeries& o) const {
    if (p_ != o.p_ || N_ != o.N_ || M_ != o.M_)
        throw PrecisionMismatch("operands carry different (p, N, M) contexts");
}

PowerSeries PowerSeries::operator+(const PowerSeries& o) const {
    check_same(o);
    PowerSeries r(p_, N_, M_);
    for (int k = 0; k < M_; ++k) r.set(k, coeffs_[k] + o.coeffs_[k]);
    return r;
}

PowerSeries PowerSeries::operator-(const PowerSeries& o) const {
    check_same(o);
    PowerSeries r(p_, N_, M_);
    for (int k = 0; k < M_; ++k) r.set(k, coeffs_[k] - o.coeffs_[k]);
    return r;
}

PowerSeries PowerSeries::operator*(const PowerSeries& o) const {
    check_same(o);
    PowerSeries r(p_, N_, M_);
    for (int i = 0; i < M_; ++i) {
        if (coeffs_[i] == 0) continue;
        for (int j = 0; i + j < M_; ++j) {
            if (o.coeffs_[j] == 0) continue;
            r.coeffs_[i + j] += coeffs_[i] * o.coeffs_[j];
        }
    }
    for (int k = 0; k < M_; ++k) r.set(k, r.coeffs_[k]);
    return r;
}

bool PowerSeries::operator==(const PowerSeries& o) const {
    return p_ == o.p_ && N_ == o.N_ && M_ == o.M_ && coeffs_ == o.coeffs_;
}

PowerSeries PowerSeries::scalar_mul(const mpz_class& c) const {
    PowerSeries r(p_, N_, M_);
    for (int k = 0; k < M_; ++k) r.set(k, coeffs_[k] * c);
    return r;
}

PowerSeries PowerSeries::inverse() const {
    if (coeffs_[0] % p_ == 0) throw NonUnit("constant term not a unit");
    PowerSeries r(p_, N_, M_);
    mpz_class inv0;
    mpz_invert(inv0.get_mpz_t(), coeffs_[0].get_mpz_t(), modulus_.get_mpz_t());
    r.set(0, inv0);
    for (int k = 1; k < M_; ++k) {
        mpz_class s = 0;
        for (int i = 1; i <= k; ++i) s += coeffs_[i] * r.coeffs_[k - i];
        r.set(k, -inv0 * s);
    }
    return r;
}

PowerSeries PowerSeries::reduce(int N_smaller, int M_smaller) const {
    if (N_smaller < 1 || N_smaller > N_ || M_smaller < 1 || M_smaller > M_)
        throw PrecisionMismatch("reduce target outside window");
    PowerSeries r(p_, N_smaller, M_smaller);
    for (int k = 0; k < M_smaller; ++k) r.set(k, coeffs_[k]);
    return r;
}

PowerSeries PowerSeries::one(long p, int N, int M) {
    PowerSeries r(p, N, M);
    r.set(0, 1);
    return r;
}

PowerSeries PowerSeries::monomial(long p, int N, int M, int k, const mpz_class& c) {
    PowerSeries r(p, N, M);
    if (k < 0 || k >= M) throw ValidationError("k", "monomial degree outside window");
    r.set(k, c);
    return r;
}

static int coeff_valuation(const mpz_class& c, long p, int N) {
    if (c == 0) return N;
    int v = 0;
    mpz_class t = c;
    while (t % p == 0 && v < N) {
        t /= p;
        ++v;
    }
    return v;
}

MuLambda mu_lambda(const PowerSeries& f) {
    int mu = f.precision();
    int lambda = -1;
    for (int k = 0; k < f.truncation(); ++k) {
        int v = coeff_valuation(f[k], f.p(), f.precision());
        if (v < mu) {
            mu = v;
            lambda = k;
        }
    }
    if (lambda < 0)
        throw InsufficientPrecision("series vanishes mod (p^N, T^M)");
    return MuLambda{mu, lambda};
}

WeierstrassData weierstrass_prepare(const PowerSeries& f) {
    MuLambda ml = mu_lambda(f);
    long p = f.p();
    int N1 = f.precision() - ml.mu;
    int M = f.truncation();
    if (N1 < 1)
        throw InsufficientPrecision("no residual precision after removing p^mu");
    if (ml.lambda >= M)
        throw LambdaOverflow("no unit coefficient below the truncation order");

    mpz_class pmu = pow_pN(p, ml.mu);
    PowerSeries f1(p, N1, M);
    for (int k = 0; k < M; ++k) f1.set(k, f[k] / pmu);

    int lam = ml.lambda;
    if (lam == 0)
        return WeierstrassData{ml.mu, 0, PowerSeries::one(p, N1, M), f1};

    // Peel the unit off by successive approximation: keep V = f1 * W with
    // V = V_lo + T^lam * V_hi; each round right-multiplies by V_hi^{-1},
    // raising the valuation of (V_hi - 1) until V is the polynomial itself.
    PowerSeries V = f1;
    PowerSeries W = PowerSeries::one(p, N1, M);
    for (int round = 0; round <= N1 + 2; ++round) {
        PowerSeries hi(p, N1, M);
        for (int k = lam; k < M; ++k) hi.set(k - lam, V[k]);
        bool settled = true;
        if (hi[0] != 1) settled = false;
        for (int k = 1; settled && k < M; ++k)
            if (hi[k] != 0) settled = false;
        if (settled) break;
        if (round == N1 + 2) throw Error("weierstrass iteration failed to settle");
        PowerSeries hinv = hi.inverse();
        V = V * hinv;
        W = W * hinv;
    }

    PowerSeries P(p, N1, M);
    for (int k = 0; k < lam; ++k) {
        if (V[k] % p != 0) throw Error("weierstrass polynomial not distinguished");
        P.set(k, V[k]);
    }
    P.set(lam, 1);
    return WeierstrassData{ml.mu, lam, P, W.inverse()};
}

static void check_distinguished(const PowerSeries& P, int d) {
    if (d < 0 || d >= P.truncation())
        throw NotDistinguished("degree outside window");
    if (P[d] != 1) throw NotDistinguished("not monic at the stated degree");
    for (int k = d + 1; k < P.truncation(); ++k)
        if (P[k] != 0) throw NotDistinguished("terms above the stated degree");
    for (int k = 0; k < d; ++k)
        if (P[k] % P.p() != 0)
            throw NotDistinguished("lower coefficient is a unit");
}

DivisionResult divide_by_distinguished(const PowerSeries& g, const PowerSeries& P,
                                       int degree) {
    if (g.p() != P.p() || g.precision() != P.precision() ||
        g.truncation() != P.truncation())
        throw PrecisionMismatch("dividend and divisor contexts differ");
    check_distinguished(P, degree);
    long p = g.p();
    int N = g.precision(), M = g.truncation();
    mpz_class mod = pow_pN(p, N);

    std::vector<mpz_class> work(M);
    for (int k = 0; k < M; ++k) work[k] = g[k];
    PowerSeries q(p, N, M), r(p, N, M);
    for (int i = M - 1; i >= degree; --i) {
        mpz_class c = work[i] % mod;
        if (c == 0) continue;
        q.set(i - degree, c);
        for (int j = 0; j <= degree; ++j)
            work[i - degree + j] = (work[i - degree + j] - c * P[j]) % mod;
    }
    for (int k = 0; k < degree; ++k) r.set(k, work[k]);
    return DivisionResult{q, r};
}

PadicInt evaluate_at(const PowerSeries& f, const PadicInt& c) {
    if (c.p() != f.p() || c.precision() != f.precision())
        throw PrecisionMismatch("point context differs from series context");
    if (!c.is_zero() && c.valuation() < 1)
        throw PointNotInMaximalIdeal("evaluation point is a unit");
    mpz_class acc = 0;
    const mpz_class& mod = c.modulus();
    for (int k = f.truncation() - 1; k >= 0; --k)
        acc = (acc * c.value() + f[k]) % mod;
    int eff = std::min(f.precision(), f.truncation());
    return PadicInt(f.p(), f.precision(), acc).reduce(eff);
}

OrdAtResult ord_at(const PowerSeries& f, const PadicInt& c) {
    if (f.is_zero()) throw InsufficientPrecision("zero series has no finite order");
    if (c.p() != f.p() || c.precision() != f.precision())
        throw PrecisionMismatch("point context differs from series context");
    if (!c.is_zero() && c.valuation() < 1)
        throw PointNotInMaximalIdeal("evaluation point is a unit");

    long p = f.p();
    int N = f.precision(), M = f.truncation();
    mpz_class mod = pow_pN(p, N);
    std::vector<mpz_class> work(M);
    for (int k = 0; k < M; ++k) work[k] = f[k];

    int order = 0;
    while (order < M) {
        // synthetic division: work = (T - c) * q + r
        std::vector<mpz_class> q(M, mpz_class(0));
        mpz_class b = 0;
        for (int i = M - 1; i >= 1; --i) {
            b = (work[i] + c.value() * b) % mod;
            q[i - 1] = b;
        }
        mpz_class r = (work[0] + c.value() * b) % mod;
        if (r != 0) {
            int v = coeff_valuation(r, p, N);
            return OrdAtResult{order, v < N - order};
        }
        work = q;
        ++order;
        bool zero = true;
        for (const auto& w : work)
            if (w % mod != 0) { zero = false; break; }
        if (zero) break;
    }
    // every remainder vanished within the window
    return OrdAtResult{order, false};
}

PowerSeries linear_distinguished(long p, int N, int M, const PadicInt& c) {
    if (M < 2) throw ValidationError("M", "need at least two coefficients for T - c");
    if (c.p() != p || c.precision() != N)
        throw PrecisionMismatch("point context differs");
    if (!c.is_zero() && c.valuation() < 1)
        throw NotDistinguished("constant term is a unit");
    PowerSeries P(p, N, M);
    P.set(0, -c.value());
    P.set(1, 1);
    return P;
}

std::string serialize_series(const PowerSeries& f, const mpz_class& u,
                             const std::string& convention_id) {
    std::ostringstream out;
    out << "tatecoh-series 1 p=" << f.p() << " N=" << f.precision()
        << " M=" << f.truncation() << " u=" << u.get_str()
        << " convention=" << convention_id << "\n";
    for (int k = 0; k < f.truncation(); ++k) out << f[k].get_str() << "\n";
    return out.str();
}

SeriesFile deserialize_series(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header)) throw CorruptCache("empty series file");

    std::istringstream hs(header);
    std::string magic;
    int version = 0;
    hs >> magic >> version;
    if (magic != "tatecoh-series") throw CorruptCache("bad series header");
    if (version != 1)
        throw VersionMismatch("series format " + std::to_string(version) +
                              ", expected 1; regenerate the file");
    auto parse_num = [](const std::string& val) -> long {
        size_t pos = 0;
        long x = 0;
        try {
            x = std::stol(val, &pos);
        } catch (const std::exception&) {
            throw CorruptCache("malformed numeric header field " + val);
        }
        if (pos != val.size() || x <= 0)
            throw CorruptCache("malformed numeric header field " + val);
        return x;
    };
    long p = 0;
    int N = 0, M = 0;
    std::string u_str, conv, tok;
    while (hs >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw CorruptCache("malformed header field " + tok);
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "p") p = parse_num(val);
        else if (key == "N") N = static_cast<int>(parse_num(val));
        else if (key == "M") M = static_cast<int>(parse_num(val));
        else if (key == "u") u_str = val;
        else if (key == "convention") conv = val;
        else throw CorruptCache("unknown header field " + key);
    }
    if (p == 0 || N == 0 || M == 0 || u_str.empty())
        throw CorruptCache("incomplete series header");
    for (char ch : u_str)
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw CorruptCache("malformed u field");

    std::vector<mpz_class> coeffs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        for (char ch : line)
            if (!std::isdigit(static_cast<unsigned char>(ch)))
                throw CorruptCache("non-numeric coefficient line");
        coeffs.emplace_back(line);
    }
    if (static_cast<int>(coeffs.size()) != M)
        throw CorruptCache("coefficient count differs from header");
    try {
        return SeriesFile{PowerSeries(p, N, M, coeffs), mpz_class(u_str), conv};
    } catch (const Error& e) {
        throw CorruptCache(std::string("series fields fail validation: ") + e.what());
    }
}

} // namespace tatecoh
