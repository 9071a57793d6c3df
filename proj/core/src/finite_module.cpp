#include "tatecoh/finite_module.hpp"

#include <algorithm>

#include "tatecoh/padic.hpp"

namespace tatecoh {

mpz_class FinitePModule::size() const {
    int e = 0;
    for (int a : orders) e += a;
    return pow_pN(p, e);
}

static mpz_class pexp(long p, int e) { return pow_pN(p, e); }

void validate_module(const FinitePModule& M) {
    PadicInt check(M.p, 1, 0);  // validates p prime
    int r = M.rank();
    for (int i = 0; i < r; ++i) {
        if (M.orders[i] < 1) throw ValidationError("orders", "exponent below 1");
        if (i > 0 && M.orders[i] > M.orders[i - 1])
            throw ValidationError("orders", "exponents must be non-increasing");
    }
    for (const auto* act : {&M.delta_action, &M.gamma_action}) {
        if (!act->has_value()) continue;
        const IntMat& A = act->value();
        if (A.rows != r || A.cols != r)
            throw ValidationError("action", "matrix size differs from rank");
        if (!endo_well_defined(M, A))
            throw IllDefinedEndomorphism("action entry violates the divisibility constraint");
    }
}

bool endo_well_defined(const FinitePModule& M, const IntMat& psi) {
    int r = M.rank();
    if (psi.rows != r || psi.cols != r) return false;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            int need = std::max(0, M.orders[i] - M.orders[j]);
            if (need > 0 && psi.at(i, j) % pexp(M.p, need) != 0) return false;
        }
    return true;
}

bool endo_equal(const FinitePModule& M, const IntMat& A, const IntMat& B) {
    int r = M.rank();
    for (int i = 0; i < r; ++i) {
        mpz_class m = pexp(M.p, M.orders[i]);
        for (int j = 0; j < r; ++j)
            if ((A.at(i, j) - B.at(i, j)) % m != 0) return false;
    }
    return true;
}

IntMat scalar_endo(const FinitePModule& M, const mpz_class& c) {
    int r = M.rank();
    IntMat A(r, r);
    for (int i = 0; i < r; ++i) A.at(i, i) = c;
    return A;
}

static IntMat relation_diag(const FinitePModule& M) {
    int r = M.rank();
    IntMat R(r, r);
    for (int i = 0; i < r; ++i) R.at(i, i) = pexp(M.p, M.orders[i]);
    return R;
}

static IntMat reduce_entries(const IntMat& A, const mpz_class& mod) {
    IntMat B = A;
    for (auto& x : B.a) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
    return B;
}

IntMat endo_inverse(const FinitePModule& M, const IntMat& A) {
    int r = M.rank();
    mpz_class mod = pexp(M.p, M.orders.empty() ? 1 : M.orders[0]);
    // Gauss-Jordan mod p^{a_1}; unit pivots exist exactly when det is a unit
    IntMat W = reduce_entries(A, mod);
    IntMat I = IntMat::identity(r);
    for (int t = 0; t < r; ++t) {
        int piv = -1;
        for (int i = t; i < r; ++i)
            if (W.at(i, t) % M.p != 0) { piv = i; break; }
        if (piv < 0) throw NonInvertibleAction("determinant not a unit mod p");
        if (piv != t)
            for (int j = 0; j < r; ++j) {
                std::swap(W.at(piv, j), W.at(t, j));
                std::swap(I.at(piv, j), I.at(t, j));
            }
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), W.at(t, t).get_mpz_t(), mod.get_mpz_t());
        for (int j = 0; j < r; ++j) {
            W.at(t, j) = (W.at(t, j) * inv) % mod;
            I.at(t, j) = (I.at(t, j) * inv) % mod;
        }
        for (int i = 0; i < r; ++i) {
            if (i == t) continue;
            mpz_class f = W.at(i, t);
            if (f == 0) continue;
            for (int j = 0; j < r; ++j) {
                W.at(i, j) = (W.at(i, j) - f * W.at(t, j)) % mod;
                I.at(i, j) = (I.at(i, j) - f * I.at(t, j)) % mod;
            }
        }
    }
    return reduce_entries(I, mod);
}

namespace {

struct Presentation {
    std::vector<int> orders;
    IntMat gens;  // columns in the ambient presentation, matching orders
};

// structure of K / R Z^r where K is spanned by the columns of gens plus R
Presentation present_subquotient(const FinitePModule& M, const IntMat& gens) {
    IntMat R = relation_diag(M);
    IntMat B = column_lattice_basis(hstack(gens, R));
    IntMat X = solve_exact(B, R);
    SmithResult sx = smith_normal_form(X);
    IntMat Uinv = solve_exact(sx.U, IntMat::identity(X.rows));
    IntMat C = B * Uinv;

    // diagonal of sx.S ascends; module convention is descending
    std::vector<int> kept;
    for (int t = X.rows - 1; t >= 0; --t)
        if (sx.S.at(t, t) != 1) kept.push_back(t);
    Presentation out;
    out.gens = IntMat(M.rank(), static_cast<int>(kept.size()));
    for (size_t s = 0; s < kept.size(); ++s) {
        int t = kept[s];
        mpz_class d = sx.S.at(t, t);
        int e = 0;
        while (d % M.p == 0) { d /= M.p; ++e; }
        if (d != 1) throw Error("subquotient order not a p-power");
        out.orders.push_back(e);
        for (int i = 0; i < M.rank(); ++i)
            out.gens.at(i, static_cast<int>(s)) = C.at(i, t);
    }
    return out;
}

// matrix of psi on the presented subquotient; psi must map K into K mod R
IntMat transport_endo(const FinitePModule& M, const Presentation& P,
                      const IntMat& psi) {
    int s = static_cast<int>(P.orders.size());
    if (s == 0) return IntMat(0, 0);
    IntMat G = hstack(P.gens, relation_diag(M));
    IntMat W = solve_any(G, psi * P.gens);
    IntMat A(s, s);
    for (int i = 0; i < s; ++i) {
        mpz_class m = pexp(M.p, P.orders[i]);
        for (int j = 0; j < s; ++j)
            mpz_mod(A.at(i, j).get_mpz_t(), W.at(i, j).get_mpz_t(), m.get_mpz_t());
    }
    return A;
}

} // namespace

KerCoker endo_ker_coker(const FinitePModule& M, const IntMat& psi) {
    validate_module(M);
    if (!endo_well_defined(M, psi))
        throw IllDefinedEndomorphism("matrix does not respect the order filtration");
    int r = M.rank();
    IntMat R = relation_diag(M);

    // cokernel: Z^r / (psi Z^r + R Z^r)
    SmithResult sc = smith_normal_form(hstack(psi, R));
    std::vector<int> cork;
    for (int t = r - 1; t >= 0; --t) {
        mpz_class d = sc.S.at(t, t);
        if (d == 1) continue;
        int e = 0;
        while (d % M.p == 0) { d /= M.p; ++e; }
        if (d != 1) throw Error("cokernel order not a p-power");
        cork.push_back(e);
    }

    // kernel: {x : psi x in R Z^r} / R Z^r, via the preimage lattice
    IntMat neg_R = R;
    for (auto& x : neg_R.a) x = -x;
    IntMat KB = kernel_basis(hstack(psi, neg_R));
    IntMat xpart(r, KB.cols);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < KB.cols; ++j) xpart.at(i, j) = KB.at(i, j);
    Presentation pk = present_subquotient(M, xpart);

    KerCoker out;
    out.kernel = FinitePModule{M.p, pk.orders, std::nullopt, std::nullopt};
    out.cokernel = FinitePModule{M.p, cork, std::nullopt, std::nullopt};
    return out;
}

FinitePModule branch_project(const FinitePModule& M, long j) {
    validate_module(M);
    if (!M.delta_action)
        throw MissingAction("branch projection needs the delta action");
    const IntMat& A = *M.delta_action;
    int r = M.rank();
    if (r == 0) return M;
    int a1 = M.orders[0];
    mpz_class mod = pexp(M.p, a1);

    std::vector<IntMat> powers(static_cast<size_t>(M.p - 1));
    powers[0] = IntMat::identity(r);
    for (long k = 1; k < M.p - 1; ++k)
        powers[k] = reduce_entries(powers[k - 1] * A, mod);
    IntMat last = reduce_entries(powers[M.p - 2] * A, mod);
    if (!endo_equal(M, last, IntMat::identity(r)))
        throw ActionOrderInvalid("delta action order does not divide p - 1");

    PadicInt w0 = teichmuller(smallest_primitive_root(M.p), M.p, a1);
    PadicInt inv_order = unit_inverse(PadicInt(M.p, a1, M.p - 1));
    IntMat E(r, r);
    for (long k = 0; k < M.p - 1; ++k) {
        mpz_class c = w0.pow(mpz_class(-j * k)).value();
        for (int i = 0; i < r; ++i)
            for (int jj = 0; jj < r; ++jj)
                E.at(i, jj) += c * powers[k].at(i, jj);
    }
    for (auto& x : E.a) x = (x * inv_order.value()) % mod;
    E = reduce_entries(E, mod);

    Presentation pr = present_subquotient(M, E);
    FinitePModule out;
    out.p = M.p;
    out.orders = pr.orders;
    out.delta_action = transport_endo(M, pr, A);
    if (M.gamma_action) out.gamma_action = transport_endo(M, pr, *M.gamma_action);
    validate_module(out);
    return out;
}

FinitePModule pontryagin_dual(const FinitePModule& M) {
    validate_module(M);
    FinitePModule out;
    out.p = M.p;
    out.orders = M.orders;
    int r = M.rank();
    auto dualize = [&](const IntMat& A) {
        IntMat B = endo_inverse(M, A);
        if (!endo_well_defined(M, B)) throw Error("inverse violates filtration");
        IntMat C(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                int shift = M.orders[i] - M.orders[j];
                if (shift >= 0) {
                    C.at(i, j) = B.at(j, i) * pexp(M.p, shift);
                } else {
                    mpz_class q = pexp(M.p, -shift);
                    if (B.at(j, i) % q != 0) throw Error("dual entry not integral");
                    C.at(i, j) = B.at(j, i) / q;
                }
                mpz_class m = pexp(M.p, M.orders[i]);
                mpz_mod(C.at(i, j).get_mpz_t(), C.at(i, j).get_mpz_t(), m.get_mpz_t());
            }
        return C;
    };
    if (M.delta_action) out.delta_action = dualize(*M.delta_action);
    if (M.gamma_action) out.gamma_action = dualize(*M.gamma_action);
    validate_module(out);
    return out;
}

} // namespace tatecoh
