#include "tatecoh/smith.hpp"

#include <cstdlib>
#include <utility>

namespace tatecoh {

IntMat IntMat::identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMat IntMat::operator*(const IntMat& o) const {
    if (cols != o.rows) throw Error("matrix dimension mismatch");
    IntMat r(rows, o.cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            if (at(i, k) == 0) continue;
            for (int j = 0; j < o.cols; ++j)
                r.at(i, j) += at(i, k) * o.at(k, j);
        }
    return r;
}

IntMat IntMat::operator+(const IntMat& o) const {
    if (rows != o.rows || cols != o.cols) throw Error("matrix dimension mismatch");
    IntMat r(rows, cols);
    for (size_t k = 0; k < a.size(); ++k) r.a[k] = a[k] + o.a[k];
    return r;
}

IntMat IntMat::transpose() const {
    IntMat r(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
    return r;
}

namespace {

struct SnfWork {
    IntMat S, U, V;

    void swap_rows(int i, int k) {
        if (i == k) return;
        for (int j = 0; j < S.cols; ++j) std::swap(S.at(i, j), S.at(k, j));
        for (int j = 0; j < U.cols; ++j) std::swap(U.at(i, j), U.at(k, j));
    }
    void swap_cols(int j, int k) {
        if (j == k) return;
        for (int i = 0; i < S.rows; ++i) std::swap(S.at(i, j), S.at(i, k));
        for (int i = 0; i < V.rows; ++i) std::swap(V.at(i, j), V.at(i, k));
    }
    void row_sub(int i, int k, const mpz_class& q) {  // row_i -= q * row_k
        if (q == 0) return;
        for (int j = 0; j < S.cols; ++j) S.at(i, j) -= q * S.at(k, j);
        for (int j = 0; j < U.cols; ++j) U.at(i, j) -= q * U.at(k, j);
    }
    void col_sub(int j, int k, const mpz_class& q) {  // col_j -= q * col_k
        if (q == 0) return;
        for (int i = 0; i < S.rows; ++i) S.at(i, j) -= q * S.at(i, k);
        for (int i = 0; i < V.rows; ++i) V.at(i, j) -= q * V.at(i, k);
    }
    void negate_row(int i) {
        for (int j = 0; j < S.cols; ++j) S.at(i, j) = -S.at(i, j);
        for (int j = 0; j < U.cols; ++j) U.at(i, j) = -U.at(i, j);
    }
    void col_add(int j, int k) {  // col_j += col_k
        for (int i = 0; i < S.rows; ++i) S.at(i, j) += S.at(i, k);
        for (int i = 0; i < V.rows; ++i) V.at(i, j) += V.at(i, k);
    }
};

} // namespace

SmithResult smith_normal_form(const IntMat& A) {
    SnfWork w{A, IntMat::identity(A.rows), IntMat::identity(A.cols)};
    int n = std::min(A.rows, A.cols);
    int t = 0;
    while (t < n) {
        // locate a minimal nonzero entry in the trailing block
        int pi = -1, pj = -1;
        for (int i = t; i < A.rows; ++i)
            for (int j = t; j < A.cols; ++j) {
                if (w.S.at(i, j) == 0) continue;
                if (pi < 0 || mpz_cmpabs(w.S.at(i, j).get_mpz_t(),
                                         w.S.at(pi, pj).get_mpz_t()) < 0) {
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = t + 1; i < A.rows; ++i) {
                while (w.S.at(i, t) != 0) {
                    mpz_class q = w.S.at(i, t) / w.S.at(t, t);
                    w.row_sub(i, t, q);
                    if (w.S.at(i, t) != 0) {
                        w.swap_rows(i, t);
                        clean = false;
                    }
                }
            }
            for (int j = t + 1; j < A.cols; ++j) {
                while (w.S.at(t, j) != 0) {
                    mpz_class q = w.S.at(t, j) / w.S.at(t, t);
                    w.col_sub(j, t, q);
                    if (w.S.at(t, j) != 0) {
                        w.swap_cols(j, t);
                        clean = false;
                    }
                }
            }
        }

        // pivot must divide the rest of the block for the chain condition
        bool divides = true;
        for (int i = t + 1; i < A.rows && divides; ++i)
            for (int j = t + 1; j < A.cols && divides; ++j)
                if (w.S.at(i, j) % w.S.at(t, t) != 0) {
                    w.col_add(t, j);
                    divides = false;
                }
        if (!divides) continue;

        if (w.S.at(t, t) < 0) w.negate_row(t);
        ++t;
    }
    int rank = 0;
    for (int i = 0; i < n; ++i)
        if (w.S.at(i, i) != 0) ++rank;
    return SmithResult{w.S, w.U, w.V, rank};
}

IntMat kernel_basis(const IntMat& A) {
    SmithResult s = smith_normal_form(A);
    int n = A.cols;
    IntMat K(n, n - s.rank);
    for (int j = s.rank; j < n; ++j)
        for (int i = 0; i < n; ++i) K.at(i, j - s.rank) = s.V.at(i, j);
    return K;
}

IntMat column_lattice_basis(const IntMat& A) {
    IntMat W = A;
    int t = 0;
    for (int r = 0; r < W.rows && t < W.cols; ++r) {
        // Euclid across columns t.. on row r
        while (true) {
            int piv = -1;
            for (int j = t; j < W.cols; ++j) {
                if (W.at(r, j) == 0) continue;
                if (piv < 0 || mpz_cmpabs(W.at(r, j).get_mpz_t(),
                                          W.at(r, piv).get_mpz_t()) < 0)
                    piv = j;
            }
            if (piv < 0) break;
            for (int i = 0; i < W.rows; ++i) std::swap(W.at(i, t), W.at(i, piv));
            bool done = true;
            for (int j = t + 1; j < W.cols; ++j) {
                mpz_class q = W.at(r, j) / W.at(r, t);
                for (int i = 0; i < W.rows; ++i) W.at(i, j) -= q * W.at(i, t);
                if (W.at(r, j) != 0) done = false;
            }
            if (done) {
                ++t;
                break;
            }
        }
    }
    IntMat B(W.rows, t);
    for (int j = 0; j < t; ++j)
        for (int i = 0; i < W.rows; ++i) B.at(i, j) = W.at(i, j);
    return B;
}

IntMat solve_exact(const IntMat& B, const IntMat& C) {
    if (B.rows != B.cols || B.rows != C.rows) throw Error("solve shape mismatch");
    SmithResult s = smith_normal_form(B);
    if (s.rank != B.rows) throw Error("singular system");
    IntMat Y = s.U * C;
    for (int i = 0; i < Y.rows; ++i)
        for (int j = 0; j < Y.cols; ++j) {
            if (Y.at(i, j) % s.S.at(i, i) != 0)
                throw Error("no integral solution");
            Y.at(i, j) /= s.S.at(i, i);
        }
    return s.V * Y;
}

IntMat solve_any(const IntMat& G, const IntMat& C) {
    if (G.rows != C.rows) throw Error("solve shape mismatch");
    SmithResult s = smith_normal_form(G);
    IntMat Y = s.U * C;
    IntMat Z(G.cols, C.cols);
    for (int i = 0; i < G.rows; ++i)
        for (int j = 0; j < C.cols; ++j) {
            if (i < s.rank) {
                if (Y.at(i, j) % s.S.at(i, i) != 0)
                    throw Error("no integral solution");
                Z.at(i, j) = Y.at(i, j) / s.S.at(i, i);
            } else if (Y.at(i, j) != 0) {
                throw Error("no integral solution");
            }
        }
    return s.V * Z;
}

IntMat hstack(const IntMat& A, const IntMat& B) {
    if (A.rows != B.rows) throw Error("hstack shape mismatch");
    IntMat r(A.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) r.at(i, j) = A.at(i, j);
        for (int j = 0; j < B.cols; ++j) r.at(i, A.cols + j) = B.at(i, j);
    }
    return r;
}

} // namespace tatecoh
