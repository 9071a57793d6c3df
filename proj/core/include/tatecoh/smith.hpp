#pragma once

// Exact integer linear algebra: Smith normal form with unimodular transforms,
// column lattice bases, integer kernels.  Matrices are small (module ranks),
// so the classic elimination with full-size mpz entries is the right tool.

#include <gmpxx.h>

#include <vector>

#include "tatecoh/errors.hpp"

namespace tatecoh {

struct IntMat {
    int rows = 0, cols = 0;
    std::vector<mpz_class> a;  // row-major

    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    mpz_class& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const mpz_class& at(int i, int j) const {
        return a[static_cast<size_t>(i) * cols + j];
    }

    static IntMat identity(int n);
    IntMat operator*(const IntMat& o) const;
    IntMat operator+(const IntMat& o) const;
    IntMat transpose() const;
    bool operator==(const IntMat& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }
};

struct SmithResult {
    IntMat S, U, V;  // S = U * A * V diagonal, d_1 | d_2 | ...
    int rank = 0;    // nonzero diagonal entries
};

SmithResult smith_normal_form(const IntMat& A);

// columns spanning {x : A x = 0}; primitive basis (n x (n - rank))
IntMat kernel_basis(const IntMat& A);

// basis of the lattice generated by the columns of A, as matrix columns
IntMat column_lattice_basis(const IntMat& A);

// X with B X = C over Z; B square with full rank.  Throws Error when the
// system has no integral solution.
IntMat solve_exact(const IntMat& B, const IntMat& C);

// some integral X with G X = C, G arbitrary shape.  Throws Error when none.
IntMat solve_any(const IntMat& G, const IntMat& C);

IntMat hstack(const IntMat& A, const IntMat& B);

} // namespace tatecoh
