#pragma once

#include "isolattice/matrix.hpp"

namespace isolattice {

struct HermiteForm {
    IntMatrix basis;      ///< n x n lower-triangular Hermite basis H
    IntMatrix transform;  ///< k x n with M * transform == H
};

/// Column-style Hermite normal form of an n x k integer matrix whose columns
/// span a rank-n lattice. H is lower triangular with positive diagonal, and in
/// row i every entry left of the diagonal lies in [0, H(i,i)).
///
/// Throws RankDeficient when the column span has rank < n.
HermiteForm hnf_columns(const IntMatrix& m);

struct SmithForm {
    IntMatrix diagonal;  ///< D = diag(d_1, ..., d_n), d_1 | d_2 | ... | d_n, all positive
    IntMatrix left;      ///< unimodular U
    IntMatrix right;     ///< unimodular V, with U * M * V == D
};

/// Smith normal form with transforms of a nonsingular square integer matrix.
/// Throws SingularMatrix when det M = 0.
SmithForm snf(const IntMatrix& m);

/// Invariant factors d_1 | ... | d_n of a nonsingular square matrix.
std::vector<Integer> invariant_factors(const IntMatrix& m);

Rational determinant(const RatMatrix& m);
Integer determinant(const IntMatrix& m);

/// Exact inverse via Gauss-Jordan elimination. Throws SingularMatrix.
RatMatrix rat_inverse(const RatMatrix& m);

/// Inverse of a unimodular integer matrix.
IntMatrix unimodular_inverse(const IntMatrix& m);

}  // namespace isolattice
