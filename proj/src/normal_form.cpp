#include "isolattice/normal_form.hpp"

#include <utility>

namespace isolattice {

namespace {

void swap_columns(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

// col_dst -= q * col_src
void subtract_column(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& q) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) -= q * m(i, src);
}

// row_dst -= q * row_src
void subtract_row(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& q) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) -= q * m(src, j);
}

void negate_column(IntMatrix& m, std::size_t j) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = -m(i, j);
}

void negate_row(IntMatrix& m, std::size_t i) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = -m(i, j);
}

// Replaces (col_a, col_b) by (s*col_a + t*col_b, -(b/g)*col_a + (a/g)*col_b),
// a unimodular step that leaves gcd(a, b) in position (row, a) and 0 in (row, b).
void combine_columns(IntMatrix& m, std::size_t ca, std::size_t cb, const Integer& s,
                     const Integer& t, const Integer& u, const Integer& v) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Integer x = m(i, ca);
        Integer y = m(i, cb);
        m(i, ca) = s * x + t * y;
        m(i, cb) = u * x + v * y;
    }
}

}  // namespace

HermiteForm hnf_columns(const IntMatrix& input) {
    const std::size_t n = input.rows();
    const std::size_t k = input.cols();
    if (k < n) throw RankDeficient("fewer columns than rows");

    IntMatrix w = input;
    IntMatrix u = IntMatrix::identity(k);

    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t j = row + 1; j < k; ++j) {
            if (w(row, j) == 0) continue;
            if (w(row, row) == 0) {
                swap_columns(w, row, j);
                swap_columns(u, row, j);
                continue;
            }
            const Integer a = w(row, row);
            const Integer b = w(row, j);
            Integer s, t;
            const Integer g = gcdext(a, b, s, t);
            const Integer bg = b / g;
            const Integer ag = a / g;
            combine_columns(w, row, j, s, t, -bg, ag);
            combine_columns(u, row, j, s, t, -bg, ag);
        }
        if (w(row, row) == 0) throw RankDeficient("column span has rank < " + std::to_string(n));
        if (w(row, row) < 0) {
            negate_column(w, row);
            negate_column(u, row);
        }
    }

    // Column `row` is zero above `row`, so reducing top-down never disturbs
    // rows that are already reduced.
    for (std::size_t row = 1; row < n; ++row) {
        for (std::size_t j = 0; j < row; ++j) {
            const Integer q = floor_div(w(row, j), w(row, row));
            if (q == 0) continue;
            subtract_column(w, j, row, q);
            subtract_column(u, j, row, q);
        }
    }

    HermiteForm result{IntMatrix(n, n), IntMatrix(k, n)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) result.basis(i, j) = w(i, j);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j) result.transform(i, j) = u(i, j);
    return result;
}

SmithForm snf(const IntMatrix& input) {
    if (!input.is_square()) throw DimensionMismatch("Smith form needs a square matrix");
    const std::size_t n = input.rows();
    IntMatrix a = input;
    IntMatrix left = IntMatrix::identity(n);
    IntMatrix right = IntMatrix::identity(n);

    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            std::size_t pi = n, pj = n;
            for (std::size_t i = t; i < n; ++i)
                for (std::size_t j = t; j < n; ++j) {
                    if (a(i, j) == 0) continue;
                    if (pi == n || abs(a(i, j)) < abs(a(pi, pj))) {
                        pi = i;
                        pj = j;
                    }
                }
            if (pi == n) throw SingularMatrix("Smith form of a singular matrix");
            swap_rows(a, t, pi);
            swap_rows(left, t, pi);
            swap_columns(a, t, pj);
            swap_columns(right, t, pj);

            bool clear = true;
            for (std::size_t i = t + 1; i < n; ++i) {
                if (a(i, t) == 0) continue;
                const Integer q = floor_div(a(i, t), a(t, t));
                subtract_row(a, i, t, q);
                subtract_row(left, i, t, q);
                if (a(i, t) != 0) clear = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (a(t, j) == 0) continue;
                const Integer q = floor_div(a(t, j), a(t, t));
                subtract_column(a, j, t, q);
                subtract_column(right, j, t, q);
                if (a(t, j) != 0) clear = false;
            }
            if (!clear) continue;

            std::size_t bad = n;
            for (std::size_t i = t + 1; i < n && bad == n; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad == n) break;
            // row_t += row_bad brings a non-multiple into row t
            subtract_row(a, t, bad, Integer(-1));
            subtract_row(left, t, bad, Integer(-1));
        }
        if (a(t, t) < 0) {
            negate_row(a, t);
            negate_row(left, t);
        }
    }
    return {std::move(a), std::move(left), std::move(right)};
}

std::vector<Integer> invariant_factors(const IntMatrix& m) {
    const SmithForm s = snf(m);
    std::vector<Integer> d(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) d[i] = s.diagonal(i, i);
    return d;
}

Rational determinant(const RatMatrix& input) {
    if (!input.is_square()) throw DimensionMismatch("determinant of a non-square matrix");
    const std::size_t n = input.rows();
    RatMatrix a = input;
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a(p, c) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
            det = -det;
        }
        det *= a(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a(i, c) == 0) continue;
            const Rational f = a(i, c) / a(c, c);
            for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
        }
    }
    return det;
}

Integer determinant(const IntMatrix& input) {
    // Fraction-free Bareiss elimination.
    if (!input.is_square()) throw DimensionMismatch("determinant of a non-square matrix");
    const std::size_t n = input.rows();
    IntMatrix a = input;
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            swap_rows(a, k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

RatMatrix rat_inverse(const RatMatrix& input) {
    if (!input.is_square()) throw DimensionMismatch("inverse of a non-square matrix");
    const std::size_t n = input.rows();
    RatMatrix a = input;
    RatMatrix inv = RatMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a(p, c) == 0) ++p;
        if (p == n) throw SingularMatrix("matrix is singular");
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(p, j), a(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        }
        const Rational pivot = a(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) /= pivot;
            inv(c, j) /= pivot;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a(i, c) == 0) continue;
            const Rational f = a(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

IntMatrix unimodular_inverse(const IntMatrix& m) {
    const Integer det = determinant(m);
    if (det != 1 && det != -1) throw InvalidArgument("matrix is not unimodular");
    return to_integer(rat_inverse(to_rational(m)));
}

}  // namespace isolattice
