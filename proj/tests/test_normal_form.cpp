#include <doctest.h>

#include <random>

#include "isolattice/normal_form.hpp"
#include "oracles.hpp"

using namespace isolattice;

namespace {

bool is_lower_hermite(const IntMatrix& h) {
    for (std::size_t i = 0; i < h.rows(); ++i) {
        if (h(i, i) <= 0) return false;
        for (std::size_t j = i + 1; j < h.cols(); ++j)
            if (h(i, j) != 0) return false;
        for (std::size_t j = 0; j < i; ++j)
            if (h(i, j) < 0 || h(i, j) >= h(i, i)) return false;
    }
    return true;
}

IntMatrix random_int(std::size_t r, std::size_t c, std::mt19937_64& rng, int range) {
    std::uniform_int_distribution<int> d(-range, range);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
}

}  // namespace

TEST_CASE("hnf of small examples") {
    CHECK(hnf_columns(IntMatrix::identity(2)).basis == IntMatrix::identity(2));
    const IntMatrix m{{5, 0, 1}, {0, 5, 0}};
    const HermiteForm h = hnf_columns(m);
    CHECK(h.basis == IntMatrix{{1, 0}, {0, 5}});
    CHECK(m * h.transform == h.basis);
    CHECK_THROWS_AS(hnf_columns(IntMatrix{{1, 2}, {2, 4}}), RankDeficient);
}

TEST_CASE("hnf spans the same lattice as the input") {
    std::mt19937_64 rng(7);
    int tested = 0;
    while (tested < 50) {
        const IntMatrix m = random_int(3, 5, rng, 9);
        HermiteForm h{IntMatrix(1, 1), IntMatrix(1, 1)};
        try {
            h = hnf_columns(m);
        } catch (const RankDeficient&) {
            continue;
        }
        ++tested;
        CHECK(is_lower_hermite(h.basis));
        CHECK(m * h.transform == h.basis);
        const RatMatrix basis = to_rational(h.basis);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::vector<Rational> col;
            for (const auto& x : m.column(j)) col.emplace_back(x);
            CHECK(oracle::in_span(basis, col));
        }
        // Hermite form is unique: a unimodular change of generators keeps it.
        CHECK(hnf_columns(h.basis * oracle::random_unimodular(3, rng)).basis == h.basis);
    }
}

TEST_CASE("smith form") {
    const SmithForm s = snf(IntMatrix::diagonal({2, 6}));
    CHECK(s.diagonal == IntMatrix::diagonal({2, 6}));
    CHECK(s.left == IntMatrix::identity(2));
    CHECK(s.right == IntMatrix::identity(2));
    CHECK(invariant_factors(IntMatrix{{1, 0}, {0, 5}}) == std::vector<Integer>{1, 5});
    CHECK(invariant_factors(IntMatrix::diagonal({6, 4})) == std::vector<Integer>{2, 12});
    CHECK_THROWS_AS(snf(IntMatrix{{1, 2}, {2, 4}}), SingularMatrix);

    for (int l : {2, 3, 5, 7}) {
        // Inverse of the (1, l) polarization lattice of the surface quotient.
        const IntMatrix g{{0, l, 0, 0}, {-l, 0, -1, 0}, {0, 1, 0, 1}, {0, 0, -1, 0}};
        CHECK(invariant_factors(g) == std::vector<Integer>{1, 1, l, l});
    }

    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        const IntMatrix m = random_int(4, 4, rng, 6);
        if (oracle::laplace_det(m) == 0) continue;
        const SmithForm f = snf(m);
        CHECK(f.left * m * f.right == f.diagonal);
        CHECK(abs(oracle::laplace_det(f.left)) == 1);
        CHECK(abs(oracle::laplace_det(f.right)) == 1);
        Integer product = 1;
        for (std::size_t i = 0; i < 4; ++i) {
            product *= f.diagonal(i, i);
            if (i > 0) CHECK(f.diagonal(i, i) % f.diagonal(i - 1, i - 1) == 0);
        }
        CHECK(product == abs(oracle::laplace_det(m)));
    }
}

TEST_CASE("brute-force cokernel of the (1, 3) Gram matrix is (Z/3)^2") {
    const IntMatrix g{{0, 3, 0, 0}, {-3, 0, -1, 0}, {0, 1, 0, 1}, {0, 0, -1, 0}};
    const RatMatrix basis = to_rational(g);
    // 9 Z^4 lies in g Z^4, so the box [0, 9)^4 meets every coset.
    std::vector<std::vector<Rational>> reps;
    for (int code = 0; code < 6561; ++code) {
        const std::vector<Rational> v{code % 9, code / 9 % 9, code / 81 % 9, code / 729};
        bool fresh = true;
        for (const auto& r : reps) {
            if (oracle::in_span(basis, {v[0] - r[0], v[1] - r[1], v[2] - r[2], v[3] - r[3]})) {
                fresh = false;
                break;
            }
        }
        if (fresh) reps.push_back(v);
    }
    int three_torsion = 0;
    for (const auto& r : reps)
        if (oracle::in_span(basis, {3 * r[0], 3 * r[1], 3 * r[2], 3 * r[3]})) ++three_torsion;
    CHECK(reps.size() == 9);
    CHECK(three_torsion == 9);
}

TEST_CASE("determinant and inverses") {
    CHECK(determinant(IntMatrix{{2, 1}, {1, 1}}) == 1);
    CHECK(determinant(RatMatrix{{make_rational(1, 2), 0}, {0, 4}}) == 2);
    const RatMatrix m{{make_rational(1, 5), 0}, {0, 1}};
    CHECK(rat_inverse(m) == RatMatrix{{5, 0}, {0, 1}});
    CHECK(rat_inverse(RatMatrix::identity(3)) == RatMatrix::identity(3));
    CHECK_THROWS_AS(rat_inverse(RatMatrix{{1, 2}, {2, 4}}), SingularMatrix);
    CHECK(unimodular_inverse(IntMatrix{{2, 1}, {1, 1}}) == IntMatrix{{1, -1}, {-1, 2}});

    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        const RatMatrix r = oracle::random_nonsingular_rational(4, rng);
        CHECK(rat_inverse(r) == oracle::adjugate_inverse(r));
        CHECK(determinant(r) == oracle::laplace_det(r));
    }
}
