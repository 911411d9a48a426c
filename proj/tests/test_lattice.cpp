#include <doctest.h>

#include <random>

#include "isolattice/lattice.hpp"
#include "oracles.hpp"

using namespace isolattice;

namespace {

Rational q(long p, long d) { return make_rational(p, d); }

RatMatrix quotient_matrix(long l) {
    return RatMatrix{{1, 0, q(1, l), 0}, {0, 1, 0, 0}, {0, 0, q(1, l), 0}, {0, 0, 0, 1}};
}

RatMatrix polarization_matrix(long l) {
    return RatMatrix{{0, q(-1, l), 0, q(1, l)}, {q(1, l), 0, 0, 0}, {0, 0, 0, -1}, {q(-1, l), 0, 1, 0}};
}

}  // namespace

TEST_CASE("lattice from kernel") {
    for (long l : {2, 3, 5, 7}) {
        CHECK(lattice_from_kernel({2, l, {{1, 0}}}).matrix() == RatMatrix{{q(1, l), 0}, {0, 1}});
        const LatticeMatrix mq = lattice_from_kernel({4, l, {{1, 0, 1, 0}}});
        CHECK(same_lattice(mq, LatticeMatrix(quotient_matrix(l))));
        CHECK(mq == canonicalize(LatticeMatrix(quotient_matrix(l))));
    }
    CHECK(lattice_from_kernel({3, 1, {}}).matrix() == RatMatrix::identity(3));
    CHECK(lattice_from_kernel({2, 6, {}}).matrix() == RatMatrix::identity(2));
    CHECK_THROWS_AS(lattice_from_kernel({2, 5, {{1, 0, 0}}}), DimensionMismatch);
    CHECK_THROWS_AS(lattice_from_kernel({2, 0, {{1, 0}}}), InvalidArgument);
}

TEST_CASE("lattice from kernel agrees with adjoining generators one at a time") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + rng() % 3;
        const long m = 2 + static_cast<long>(rng() % 11);
        std::vector<std::vector<Integer>> gens(1 + rng() % 3, std::vector<Integer>(n));
        for (auto& g : gens)
            for (auto& x : g) x = static_cast<long>(rng() % 40) - 20;
        const LatticeMatrix lat = lattice_from_kernel({n, m, gens});
        const RatMatrix expected = oracle::lattice_by_adjoining(n, m, gens);
        CHECK(oracle::lattice_contains(lat.matrix(), expected));
        CHECK(oracle::lattice_contains(expected, lat.matrix()));
        CHECK(index_over_base(lat) ==
              Rational(oracle::generated_subgroup(gens, n, m).size()));
    }
}

TEST_CASE("canonical form") {
    const LatticeMatrix mq(quotient_matrix(3));
    CHECK(canonicalize(canonicalize(mq)) == canonicalize(mq));
    const RatMatrix a{{q(2, 3), 0}, {0, 1}};
    const RatMatrix swapped{{0, q(2, 3)}, {1, 0}};
    CHECK(canonicalize(LatticeMatrix(a)) == canonicalize(LatticeMatrix(swapped)));

    std::mt19937_64 rng(9);
    const LatticeMatrix base(RatMatrix{{q(1, 5), 0}, {0, 1}});
    for (int t = 0; t < 100; ++t) {
        const RatMatrix moved = base.matrix() * to_rational(oracle::random_unimodular(2, rng));
        CHECK(canonicalize(LatticeMatrix(moved)) == base);
    }
}

TEST_CASE("containment and index") {
    for (long l : {3, 5}) {
        const LatticeMatrix phi(RatMatrix{{q(1, l), 0}, {0, 1}});
        const LatticeMatrix id = LatticeMatrix::identity(2);
        CHECK(contains(phi, id));
        CHECK_FALSE(contains(id, phi));
        const LatticeMatrix mq(quotient_matrix(l));
        const LatticeMatrix full(Rational(q(1, l)) * RatMatrix::identity(4));
        CHECK_FALSE(contains(mq, full));
        CHECK(contains(full, mq));
        CHECK(index_over_base(phi) == l);
        CHECK(index_over_base(mq) == l);
    }
    CHECK(index_over_base(LatticeMatrix::identity(3)) == 1);
    CHECK_THROWS_AS(contains(LatticeMatrix::identity(2), LatticeMatrix::identity(3)), DimensionMismatch);
    CHECK_THROWS_AS(LatticeMatrix(RatMatrix{{1, 2}, {2, 4}}), SingularMatrix);
    CHECK_THROWS_AS(LatticeMatrix(RatMatrix(2, 3)), DimensionMismatch);
}

TEST_CASE("kernel structure") {
    const auto k = kernel_structure(LatticeMatrix(RatMatrix{{q(1, 5), 0}, {0, 1}}));
    CHECK(k.factors == std::vector<Integer>{5});
    CHECK(k.generators == std::vector<std::vector<Integer>>{{1, 0}});
    CHECK(k.is_cyclic());
    CHECK(k.order() == 5);

    // The (1, l) polarization lattice has kernel (Z/l)^2 over the quotient.
    for (long l : {3, 5}) {
        const auto pk = kernel_structure(LatticeMatrix(polarization_matrix(l)));
        CHECK(pk.factors == std::vector<Integer>{l, l});
        CHECK(pk.order() == l * l);
    }
    for (long m : {2, 6}) {
        const auto full = kernel_structure(LatticeMatrix(Rational(q(1, m)) * RatMatrix::identity(2)));
        CHECK(full.factors == std::vector<Integer>{m, m});
        CHECK_FALSE(full.is_cyclic());
    }
    CHECK(kernel_structure(LatticeMatrix::identity(2)).factors.empty());
    CHECK_THROWS_AS(kernel_structure(LatticeMatrix(RatMatrix{{2, 0}, {0, 1}})), NotOverBase);
}

TEST_CASE("composition and morphisms") {
    for (long l : {3, 7}) {
        const LatticeMatrix phi(RatMatrix{{q(1, l), 0}, {0, 1}});
        const LatticeMatrix psi(RatMatrix{{1, 0}, {0, q(1, l)}});
        const LatticeMatrix both = compose(phi, psi);
        CHECK(both.matrix() == RatMatrix{{q(1, l), 0}, {0, q(1, l)}});
        // The composite kills all of E[l].
        CHECK(oracle::generated_subgroup({{1, 0}, {0, 1}}, 2, l).size() ==
              kernel_structure(both).order());
        CHECK(compose(phi, LatticeMatrix::identity(2)) == phi);
        CHECK(compose(LatticeMatrix::identity(2), phi) == phi);

        CHECK(morphism_between(LatticeMatrix::identity(2), phi) == RatMatrix{{l, 0}, {0, 1}});
        CHECK(morphism_between(phi, phi) == RatMatrix::identity(2));
        CHECK_FALSE(morphism_between(phi, LatticeMatrix::identity(2)).has_value());

        const RatMatrix product = compose(LatticeMatrix(quotient_matrix(l)),
                                          LatticeMatrix(polarization_matrix(l))).matrix();
        CHECK(product == quotient_matrix(l) * polarization_matrix(l));
    }
}
