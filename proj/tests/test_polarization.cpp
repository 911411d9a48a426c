#include <doctest.h>

#include <random>

#include "isolattice/polarization.hpp"
#include "oracles.hpp"

using namespace isolattice;

namespace {

Rational q(long p, long d) { return make_rational(p, d); }

LatticeMatrix quotient(long l) {
    return LatticeMatrix(RatMatrix{{1, 0, q(1, l), 0}, {0, 1, 0, 0}, {0, 0, q(1, l), 0}, {0, 0, 0, 1}});
}

RatMatrix polarization_matrix(long l) {
    return RatMatrix{{0, q(-1, l), 0, q(1, l)}, {q(1, l), 0, 0, 0}, {0, 0, 0, -1}, {q(-1, l), 0, 1, 0}};
}

}  // namespace

TEST_CASE("Gram matrices") {
    CHECK(gram_from_type({1}) == IntMatrix{{0, 1}, {-1, 0}});
    CHECK(gram_from_type({1, 3}) == IntMatrix{{0, 0, 1, 0}, {0, 0, 0, 3}, {-1, 0, 0, 0}, {0, -3, 0, 0}});
    CHECK(gram_from_type({2, 2}) == IntMatrix{{0, 0, 2, 0}, {0, 0, 0, 2}, {-2, 0, 0, 0}, {0, -2, 0, 0}});
    CHECK_THROWS_AS(gram_from_type({}), BadType);
    CHECK_THROWS_AS(gram_from_type({2, 3}), BadType);
    CHECK_THROWS_AS(gram_from_type({0}), BadType);

    const auto p = PolarizationDesc::from_gram(IntMatrix{{0, 0, 1, 0}, {0, 0, 0, 3}, {-1, 0, 0, 0}, {0, -3, 0, 0}});
    CHECK(p.type() == std::vector<Integer>{1, 3});
    CHECK_FALSE(p.is_principal());
    CHECK(PolarizationDesc::principal_product(2).gram() ==
          IntMatrix{{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}});
    CHECK(PolarizationDesc::principal_product(2).is_principal());
    CHECK_THROWS_AS(PolarizationDesc::from_gram(IntMatrix{{1, 0}, {0, 1}}), BadType);
    CHECK_THROWS_AS(PolarizationDesc::from_gram(IntMatrix{{0, 0}, {0, 0}}), BadType);
    CHECK_THROWS_AS(PolarizationDesc::from_gram(IntMatrix{{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}), BadType);
}

TEST_CASE("polarization lattices") {
    const auto principal = PolarizationDesc::from_type({1});
    CHECK(lattice_of_polarization(principal).matrix() == RatMatrix{{0, -1}, {1, 0}});
    const auto p13 = PolarizationDesc::from_type({1, 3});
    CHECK(lattice_of_polarization(p13).matrix() ==
          oracle::adjugate_inverse(to_rational(gram_from_type({1, 3}))));
    CHECK(polarization_type(lattice_of_polarization(p13)) == std::vector<Integer>{1, 3});
    // d * lambda has lattice (1/d) Lambda.
    const auto scaled = PolarizationDesc::from_type({5});
    CHECK(lattice_of_polarization(scaled).matrix() ==
          Rational(q(1, 5)) * lattice_of_polarization(principal).matrix());
    CHECK_THROWS_AS(polarization_type(LatticeMatrix(RatMatrix{{q(1, 2), 0}, {0, 1}})), NotAPolarizationLattice);
    CHECK_THROWS_AS(polarization_type(LatticeMatrix(RatMatrix{{1, 0}, {0, 1}})), NotAPolarizationLattice);
    CHECK_THROWS_AS(polarization_type(LatticeMatrix::identity(3)), NotAPolarizationLattice);
}

TEST_CASE("dual isogeny") {
    const LatticeMatrix phi(RatMatrix{{q(1, 3), 0}, {0, 1}});
    CHECK(dual_isogeny(phi) == phi);
    CHECK(dual_isogeny(quotient(3)).matrix() == quotient(3).matrix().transpose());
    CHECK(dual_isogeny(dual_isogeny(quotient(3))) == quotient(3));
}

TEST_CASE("elliptic pullback and pushforward") {
    const auto principal = PolarizationDesc::from_type({1});
    for (long l : {2, 3, 5, 7}) {
        const LatticeMatrix phi(RatMatrix{{q(1, l), 0}, {0, 1}});
        const LatticeMatrix pulled = pullback(phi, principal);
        CHECK(pulled.matrix() == RatMatrix{{0, q(-1, l)}, {q(1, l), 0}});
        CHECK(polarization_type(pulled) == std::vector<Integer>{l});
        const auto pushed = pushforward(phi, principal);
        REQUIRE(std::holds_alternative<Pushforward>(pushed));
        const auto& p = std::get<Pushforward>(pushed);
        CHECK(p.d == l);
        CHECK(p.lattice.matrix() == RatMatrix{{0, -1}, {1, 0}});
        CHECK(pullback(phi, p.lattice) == pulled);
    }
    CHECK(pullback(LatticeMatrix::identity(2), principal) == lattice_of_polarization(principal));
    const auto trivial = std::get<Pushforward>(pushforward(LatticeMatrix::identity(2), principal));
    CHECK(trivial.d == 1);
    CHECK(trivial.lattice == lattice_of_polarization(principal));
}

TEST_CASE("pushforward along random cyclic l-isogenies is principal") {
    std::mt19937_64 rng(17);
    const auto principal = PolarizationDesc::from_type({1});
    for (int t = 0; t < 40; ++t) {
        const long l = std::vector<long>{2, 3, 5, 7}[rng() % 4];
        std::vector<Integer> v{static_cast<long>(rng() % l), static_cast<long>(rng() % l)};
        if (v[0] == 0 && v[1] == 0) v[0] = 1;
        const LatticeMatrix phi = lattice_from_kernel({2, l, {v}});
        const auto p = std::get<Pushforward>(pushforward(phi, principal));
        CHECK(p.d == l);
        CHECK(polarization_type(p.lattice) == std::vector<Integer>{1});
        // d lambda = phi^dual . phi_* lambda . phi
        CHECK(pullback(phi, p.lattice).matrix() ==
              Rational(q(1, l)) * lattice_of_polarization(principal).matrix());
    }
}

TEST_CASE("surface pushforward gives the (1, l) polarization") {
    const auto product = PolarizationDesc::principal_product(2);
    for (long l : {2, 3, 5, 7}) {
        const auto pushed = pushforward(quotient(l), product);
        REQUIRE(std::holds_alternative<Pushforward>(pushed));
        const auto& p = std::get<Pushforward>(pushed);
        CHECK(p.d == l);
        CHECK(p.lattice.matrix() == polarization_matrix(l));
        CHECK(polarization_type(p.lattice) == std::vector<Integer>{1, l});
        // The dual lattice lambda . q sits inside the product's lattice.
        const RatMatrix product_lattice = quotient(l).matrix() * p.lattice.matrix();
        CHECK(oracle::lattice_contains(product_lattice, RatMatrix::identity(4)));
    }
}

TEST_CASE("pushforward existence rules") {
    const auto product = PolarizationDesc::principal_product(2);
    // Full 3-torsion of the first factor: not isotropic.
    const LatticeMatrix e1 = lattice_from_kernel({4, 3, {{1, 0, 0, 0}, {0, 1, 0, 0}}});
    const auto none = pushforward(e1, product);
    REQUIRE(std::holds_alternative<NoPushforward>(none));
    CHECK(std::get<NoPushforward>(none).reason == PushforwardFailure::NotIsotropic);
    // A non-cyclic isotropic kernel: <(1,0,0,0), (0,0,1,0)>.
    const LatticeMatrix iso = lattice_from_kernel({4, 3, {{1, 0, 0, 0}, {0, 0, 1, 0}}});
    const auto p = std::get<Pushforward>(pushforward(iso, product));
    CHECK(p.d == 3);
    CHECK(polarization_type(p.lattice) == std::vector<Integer>{1, 1});
    // Non-principal polarization and non-cyclic kernel: undecided.
    const auto undecided = pushforward(iso, PolarizationDesc::from_type({1, 3}));
    REQUIRE(std::holds_alternative<NoPushforward>(undecided));
    CHECK(std::get<NoPushforward>(undecided).reason == PushforwardFailure::Undecided);
    CHECK_THROWS_AS(pushforward(LatticeMatrix(RatMatrix{{2, 0}, {0, 1}}), PolarizationDesc::from_type({1})),
                    NotOverBase);
    CHECK_THROWS_AS(pushforward(quotient(3), PolarizationDesc::from_type({1})), DimensionMismatch);
}

TEST_CASE("Weil pairing and isotropy") {
    const auto p13 = PolarizationDesc::from_type({1, 3});
    CHECK(weil_pairing({1, 0, 0, 0}, {0, 0, 1, 0}, p13, 3) == ResidueInt(1, 3));
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
        std::vector<Integer> u(4);
        for (auto& x : u) x = static_cast<long>(rng() % 7);
        CHECK(weil_pairing(u, u, p13, 7).value() == 0);
    }
    const auto product = PolarizationDesc::principal_product(2);
    for (long l : {3, 5}) {
        CHECK(is_isotropic({{1, 0, 1, 0}}, l, product));
        CHECK(is_isotropic({}, l, product));
    }
    CHECK_FALSE(is_isotropic({{1, 0, 0, 0}, {0, 0, 1, 0}}, 3, PolarizationDesc::from_type({1, 1})));
    CHECK(is_isotropic({{1, 0, 0, 0}, {0, 1, 0, 0}}, 3, PolarizationDesc::from_type({1, 1})));
    CHECK_THROWS_AS(is_isotropic({{1, 0, 0, 0}, {0, 1, 0, 0}}, 3, p13), UnsupportedPolarizationType);
    CHECK(is_isotropic({{1, 0, 0, 0}}, 3, p13));
    CHECK_THROWS_AS(weil_pairing({1, 0}, {0, 1, 0, 0}, p13, 3), DimensionMismatch);
}

TEST_CASE("pullback identities on random rational matrices") {
    std::mt19937_64 rng(23);
    const auto p = PolarizationDesc::from_type({1, 2});
    const LatticeMatrix lam = lattice_of_polarization(p);
    for (int t = 0; t < 50; ++t) {
        const LatticeMatrix f(oracle::random_nonsingular_rational(4, rng));
        const LatticeMatrix g(oracle::random_nonsingular_rational(4, rng));
        CHECK(dual_isogeny(dual_isogeny(f)) == f);
        CHECK(pullback(compose(f, g), lam) == pullback(f, pullback(g, lam)));
        CHECK(dual_isogeny(compose(f, g)).matrix() == g.matrix().transpose() * f.matrix().transpose());
    }
}
