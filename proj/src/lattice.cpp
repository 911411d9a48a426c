#include "isolattice/lattice.hpp"

#include "isolattice/normal_form.hpp"

namespace isolattice {

LatticeMatrix::LatticeMatrix(RatMatrix basis)
    : basis_(std::move(basis)), inverse_(1, 1), denominator_(1) {
    if (!basis_.is_square()) throw DimensionMismatch("lattice matrix must be square");
    inverse_ = rat_inverse(basis_);
    denominator_ = denominator(basis_);
}

LatticeMatrix LatticeMatrix::identity(std::size_t n) {
    return LatticeMatrix(RatMatrix::identity(n));
}

void KernelData::validate() const {
    if (n == 0) throw InvalidArgument("kernel dimension must be positive");
    if (modulus < 1) throw InvalidArgument("kernel modulus must be at least 1");
    for (const auto& g : generators) {
        if (g.size() != n) {
            throw DimensionMismatch("generator has length " + std::to_string(g.size()) +
                                    ", expected " + std::to_string(n));
        }
    }
}

Integer AbelianGroupInvariants::order() const {
    Integer o = 1;
    for (const auto& d : factors) o *= d;
    return o;
}

LatticeMatrix lattice_from_kernel(const KernelData& kernel) {
    kernel.validate();
    const std::size_t n = kernel.n;
    const Integer& m = kernel.modulus;
    // Scaled by m: columns m*e_i and the generators x_j themselves.
    IntMatrix gens(n, n + kernel.generators.size());
    for (std::size_t i = 0; i < n; ++i) gens(i, i) = m;
    for (std::size_t j = 0; j < kernel.generators.size(); ++j)
        for (std::size_t i = 0; i < n; ++i)
            gens(i, n + j) = mod_nonneg(kernel.generators[j][i], m);
    const IntMatrix h = hnf_columns(gens).basis;
    const Rational inv_m = make_rational(1, m);
    return canonicalize(LatticeMatrix(inv_m * to_rational(h)));
}

LatticeMatrix canonicalize(const LatticeMatrix& lattice) {
    const Integer& scale = lattice.denominator_bound();
    const IntMatrix scaled = to_integer(Rational(scale) * lattice.matrix());
    const IntMatrix h = hnf_columns(scaled).basis;
    return LatticeMatrix(make_rational(1, scale) * to_rational(h));
}

bool same_lattice(const LatticeMatrix& a, const LatticeMatrix& b) {
    if (a.dimension() != b.dimension()) return false;
    return canonicalize(a) == canonicalize(b);
}

bool contains(const LatticeMatrix& outer, const LatticeMatrix& inner) {
    if (outer.dimension() != inner.dimension()) {
        throw DimensionMismatch("lattices of dimension " + std::to_string(outer.dimension()) +
                                " and " + std::to_string(inner.dimension()));
    }
    return is_integral(outer.inverse() * inner.matrix());
}

Rational index_over_base(const LatticeMatrix& lattice) {
    return 1 / abs(determinant(lattice.matrix()));
}

AbelianGroupInvariants kernel_structure(const LatticeMatrix& lattice) {
    if (!is_integral(lattice.inverse())) {
        throw NotOverBase("lattice does not contain the base lattice");
    }
    const std::size_t n = lattice.dimension();
    const SmithForm s = snf(to_integer(lattice.inverse()));
    // y -> U y identifies Z^n / M^-1 Z^n (coordinates in the lattice basis)
    // with the sum of Z/d_i; the i-th generator is M * U^-1 * e_i.
    const RatMatrix gens = lattice.matrix() * to_rational(unimodular_inverse(s.left));
    AbelianGroupInvariants out;
    out.modulus = lattice.denominator_bound();
    const Rational m(out.modulus);
    for (std::size_t i = 0; i < n; ++i) {
        if (s.diagonal(i, i) == 1) continue;
        out.factors.push_back(s.diagonal(i, i));
        std::vector<Integer> g(n);
        for (std::size_t r = 0; r < n; ++r) {
            const Rational scaled = m * gens(r, i);
            g[r] = mod_nonneg(scaled.get_num(), out.modulus);
        }
        out.generators.push_back(std::move(g));
    }
    return out;
}

LatticeMatrix compose(const LatticeMatrix& first, const LatticeMatrix& second) {
    if (first.dimension() != second.dimension()) {
        throw DimensionMismatch("cannot compose lattices of different dimension");
    }
    return LatticeMatrix(first.matrix() * second.matrix());
}

std::optional<RatMatrix> morphism_between(const LatticeMatrix& source,
                                          const LatticeMatrix& target) {
    if (source.dimension() != target.dimension()) {
        throw DimensionMismatch("lattices of different dimension");
    }
    RatMatrix map = target.inverse() * source.matrix();
    if (!is_integral(map)) return std::nullopt;
    return map;
}

}  // namespace isolattice
