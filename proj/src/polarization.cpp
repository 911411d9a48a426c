#include "isolattice/polarization.hpp"

#include "isolattice/normal_form.hpp"

namespace isolattice {

namespace {

// Pairs up sorted invariant factors (d1, d1, d2, d2, ...) into (d1, d2, ...).
std::optional<std::vector<Integer>> paired_factors(const std::vector<Integer>& factors) {
    if (factors.size() % 2 != 0) return std::nullopt;
    std::vector<Integer> type;
    for (std::size_t i = 0; i < factors.size(); i += 2) {
        if (factors[i] != factors[i + 1]) return std::nullopt;
        type.push_back(factors[i]);
    }
    return type;
}

}  // namespace

IntMatrix gram_from_type(const std::vector<Integer>& type) {
    if (type.empty()) throw BadType("polarization type must be non-empty");
    for (std::size_t i = 0; i < type.size(); ++i) {
        if (type[i] < 1) throw BadType("type entries must be positive");
        if (i > 0 && type[i] % type[i - 1] != 0) {
            throw BadType("type entries must form a divisibility chain");
        }
    }
    const std::size_t g = type.size();
    IntMatrix gram(2 * g, 2 * g);
    for (std::size_t i = 0; i < g; ++i) {
        gram(i, g + i) = type[i];
        gram(g + i, i) = -type[i];
    }
    return gram;
}

PolarizationDesc PolarizationDesc::from_type(const std::vector<Integer>& type) {
    return PolarizationDesc(type, gram_from_type(type));
}

PolarizationDesc PolarizationDesc::principal_product(std::size_t g) {
    if (g == 0) throw BadType("polarization type must be non-empty");
    IntMatrix gram(2 * g, 2 * g);
    for (std::size_t i = 0; i < g; ++i) {
        gram(2 * i, 2 * i + 1) = 1;
        gram(2 * i + 1, 2 * i) = -1;
    }
    return PolarizationDesc(std::vector<Integer>(g, 1), std::move(gram));
}

PolarizationDesc PolarizationDesc::from_gram(IntMatrix gram) {
    if (!gram.is_square() || gram.rows() % 2 != 0) {
        throw BadType("Gram matrix must be square of even size");
    }
    if (!is_antisymmetric(gram)) throw BadType("Gram matrix must be antisymmetric");
    std::vector<Integer> factors;
    try {
        factors = invariant_factors(gram);
    } catch (const SingularMatrix&) {
        throw BadType("Gram matrix must be nonsingular");
    }
    auto type = paired_factors(factors);
    // Antisymmetric integer matrices always have paired invariant factors.
    if (!type) throw BadType("Gram matrix invariant factors do not pair up");
    return PolarizationDesc(std::move(*type), std::move(gram));
}

bool PolarizationDesc::is_principal() const {
    for (const auto& d : type_)
        if (d != 1) return false;
    return true;
}

LatticeMatrix lattice_of_polarization(const PolarizationDesc& pol) {
    return LatticeMatrix(rat_inverse(to_rational(pol.gram())));
}

LatticeMatrix dual_isogeny(const LatticeMatrix& m) { return LatticeMatrix(m.matrix().transpose()); }

LatticeMatrix pullback(const LatticeMatrix& map, const LatticeMatrix& polarization_lattice) {
    if (map.dimension() != polarization_lattice.dimension()) {
        throw DimensionMismatch("isogeny and polarization differ in dimension");
    }
    return LatticeMatrix(map.matrix() * polarization_lattice.matrix() * map.matrix().transpose());
}

LatticeMatrix pullback(const LatticeMatrix& map, const PolarizationDesc& pol) {
    return pullback(map, lattice_of_polarization(pol));
}

const char* to_string(PushforwardFailure reason) {
    switch (reason) {
        case PushforwardFailure::NotIsotropic: return "NotIsotropic";
        case PushforwardFailure::Undecided: return "Undecided";
    }
    return "Unknown";
}

std::variant<Pushforward, NoPushforward> pushforward(const LatticeMatrix& phi,
                                                     const PolarizationDesc& pol) {
    if (phi.dimension() != pol.gram().rows()) {
        throw DimensionMismatch("isogeny and polarization differ in dimension");
    }
    const AbelianGroupInvariants kernel = kernel_structure(phi);

    // ker(phi) inside ker(d lambda)  <=>  d * Lambda^-1 * M_phi integral.
    const Integer d = denominator(to_rational(pol.gram()) * phi.matrix());

    if (!kernel.is_cyclic()) {
        if (!pol.is_principal()) {
            return NoPushforward{PushforwardFailure::Undecided,
                                 "non-cyclic kernel and non-principal polarization"};
        }
        // Kernel points are v/m with m = denominator bound; as d-torsion they
        // are (d/m) v / d. For principal pol, d = m.
        std::vector<std::vector<Integer>> gens;
        for (const auto& v : kernel.generators) {
            std::vector<Integer> u;
            for (const auto& x : v) {
                const Integer scaled = x * d;
                if (scaled % kernel.modulus != 0) {
                    return NoPushforward{PushforwardFailure::NotIsotropic,
                                         "kernel is not contained in the d-torsion"};
                }
                u.push_back(scaled / kernel.modulus);
            }
            gens.push_back(std::move(u));
        }
        if (!is_isotropic(gens, d, pol)) {
            return NoPushforward{PushforwardFailure::NotIsotropic,
                                 "kernel is not isotropic for the pairing mod " + to_string(d)};
        }
    }

    const RatMatrix scaled_pol =
        make_rational(1, d) * lattice_of_polarization(pol).matrix();
    const RatMatrix result =
        phi.inverse() * scaled_pol * phi.inverse().transpose();
    return Pushforward{d, LatticeMatrix(result)};
}

ResidueInt weil_pairing(const std::vector<Integer>& u, const std::vector<Integer>& v,
                        const PolarizationDesc& pol, const Integer& modulus) {
    const IntMatrix& gram = pol.gram();
    if (u.size() != gram.rows() || v.size() != gram.rows()) {
        throw DimensionMismatch("pairing vectors must have length 2g");
    }
    Integer total = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0) continue;
        for (std::size_t j = 0; j < v.size(); ++j) total += u[i] * gram(i, j) * v[j];
    }
    return ResidueInt(total, modulus);
}

bool is_isotropic(const std::vector<std::vector<Integer>>& generators, const Integer& d,
                  const PolarizationDesc& pol) {
    const std::size_t n = pol.gram().rows();
    for (const auto& x : generators) {
        if (x.size() != n) throw DimensionMismatch("generator length must be 2g");
    }
    if (generators.empty() || d == 1) return true;
    if (!pol.is_principal()) {
        const auto sub = kernel_structure(lattice_from_kernel(KernelData{n, d, generators}));
        if (!sub.is_cyclic()) {
            throw UnsupportedPolarizationType(
                "isotropy is only decided for principal polarizations or cyclic subgroups");
        }
        return true;
    }
    for (std::size_t i = 0; i < generators.size(); ++i)
        for (std::size_t j = i + 1; j < generators.size(); ++j)
            if (weil_pairing(generators[i], generators[j], pol, d).value() != 0) return false;
    return true;
}

std::vector<Integer> polarization_type(const LatticeMatrix& m) {
    if (m.dimension() % 2 != 0) throw NotAPolarizationLattice("dimension is odd");
    if (!is_integral(m.inverse())) {
        throw NotAPolarizationLattice("inverse is not integral");
    }
    const IntMatrix gram = to_integer(m.inverse());
    if (!is_antisymmetric(gram)) throw NotAPolarizationLattice("inverse is not antisymmetric");
    auto type = paired_factors(invariant_factors(gram));
    if (!type) throw NotAPolarizationLattice("invariant factors do not pair up");
    return *type;
}

}  // namespace isolattice
