#pragma once

#include <optional>
#include <vector>

#include "isolattice/matrix.hpp"

namespace isolattice {

/// A full-rank sublattice of Q^n, given by the change of basis matrix whose
/// columns are a basis of the lattice written in the base basis. The base
/// lattice Z^n is the identity matrix, and an isogeny out of the base variety
/// corresponds to the lattice of vectors it maps into the target's Tate module.
class LatticeMatrix {
public:
    /// Throws SingularMatrix if det = 0, DimensionMismatch if not square.
    explicit LatticeMatrix(RatMatrix basis);

    static LatticeMatrix identity(std::size_t n);

    std::size_t dimension() const noexcept { return basis_.rows(); }
    const RatMatrix& matrix() const noexcept { return basis_; }

    /// Smallest positive m with m * matrix() integral.
    const Integer& denominator_bound() const noexcept { return denominator_; }

    const RatMatrix& inverse() const noexcept { return inverse_; }

    friend bool operator==(const LatticeMatrix& a, const LatticeMatrix& b) {
        return a.basis_ == b.basis_;
    }

private:
    RatMatrix basis_;
    RatMatrix inverse_;
    Integer denominator_;
};

/// Generators of a finite subgroup of (Z/mZ)^n.
struct KernelData {
    std::size_t n = 0;
    Integer modulus = 1;
    std::vector<std::vector<Integer>> generators;

    /// Throws InvalidArgument/DimensionMismatch on a bad shape or modulus.
    void validate() const;
};

/// Invariant factors d_1 | d_2 | ... (each > 1), and for each factor a
/// generator of that order, written as a vector mod `modulus`.
struct AbelianGroupInvariants {
    std::vector<Integer> factors;
    Integer modulus = 1;
    std::vector<std::vector<Integer>> generators;

    Integer order() const;
    bool is_cyclic() const { return factors.size() <= 1; }
};

/// Lattice spanned by Z^n together with x_j / m for the kernel generators,
/// returned in canonical form. Its index over Z^n is the order of the
/// subgroup the generators span.
LatticeMatrix lattice_from_kernel(const KernelData& kernel);

/// Hermite-reduced representative: scale to integrality by the minimal
/// positive integer, take the lower-triangular column HNF, scale back.
/// Two lattices are equal iff their canonical forms are entrywise equal.
LatticeMatrix canonicalize(const LatticeMatrix& lattice);

bool same_lattice(const LatticeMatrix& a, const LatticeMatrix& b);

/// True iff inner is a sublattice of outer, i.e. outer^-1 * inner is integral.
bool contains(const LatticeMatrix& outer, const LatticeMatrix& inner);

/// Generalised index |det M|^-1; equals [L : Z^n] when L contains Z^n.
Rational index_over_base(const LatticeMatrix& lattice);

/// Structure of L / Z^n, read off the Smith form of M^-1.
/// Throws NotOverBase if L does not contain Z^n.
AbelianGroupInvariants kernel_structure(const LatticeMatrix& lattice);

/// Change of basis for the composite: `first` is relative to the base basis,
/// `second` is relative to the basis of `first`.
LatticeMatrix compose(const LatticeMatrix& first, const LatticeMatrix& second);

/// The unique morphism source -> target, i.e. target^-1 * source, when
/// source is contained in target.
std::optional<RatMatrix> morphism_between(const LatticeMatrix& source,
                                          const LatticeMatrix& target);

}  // namespace isolattice
