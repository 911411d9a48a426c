#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "isolattice/lattice.hpp"
#include "isolattice/matrix.hpp"

namespace isolattice {

/// A polarization recorded by its type (d_1 | ... | d_g) and the Gram matrix
/// of the pairing it induces on the base lattice. The Gram matrix is
/// antisymmetric and nonsingular, with invariant factors d_1, d_1, ..., d_g, d_g.
class PolarizationDesc {
public:
    /// Standard symplectic form [[0, D], [-D, 0]]. Throws BadType.
    static PolarizationDesc from_type(const std::vector<Integer>& type);

    /// Product of g principally polarized elliptic curves, each block [[0, 1], [-1, 0]].
    static PolarizationDesc principal_product(std::size_t g);

    /// Any antisymmetric nonsingular Gram matrix; the type is recovered from
    /// its Smith form. Throws BadType.
    static PolarizationDesc from_gram(IntMatrix gram);

    std::size_t g() const noexcept { return type_.size(); }
    const std::vector<Integer>& type() const noexcept { return type_; }
    const IntMatrix& gram() const noexcept { return gram_; }
    bool is_principal() const;

    friend bool operator==(const PolarizationDesc& a, const PolarizationDesc& b) {
        return a.type_ == b.type_ && a.gram_ == b.gram_;
    }

private:
    PolarizationDesc(std::vector<Integer> type, IntMatrix gram)
        : type_(std::move(type)), gram_(std::move(gram)) {}

    std::vector<Integer> type_;
    IntMatrix gram_;
};

/// [[0, D], [-D, 0]] with D = diag(type). Throws BadType unless the entries
/// are positive and form a divisibility chain.
IntMatrix gram_from_type(const std::vector<Integer>& type);

/// Change of basis matrix of the polarization's lattice: gram^-1.
LatticeMatrix lattice_of_polarization(const PolarizationDesc& pol);

/// Transpose: the change of basis matrix of the dual isogeny.
LatticeMatrix dual_isogeny(const LatticeMatrix& m);

/// M_f * Lambda * M_f^T, the lattice of f^dual . lambda . f.
LatticeMatrix pullback(const LatticeMatrix& map, const LatticeMatrix& polarization_lattice);
LatticeMatrix pullback(const LatticeMatrix& map, const PolarizationDesc& pol);

struct Pushforward {
    Integer d;              ///< minimal d with ker(phi) inside ker(d * lambda)
    LatticeMatrix lattice;  ///< M_phi^-1 * (1/d) Lambda * (M_phi^T)^-1
};

enum class PushforwardFailure { NotIsotropic, Undecided };

struct NoPushforward {
    PushforwardFailure reason;
    std::string detail;
};

const char* to_string(PushforwardFailure reason);

/// Pushforward of `pol` along the isogeny with lattice `phi`. Exists when the
/// kernel is cyclic; for principal `pol` it exists iff the kernel is isotropic
/// for the pairing mod d; otherwise Undecided. Throws NotOverBase.
std::variant<Pushforward, NoPushforward> pushforward(const LatticeMatrix& phi,
                                                     const PolarizationDesc& pol);

/// u^T * gram * v mod m.
ResidueInt weil_pairing(const std::vector<Integer>& u, const std::vector<Integer>& v,
                        const PolarizationDesc& pol, const Integer& modulus);

/// True iff all generators pair to zero mod d. Throws
/// UnsupportedPolarizationType for a non-principal polarization unless the
/// generated subgroup is cyclic.
bool is_isotropic(const std::vector<std::vector<Integer>>& generators, const Integer& d,
                  const PolarizationDesc& pol);

/// Type (d_1, ..., d_g) of the polarization with lattice `m`: M^-1 must be an
/// integral antisymmetric matrix whose invariant factors come in equal pairs.
/// Throws NotAPolarizationLattice.
std::vector<Integer> polarization_type(const LatticeMatrix& m);

}  // namespace isolattice
