#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "isolattice/lattice.hpp"
#include "isolattice/matrix.hpp"

namespace isolattice {

/// The action of one Galois element on the l^N-torsion in a fixed basis: an
/// element of GL_n(Z / l^N Z), entries stored in [0, l^N).
class GaloisElement {
public:
    /// Throws InvalidArgument if `prime` is not prime, exponent is 0, or the
    /// matrix is not invertible mod prime.
    GaloisElement(Integer prime, unsigned long exponent, IntMatrix entries);

    static GaloisElement identity(std::size_t n, Integer prime, unsigned long exponent);

    /// Skips validation: the caller guarantees a prime, entries already in
    /// [0, modulus) and invertibility mod prime. Used on hot paths.
    static GaloisElement unchecked(Integer prime, unsigned long exponent, Integer modulus,
                                   IntMatrix entries);

    std::size_t dimension() const noexcept { return entries_.rows(); }
    const Integer& prime() const noexcept { return prime_; }
    unsigned long exponent() const noexcept { return exponent_; }
    const Integer& modulus() const noexcept { return modulus_; }
    const IntMatrix& matrix() const noexcept { return entries_; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

    /// Image under Z/l^N -> Z/l^k, k <= N.
    GaloisElement reduce(unsigned long exponent) const;

    friend GaloisElement operator*(const GaloisElement& a, const GaloisElement& b);
    friend bool operator==(const GaloisElement& a, const GaloisElement& b) {
        return a.prime_ == b.prime_ && a.exponent_ == b.exponent_ && a.entries_ == b.entries_;
    }

private:
    struct UncheckedTag {};
    GaloisElement(UncheckedTag, Integer prime, unsigned long exponent, Integer modulus,
                  IntMatrix entries)
        : prime_(std::move(prime)), exponent_(exponent), modulus_(std::move(modulus)),
          entries_(std::move(entries)) {}

    Integer prime_;
    unsigned long exponent_ = 1;
    Integer modulus_;
    IntMatrix entries_;
};

/// Input precision exponent that determines the conjugate modulo
/// l^out_exponent: out + v_l(den M) + v_l(den M^-1).
unsigned long required_precision(const LatticeMatrix& lattice, const Integer& prime,
                                 unsigned long out_exponent);

/// Matrix of sigma in the basis of `lattice`, i.e. M^-1 sigma M reduced mod
/// l^out_exponent. Computed over Q from the integer lift of sigma.
///
/// Throws InsufficientPrecision if sigma is known to too low a precision, and
/// NotStable if some entry has l in its denominator.
GaloisElement conjugate(const GaloisElement& sigma, const LatticeMatrix& lattice,
                        unsigned long out_exponent);

/// conjugate() with the lattice-dependent work done once, for many sigmas.
class Conjugator {
public:
    Conjugator(const LatticeMatrix& lattice, Integer prime, unsigned long out_exponent);
    GaloisElement operator()(const GaloisElement& sigma) const;

private:
    Integer prime_;
    unsigned long out_exponent_;
    Integer out_modulus_;
    IntMatrix left_;          // a M^-1
    IntMatrix right_;         // b M
    Integer scale_;           // a b
    Integer prime_power_;     // l-part of a b
    Integer unit_inverse_;    // (a b / prime_power)^-1 mod l^out
    unsigned long needed_;    // required input exponent
    // Machine-word copies, used when everything is small enough.
    bool small_ = false;
    std::vector<std::int64_t> left_small_, right_small_;
    std::int64_t prime_power_small_ = 1, unit_inverse_small_ = 1, out_modulus_small_ = 1;
};

/// Whether sigma preserves the lattice. Throws InsufficientPrecision when
/// sigma's precision is below required_precision(lattice, l, 1).
bool is_stable(const GaloisElement& sigma, const LatticeMatrix& lattice);

/// det sigma, the cyclotomic character value for a 2x2 torsion block.
ResidueInt cyclotomic_character(const GaloisElement& sigma);

/// Basis (over F_l, row vectors in reduced echelon order) of the vectors
/// fixed by every element. All elements must share n, l, and exponent 1.
std::vector<std::vector<Integer>> fixed_subspace(const std::vector<GaloisElement>& elements);

// ---------------------------------------------------------------------------
// Parametrised matrix families

/// A parameter ranges over the residues v mod l^N with v = residue mod l^level;
/// `unit` additionally demands v != 0 mod l.
struct FamilyParameter {
    std::string name;
    Integer residue = 0;
    unsigned long level = 0;
    bool unit = false;

    friend bool operator==(const FamilyParameter&, const FamilyParameter&) = default;
};

/// Each entry is either a fixed constant mod l^N or a named parameter; a name
/// used in several entries forces those entries to agree.
using EntryPattern = std::variant<Integer, std::string>;

struct Monomial {
    Integer coefficient;
    std::vector<std::string> factors;

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// A polynomial identity sum(terms) = 0 mod l^N, linear in `solve_for`. That
/// parameter is not sampled but back-solved from the others.
struct SideCondition {
    std::vector<Monomial> terms;
    std::string solve_for;

    friend bool operator==(const SideCondition&, const SideCondition&) = default;
};

struct MatrixFamily {
    std::size_t n = 0;
    Integer prime = 2;
    unsigned long exponent = 1;
    std::vector<FamilyParameter> parameters;
    std::vector<std::vector<EntryPattern>> entries;  // n x n
    std::vector<SideCondition> side_conditions;

    /// Throws InvalidArgument on an ill-formed family.
    void validate() const;
    Integer modulus() const;

    friend bool operator==(const MatrixFamily&, const MatrixFamily&) = default;
};

/// Number of tuples of free (not back-solved) parameters.
Integer family_space_size(const MatrixFamily& family);

/// Element for the tuple with mixed-radix index `index`, or nullopt when the
/// tuple violates a side condition or gives a non-invertible matrix.
std::optional<GaloisElement> family_member(const MatrixFamily& family, const Integer& index);

/// Visits every member of the family in tuple order.
void enumerate_family(const MatrixFamily& family,
                      const std::function<void(const GaloisElement&)>& visit);

/// `count` members drawn uniformly over free tuples (rejecting invalid ones).
/// Sample i depends only on (seed, first_index + i), so index ranges can be
/// generated independently. Throws UnsatisfiableFamily when no member is found.
std::vector<GaloisElement> sample_family(const MatrixFamily& family, std::uint64_t seed,
                                         std::size_t count, std::uint64_t first_index = 0);

/// Membership test; on failure optionally explains why.
bool family_contains(const MatrixFamily& family, const GaloisElement& element,
                     std::string* reason = nullptr);

/// Families with at most this many free tuples are checked exhaustively.
inline constexpr std::uint64_t kExhaustiveLimit = 10'000'000;

enum class SampleMode { automatic, exhaustive, sampled };

struct Counterexample {
    GaloisElement sample;
    std::optional<GaloisElement> image;
    std::string reason;
};

struct ConjugationReport {
    MatrixFamily family;
    LatticeMatrix lattice;
    MatrixFamily target;
    bool exhaustive = false;
    std::uint64_t checked = 0;
    std::uint64_t failed = 0;
    std::optional<Counterexample> counterexample;  // present iff failed > 0

    bool ok() const noexcept { return failed == 0; }
};

/// Folds `later` into `earlier`, keeping the earliest counterexample.
void merge_reports(ConjugationReport& earlier, const ConjugationReport& later);

/// Conjugates members of `family` by `lattice` at the target's precision and
/// checks each image for membership in `target`. NotStable becomes a
/// counterexample. In automatic mode families with at most kExhaustiveLimit
/// tuples are enumerated, otherwise `count` seeded samples are drawn.
ConjugationReport verify_image_shape(const MatrixFamily& family, const LatticeMatrix& lattice,
                                     const MatrixFamily& target, std::uint64_t seed,
                                     std::size_t count,
                                     SampleMode mode = SampleMode::automatic,
                                     unsigned threads = 0);

}  // namespace isolattice
