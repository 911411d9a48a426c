// Matrix families shared by the Galois tests and the acceptance run.
#pragma once

#include "isolattice/wire.hpp"
#include "oracles.hpp"

namespace families {

using namespace isolattice;

inline MatrixFamily family(long l, unsigned long exponent, const char* body) {
    isolattice::wire::Json j = isolattice::wire::Json::parse(body);
    j["prime"] = l;
    j["exponent"] = exponent;
    return isolattice::wire::decode_family(j);
}

// {{a, b}, {c, d}} with a = 1 and c = 0 mod l.
inline const char* const kBorel = R"({"n": 2, "parameters": [
    {"name": "a", "residue": 1, "level": 1}, {"name": "b"},
    {"name": "c", "residue": 0, "level": 1}, {"name": "d", "unit": true}],
    "entries": [["a", "b"], ["c", "d"]]})";

inline const char* const kUpper = R"({"n": 2, "parameters": [{"name": "b"}, {"name": "d", "unit": true}],
    "entries": [[1, "b"], [0, "d"]]})";

inline const char* const kGl = R"({"n": 4, "parameters": [
    {"name": "a1", "residue": 1, "level": 1}, {"name": "b1"},
    {"name": "c1", "residue": 0, "level": 1}, {"name": "d1", "unit": true},
    {"name": "a2", "residue": 1, "level": 1}, {"name": "b2"},
    {"name": "c2", "residue": 0, "level": 1}, {"name": "d2", "unit": true}],
    "entries": [["a1", "b1", 0, 0], ["c1", "d1", 0, 0], [0, 0, "a2", "b2"], [0, 0, "c2", "d2"]],
    "side_conditions": [{"solve_for": "d2", "terms": [
        {"coefficient": 1, "factors": ["a1", "d1"]}, {"coefficient": -1, "factors": ["b1", "c1"]},
        {"coefficient": -1, "factors": ["a2", "d2"]}, {"coefficient": 1, "factors": ["b2", "c2"]}]}]})";

inline const char* const kQuotientShape = R"({"n": 4, "parameters": [
    {"name": "d", "unit": true}, {"name": "b1"}, {"name": "x"}, {"name": "nb2"},
    {"name": "w1"}, {"name": "w2"}],
    "entries": [[1, "b1", "x", "nb2"], [0, "d", "w1", 0], [0, 0, 1, 0], [0, 0, "w2", "d"]]})";

inline const char* const kDualShape = R"({"n": 4, "parameters": [
    {"name": "d", "unit": true}, {"name": "nb1"}, {"name": "z"}, {"name": "nw1"},
    {"name": "nw2"}, {"name": "b2"}],
    "entries": [["d", 0, 0, 0], ["nb1", 1, 0, 0], ["z", "nw1", "d", "nw2"], ["b2", 0, 0, 1]]})";

inline const char* const kIdentity = R"({"n": 2, "parameters": [], "entries": [[1, 0], [0, 1]]})";

// Lattice of the quotient by the diagonal l-torsion point, and of its dual
// inside the product.
inline LatticeMatrix quotient(long l) {
    const Rational t = make_rational(1, l);
    return LatticeMatrix(RatMatrix{{1, 0, t, 0}, {0, 1, 0, 0}, {0, 0, t, 0}, {0, 0, 0, 1}});
}

inline LatticeMatrix dual(long l) {
    const Rational t = make_rational(1, l);
    return LatticeMatrix(RatMatrix{{0, -t, 0, 0}, {t, 0, 0, 0}, {0, 0, 0, -t}, {-t, 0, 1, 0}});
}

// M^-1 sigma M over Q with an adjugate inverse, reduced mod l^out.
inline IntMatrix reference_conjugate(const GaloisElement& sigma, const LatticeMatrix& lat, unsigned long out) {
    const RatMatrix image =
        oracle::adjugate_inverse(lat.matrix()) * to_rational(sigma.matrix()) * lat.matrix();
    const Integer m = pow(sigma.prime(), out);
    IntMatrix r(image.rows(), image.cols());
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) = reduce_mod(image(i, j), m);
    return r;
}

}  // namespace families
