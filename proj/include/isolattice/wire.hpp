#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "isolattice/galois.hpp"
#include "isolattice/lattice.hpp"
#include "isolattice/polarization.hpp"

namespace isolattice::wire {

using Json = nlohmann::json;

/// Top-level document: {"kind": ..., "payload": {...}}. Known kinds are
/// lattice, kernel, galois-element, family, polarization and report.
struct WireDocument {
    std::string kind;
    Json payload;
};

/// Throws ParseError with line/column for syntax errors.
WireDocument parse_document(std::string_view text);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string emit_document(const WireDocument& doc);

/// Integers are emitted as JSON numbers when they fit in 64 bits and as
/// decimal strings otherwise; both forms are accepted on input.
Json encode(const Integer& value);
Json encode(const ResidueInt& value);
Json encode(const RatMatrix& m);  // rows of "p/q" strings
Json encode(const IntMatrix& m);
Json encode(const LatticeMatrix& lattice);
Json encode(const KernelData& kernel);
Json encode(const GaloisElement& sigma);
Json encode(const MatrixFamily& family);
Json encode(const PolarizationDesc& pol);
Json encode(const AbelianGroupInvariants& group);
Json encode(const ConjugationReport& report);

/// Decoders take the JSON pointer of `j` for error messages and throw ParseError.
Integer decode_integer(const Json& j, const std::string& at);
Rational decode_rational(const Json& j, const std::string& at);
RatMatrix decode_rat_matrix(const Json& j, const std::string& at);
IntMatrix decode_int_matrix(const Json& j, const std::string& at);
LatticeMatrix decode_lattice(const Json& payload, const std::string& at = "/payload");
KernelData decode_kernel(const Json& payload, const std::string& at = "/payload");
GaloisElement decode_galois(const Json& payload, const std::string& at = "/payload");
MatrixFamily decode_family(const Json& payload, const std::string& at = "/payload");
PolarizationDesc decode_polarization(const Json& payload, const std::string& at = "/payload");

/// Parses a document and checks its kind.
WireDocument parse_document_of_kind(std::string_view text, std::string_view kind);

}  // namespace isolattice::wire
