#pragma once

#include <stdexcept>
#include <string>

namespace isolattice {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    /// Short machine-readable name, e.g. "NotOverBase".
    virtual const char* code() const noexcept = 0;
};

/// The input itself is malformed (bad shape, bad syntax, violated precondition
/// that the caller could have checked).
class InputError : public Error {
public:
    using Error::Error;
};

/// The input is well formed but the requested mathematical object does not
/// exist or cannot be decided.
class DomainError : public Error {
public:
    using Error::Error;
};

#define ISOLATTICE_DEFINE_ERROR(Name, Base)                        \
    class Name : public Base {                                     \
    public:                                                        \
        using Base::Base;                                          \
        const char* code() const noexcept override { return #Name; } \
    };

ISOLATTICE_DEFINE_ERROR(InvalidArgument, InputError)
ISOLATTICE_DEFINE_ERROR(DimensionMismatch, InputError)
ISOLATTICE_DEFINE_ERROR(ModulusMismatch, InputError)
ISOLATTICE_DEFINE_ERROR(SingularMatrix, InputError)
ISOLATTICE_DEFINE_ERROR(RankDeficient, InputError)
ISOLATTICE_DEFINE_ERROR(BadType, InputError)
ISOLATTICE_DEFINE_ERROR(UnknownScenario, InputError)

ISOLATTICE_DEFINE_ERROR(NotOverBase, DomainError)
ISOLATTICE_DEFINE_ERROR(NotStable, DomainError)
ISOLATTICE_DEFINE_ERROR(InsufficientPrecision, DomainError)
ISOLATTICE_DEFINE_ERROR(UnsatisfiableFamily, DomainError)
ISOLATTICE_DEFINE_ERROR(UnsupportedPolarizationType, DomainError)
ISOLATTICE_DEFINE_ERROR(NotAPolarizationLattice, DomainError)

#undef ISOLATTICE_DEFINE_ERROR

/// Malformed wire document. Carries a 1-based line/column when the failure is
/// syntactic, and a JSON pointer when it is a schema violation.
class ParseError : public InputError {
public:
    ParseError(std::string reason, std::size_t line = 0, std::size_t column = 0,
               std::string pointer = {})
        : InputError(format(reason, line, column, pointer)),
          reason_(std::move(reason)), line_(line), column_(column),
          pointer_(std::move(pointer)) {}

    const char* code() const noexcept override { return "ParseError"; }
    const std::string& reason() const noexcept { return reason_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& pointer() const noexcept { return pointer_; }

private:
    static std::string format(const std::string& reason, std::size_t line,
                              std::size_t column, const std::string& pointer) {
        std::string out = "parse error";
        if (line != 0) {
            out += " at line " + std::to_string(line) + ", column " + std::to_string(column);
        }
        if (!pointer.empty()) out += " at " + pointer;
        return out + ": " + reason;
    }

    std::string reason_;
    std::size_t line_;
    std::size_t column_;
    std::string pointer_;
};

}  // namespace isolattice
