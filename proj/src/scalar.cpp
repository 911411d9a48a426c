#include "isolattice/scalar.hpp"

#include <cctype>

namespace isolattice {

Rational make_rational(const Integer& numerator, const Integer& denominator) {
    if (denominator == 0) throw InvalidArgument("zero denominator");
    Rational r(numerator, denominator);
    r.canonicalize();
    return r;
}

namespace {

bool parse_decimal(std::string_view text, Integer& out) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        negative = text[i] == '-';
        ++i;
    }
    if (i == text.size()) return false;
    for (std::size_t j = i; j < text.size(); ++j) {
        if (!std::isdigit(static_cast<unsigned char>(text[j]))) return false;
    }
    out = Integer(std::string(text.substr(i)), 10);
    if (negative) out = -out;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    const auto slash = text.find('/');
    Integer num;
    Integer den = 1;
    if (slash == std::string_view::npos) {
        if (!parse_decimal(text, num)) {
            throw InvalidArgument("not a rational number: '" + std::string(text) + "'");
        }
    } else {
        if (!parse_decimal(trim(text.substr(0, slash)), num) ||
            !parse_decimal(trim(text.substr(slash + 1)), den)) {
            throw InvalidArgument("not a rational number: '" + std::string(text) + "'");
        }
    }
    return make_rational(num, den);
}

std::string to_string(const Rational& value) { return value.get_str(10); }
std::string to_string(const Integer& value) { return value.get_str(10); }

Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Integer mod_nonneg(const Integer& a, const Integer& m) {
    Integer r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Integer lcm(const Integer& a, const Integer& b) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

Integer gcdext(const Integer& a, const Integer& b, Integer& s, Integer& t) {
    Integer g;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

unsigned long valuation(const Integer& value, const Integer& prime) {
    if (value == 0) throw InvalidArgument("valuation of zero");
    Integer rest;
    return mpz_remove(rest.get_mpz_t(), value.get_mpz_t(), prime.get_mpz_t());
}

Integer pow(const Integer& base, unsigned long exponent) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

bool is_probable_prime(const Integer& value) {
    return value >= 2 && mpz_probab_prime_p(value.get_mpz_t(), 30) != 0;
}

Integer inverse_mod(const Integer& a, const Integer& m) {
    Integer r;
    if (m == 1) return 0;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
        throw InvalidArgument(to_string(a) + " is not invertible modulo " + to_string(m));
    }
    return r;
}

Integer reduce_mod(const Rational& value, const Integer& m) {
    const Integer num = mod_nonneg(value.get_num(), m);
    if (value.get_den() == 1) return num;
    return mod_nonneg(num * inverse_mod(value.get_den(), m), m);
}

ResidueInt::ResidueInt(Integer value, Integer modulus) : modulus_(std::move(modulus)) {
    if (modulus_ < 2) throw InvalidArgument("residue modulus must be at least 2");
    value_ = mod_nonneg(value, modulus_);
}

bool ResidueInt::is_unit() const { return gcd(value_, modulus_) == 1; }

ResidueInt ResidueInt::inverse() const { return {inverse_mod(value_, modulus_), modulus_}; }

namespace {
void require_same_modulus(const ResidueInt& a, const ResidueInt& b) {
    if (a.modulus() != b.modulus()) {
        throw ModulusMismatch("residues modulo " + to_string(a.modulus()) + " and " +
                              to_string(b.modulus()));
    }
}
}  // namespace

ResidueInt operator+(const ResidueInt& a, const ResidueInt& b) {
    require_same_modulus(a, b);
    return {a.value_ + b.value_, a.modulus_};
}

ResidueInt operator-(const ResidueInt& a, const ResidueInt& b) {
    require_same_modulus(a, b);
    return {a.value_ - b.value_, a.modulus_};
}

ResidueInt operator*(const ResidueInt& a, const ResidueInt& b) {
    require_same_modulus(a, b);
    return {a.value_ * b.value_, a.modulus_};
}

ResidueInt ResidueInt::operator-() const { return {-value_, modulus_}; }

std::string to_string(const ResidueInt& value) {
    return to_string(value.value()) + " mod " + to_string(value.modulus());
}

}  // namespace isolattice
