#include "isolattice/galois.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <map>
#include <random>
#include <thread>

#include "isolattice/normal_form.hpp"

namespace isolattice {

GaloisElement::GaloisElement(Integer prime, unsigned long exponent, IntMatrix entries)
    : prime_(std::move(prime)), exponent_(exponent), entries_(std::move(entries)) {
    if (!is_probable_prime(prime_)) throw InvalidArgument(to_string(prime_) + " is not prime");
    if (exponent_ == 0) throw InvalidArgument("precision exponent must be at least 1");
    if (!entries_.is_square()) throw DimensionMismatch("Galois element must be square");
    modulus_ = pow(prime_, exponent_);
    for (std::size_t i = 0; i < entries_.rows(); ++i)
        for (std::size_t j = 0; j < entries_.cols(); ++j)
            entries_(i, j) = mod_nonneg(entries_(i, j), modulus_);
    if (mod_nonneg(determinant(entries_), prime_) == 0) {
        throw InvalidArgument("matrix is not invertible mod " + to_string(prime_));
    }
}

GaloisElement GaloisElement::identity(std::size_t n, Integer prime, unsigned long exponent) {
    return GaloisElement(std::move(prime), exponent, IntMatrix::identity(n));
}

GaloisElement GaloisElement::unchecked(Integer prime, unsigned long exponent, Integer modulus,
                                       IntMatrix entries) {
    return GaloisElement(UncheckedTag{}, std::move(prime), exponent, std::move(modulus),
                         std::move(entries));
}

GaloisElement GaloisElement::reduce(unsigned long exponent) const {
    if (exponent == 0 || exponent > exponent_) {
        throw InvalidArgument("cannot reduce precision " + std::to_string(exponent_) + " to " +
                              std::to_string(exponent));
    }
    const Integer modulus = pow(prime_, exponent);
    IntMatrix m = entries_;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = mod_nonneg(m(i, j), modulus);
    return unchecked(prime_, exponent, modulus, std::move(m));
}

GaloisElement operator*(const GaloisElement& a, const GaloisElement& b) {
    if (a.prime_ != b.prime_ || a.exponent_ != b.exponent_) {
        throw ModulusMismatch("Galois elements at different precisions");
    }
    IntMatrix m = a.entries_ * b.entries_;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = mod_nonneg(m(i, j), a.modulus_);
    return GaloisElement::unchecked(a.prime_, a.exponent_, a.modulus_, std::move(m));
}

unsigned long required_precision(const LatticeMatrix& lattice, const Integer& prime,
                                 unsigned long out_exponent) {
    return out_exponent + valuation(denominator(lattice.matrix()), prime) +
           valuation(denominator(lattice.inverse()), prime);
}

// M^-1 sigma M is computed over Z as (a M^-1) sigma (b M) / (a b), with a, b
// the denominators; the l-part of a b is divided out exactly, the rest inverted.
Conjugator::Conjugator(const LatticeMatrix& lattice, Integer prime, unsigned long out_exponent)
    : prime_(std::move(prime)),
      out_exponent_(out_exponent),
      left_(to_integer(Rational(denominator(lattice.inverse())) * lattice.inverse())),
      right_(to_integer(Rational(lattice.denominator_bound()) * lattice.matrix())),
      scale_(denominator(lattice.inverse()) * lattice.denominator_bound()) {
    if (out_exponent_ == 0) throw InvalidArgument("output precision must be at least 1");
    out_modulus_ = pow(prime_, out_exponent_);
    const unsigned long extra = valuation(scale_, prime_);
    prime_power_ = pow(prime_, extra);
    unit_inverse_ = inverse_mod(scale_ / prime_power_, out_modulus_);
    needed_ = out_exponent_ + extra;

    // With |entries| < 2^20 and input modulus < 2^20, every partial sum of
    // (a M^-1) sigma (b M) stays far below 2^127.
    const Integer bound = Integer(1) << 20;
    auto small_entries = [&](const IntMatrix& m, std::vector<std::int64_t>& out) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                if (abs(m(i, j)) >= bound) return false;
                out.push_back(m(i, j).get_si());
            }
        return true;
    };
    small_ = prime_power_ < bound && out_modulus_ < bound && small_entries(left_, left_small_) &&
             small_entries(right_, right_small_);
    if (small_) {
        prime_power_small_ = prime_power_.get_si();
        unit_inverse_small_ = unit_inverse_.get_si();
        out_modulus_small_ = out_modulus_.get_si();
    }
}

GaloisElement Conjugator::operator()(const GaloisElement& sigma) const {
    const std::size_t n = sigma.dimension();
    if (n != left_.rows()) throw DimensionMismatch("Galois element and lattice differ in dimension");
    if (sigma.prime() != prime_) throw ModulusMismatch("Galois element has a different prime");
    if (sigma.exponent() < needed_) {
        throw InsufficientPrecision("conjugation to precision " + std::to_string(out_exponent_) +
                                    " needs input mod " + to_string(prime_) + "^" +
                                    std::to_string(needed_) + ", have exponent " +
                                    std::to_string(sigma.exponent()));
    }
    const IntMatrix& x = sigma.matrix();
    if (small_ && sigma.modulus() < (Integer(1) << 20)) {
        std::vector<__int128> mid(n * n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const std::int64_t a = left_small_[i * n + k];
                if (a == 0) continue;
                for (std::size_t j = 0; j < n; ++j) mid[i * n + j] += a * x(k, j).get_si();
            }
        IntMatrix image(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                __int128 acc = 0;
                for (std::size_t k = 0; k < n; ++k)
                    if (const std::int64_t b = right_small_[k * n + j]; b != 0) acc += mid[i * n + k] * b;
                if (acc % prime_power_small_ != 0) {
                    const bool negative = acc < 0;
                    const unsigned __int128 mag = negative ? -static_cast<unsigned __int128>(acc)
                                                           : static_cast<unsigned __int128>(acc);
                    Integer num = Integer(static_cast<unsigned long>(mag >> 64)) << 64;
                    num += static_cast<unsigned long>(mag & ~0UL);
                    if (negative) num = -num;
                    throw NotStable("entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                                    to_string(make_rational(num, scale_)) + " is not " +
                                    to_string(prime_) + "-integral");
                }
                __int128 r = (acc / prime_power_small_) % out_modulus_small_;
                if (r < 0) r += out_modulus_small_;
                r = (r * unit_inverse_small_) % out_modulus_small_;
                image(i, j) = static_cast<long>(r);
            }
        return GaloisElement::unchecked(prime_, out_exponent_, out_modulus_, std::move(image));
    }
    IntMatrix middle(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (left_(i, k) == 0) continue;
            for (std::size_t j = 0; j < n; ++j) middle(i, j) += left_(i, k) * x(k, j);
        }
    IntMatrix image(n, n);
    Integer acc;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            acc = 0;
            for (std::size_t k = 0; k < n; ++k)
                if (right_(k, j) != 0) acc += middle(i, k) * right_(k, j);
            if (!mpz_divisible_p(acc.get_mpz_t(), prime_power_.get_mpz_t())) {
                throw NotStable("entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                                to_string(make_rational(acc, scale_)) + " is not " +
                                to_string(prime_) + "-integral");
            }
            mpz_divexact(acc.get_mpz_t(), acc.get_mpz_t(), prime_power_.get_mpz_t());
            image(i, j) = mod_nonneg(acc * unit_inverse_, out_modulus_);
        }
    return GaloisElement::unchecked(prime_, out_exponent_, out_modulus_, std::move(image));
}

GaloisElement conjugate(const GaloisElement& sigma, const LatticeMatrix& lattice,
                        unsigned long out_exponent) {
    if (sigma.dimension() != lattice.dimension()) {
        throw DimensionMismatch("Galois element and lattice differ in dimension");
    }
    return Conjugator(lattice, sigma.prime(), out_exponent)(sigma);
}

bool is_stable(const GaloisElement& sigma, const LatticeMatrix& lattice) {
    try {
        conjugate(sigma, lattice, 1);
        return true;
    } catch (const NotStable&) {
        return false;
    }
}

ResidueInt cyclotomic_character(const GaloisElement& sigma) {
    if (sigma.dimension() != 2) throw DimensionMismatch("cyclotomic character needs a 2x2 block");
    return ResidueInt(determinant(sigma.matrix()), sigma.modulus());
}

std::vector<std::vector<Integer>> fixed_subspace(const std::vector<GaloisElement>& elements) {
    if (elements.empty()) throw InvalidArgument("fixed subspace of an empty set");
    const std::size_t n = elements.front().dimension();
    const Integer p = elements.front().prime();
    for (const auto& e : elements) {
        if (e.dimension() != n || e.prime() != p || e.exponent() != 1) {
            throw InvalidArgument("fixed subspace needs elements mod the same prime");
        }
    }

    // Reduced row echelon basis of the span of all rows of (sigma - 1).
    std::vector<std::vector<Integer>> rows;
    std::vector<std::size_t> pivots;
    auto insert = [&](std::vector<Integer> v) {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const Integer f = v[pivots[r]];
            if (f == 0) continue;
            for (std::size_t j = 0; j < n; ++j) v[j] = mod_nonneg(v[j] - f * rows[r][j], p);
        }
        std::size_t pc = 0;
        while (pc < n && v[pc] == 0) ++pc;
        if (pc == n) return;
        const Integer inv = inverse_mod(v[pc], p);
        for (auto& x : v) x = mod_nonneg(x * inv, p);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const Integer f = rows[r][pc];
            if (f == 0) continue;
            for (std::size_t j = 0; j < n; ++j) rows[r][j] = mod_nonneg(rows[r][j] - f * v[j], p);
        }
        const auto at = std::lower_bound(pivots.begin(), pivots.end(), pc) - pivots.begin();
        pivots.insert(pivots.begin() + at, pc);
        rows.insert(rows.begin() + at, std::move(v));
    };

    for (const auto& e : elements) {
        if (rows.size() == n) break;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<Integer> v(n);
            for (std::size_t j = 0; j < n; ++j) v[j] = mod_nonneg(e(i, j) - (i == j ? 1 : 0), p);
            insert(std::move(v));
        }
    }

    std::vector<std::vector<Integer>> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (std::binary_search(pivots.begin(), pivots.end(), f)) continue;
        std::vector<Integer> v(n);
        v[f] = 1;
        for (std::size_t r = 0; r < rows.size(); ++r) v[pivots[r]] = mod_nonneg(-rows[r][f], p);
        basis.push_back(std::move(v));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// Families

namespace {

struct Domain {
    Integer prime;
    Integer base;
    Integer step;
    Integer modulus;
    Integer size;
    bool unit = false;

    Integer value(const Integer& i) const {
        if (unit && step == 1) {
            const Integer q = i / (prime - 1);
            const Integer r = i % (prime - 1);
            return q * prime + r + 1;
        }
        return base + i * step;
    }

    bool accepts(const Integer& v) const {
        if (v < 0 || v >= modulus) return false;
        if (mod_nonneg(v - base, step) != 0) return false;
        return !unit || v % prime != 0;
    }
};

struct Entry {
    bool is_parameter = false;
    Integer constant;
    std::size_t parameter = 0;
};

struct Condition {
    std::vector<std::pair<Integer, std::vector<std::size_t>>> terms;
    std::size_t target = 0;
};

class CompiledFamily {
public:
    explicit CompiledFamily(const MatrixFamily& family) : family_(family) {
        family.validate();
        modulus_ = family.modulus();
        std::map<std::string, std::size_t> index;
        for (const auto& p : family.parameters) {
            index.emplace(p.name, domains_.size());
            Domain d;
            d.prime = family.prime;
            d.modulus = modulus_;
            d.step = pow(family.prime, p.level);
            d.base = mod_nonneg(p.residue, d.step);
            d.unit = p.unit;
            const Integer all = pow(family.prime, family.exponent - p.level);
            if (!p.unit) {
                d.size = all;
            } else if (p.level == 0) {
                d.size = all - all / family.prime;
            } else {
                d.size = d.base % family.prime == 0 ? Integer(0) : all;
            }
            domains_.push_back(std::move(d));
        }
        solved_.assign(domains_.size(), false);
        for (const auto& c : family.side_conditions) {
            Condition cc;
            cc.target = index.at(c.solve_for);
            solved_[cc.target] = true;
            for (const auto& t : c.terms) {
                std::vector<std::size_t> f;
                for (const auto& name : t.factors) f.push_back(index.at(name));
                cc.terms.emplace_back(t.coefficient, std::move(f));
            }
            conditions_.push_back(std::move(cc));
        }
        for (std::size_t i = 0; i < domains_.size(); ++i)
            if (!solved_[i]) free_.push_back(i);
        for (const auto& row : family.entries) {
            for (const auto& e : row) {
                Entry entry;
                if (const auto* c = std::get_if<Integer>(&e)) {
                    entry.constant = mod_nonneg(*c, modulus_);
                } else {
                    entry.is_parameter = true;
                    entry.parameter = index.at(std::get<std::string>(e));
                }
                entries_.push_back(std::move(entry));
            }
        }
    }

    const std::vector<std::size_t>& free_parameters() const { return free_; }
    const Domain& domain(std::size_t p) const { return domains_[p]; }

    Integer space_size() const {
        Integer s = 1;
        for (auto p : free_) s *= domains_[p].size;
        return s;
    }

    /// `values` holds the free parameters; solved ones are filled in.
    std::optional<GaloisElement> build(std::vector<Integer>& values) const {
        for (const auto& c : conditions_) {
            Integer coefficient = 0;
            Integer rest = 0;
            for (const auto& [coef, factors] : c.terms) {
                Integer product = coef;
                bool has_target = false;
                for (auto f : factors) {
                    if (f == c.target) {
                        has_target = true;
                    } else {
                        product *= values[f];
                    }
                }
                (has_target ? coefficient : rest) += product;
            }
            coefficient = mod_nonneg(coefficient, modulus_);
            if (coefficient % family_.prime == 0) return std::nullopt;
            values[c.target] = mod_nonneg(-rest * inverse_mod(coefficient, modulus_), modulus_);
            if (!domains_[c.target].accepts(values[c.target])) return std::nullopt;
        }
        const std::size_t n = family_.n;
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const Entry& e = entries_[i * n + j];
                m(i, j) = e.is_parameter ? values[e.parameter] : e.constant;
            }
        if (determinant(m) % family_.prime == 0) return std::nullopt;
        return GaloisElement::unchecked(family_.prime, family_.exponent, modulus_, std::move(m));
    }

    bool contains(const GaloisElement& x, std::string* reason) const {
        auto fail = [&](std::string why) {
            if (reason) *reason = std::move(why);
            return false;
        };
        const std::size_t n = family_.n;
        if (x.dimension() != n || x.prime() != family_.prime || x.exponent() != family_.exponent) {
            return fail("dimension or precision differs from the family");
        }
        std::vector<std::optional<Integer>> bound(domains_.size());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const Entry& e = entries_[i * n + j];
                const Integer& v = x(i, j);
                const std::string where = "entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
                if (!e.is_parameter) {
                    if (v != e.constant) {
                        return fail(where + " is " + to_string(v) + ", expected " +
                                    to_string(e.constant));
                    }
                    continue;
                }
                auto& slot = bound[e.parameter];
                const std::string& name = family_.parameters[e.parameter].name;
                if (slot && *slot != v) {
                    return fail(where + " is " + to_string(v) + " but parameter " + name +
                                " was already " + to_string(*slot));
                }
                if (!domains_[e.parameter].accepts(v)) {
                    return fail(where + " = " + to_string(v) + " is outside the range of " + name);
                }
                slot = v;
            }
        for (std::size_t c = 0; c < conditions_.size(); ++c) {
            Integer total = 0;
            for (const auto& [coef, factors] : conditions_[c].terms) {
                Integer product = coef;
                for (auto f : factors) product *= *bound[f];
                total += product;
            }
            if (mod_nonneg(total, modulus_) != 0) {
                return fail("side condition solving for " + family_.side_conditions[c].solve_for +
                            " fails");
            }
        }
        return true;
    }

private:
    const MatrixFamily& family_;
    Integer modulus_;
    std::vector<Domain> domains_;
    std::vector<bool> solved_;
    std::vector<std::size_t> free_;
    std::vector<Condition> conditions_;
    std::vector<Entry> entries_;
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Unbiased draw from [0, bound) by rejection on raw 64-bit output.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        const std::uint64_t x = rng();
        if (x < limit) return x % bound;
    }
}

bool fits_u64(const Integer& x) {
    return x >= 0 && mpz_sizeinbase(x.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const Integer& x) {
    std::uint64_t v = 0;
    mpz_export(&v, nullptr, -1, sizeof v, 0, 0, x.get_mpz_t());
    return v;
}

constexpr int kMaxAttempts = 10000;

}  // namespace

void MatrixFamily::validate() const {
    if (n == 0) throw InvalidArgument("family dimension must be positive");
    if (!is_probable_prime(prime)) throw InvalidArgument(to_string(prime) + " is not prime");
    if (exponent == 0) throw InvalidArgument("family precision exponent must be at least 1");
    if (entries.size() != n) throw InvalidArgument("family pattern must have n rows");
    for (const auto& row : entries)
        if (row.size() != n) throw InvalidArgument("family pattern must have n columns");

    std::map<std::string, bool> used;
    for (const auto& p : parameters) {
        if (p.name.empty()) throw InvalidArgument("parameter with empty name");
        if (used.count(p.name)) throw InvalidArgument("duplicate parameter " + p.name);
        if (p.level > exponent) {
            throw InvalidArgument("parameter " + p.name + " has level above the precision");
        }
        used[p.name] = false;
    }
    for (const auto& row : entries)
        for (const auto& e : row)
            if (const auto* name = std::get_if<std::string>(&e)) {
                auto it = used.find(*name);
                if (it == used.end()) throw InvalidArgument("undeclared parameter " + *name);
                it->second = true;
            }
    for (const auto& [name, seen] : used)
        if (!seen) throw InvalidArgument("parameter " + name + " does not occur in any entry");

    std::map<std::string, std::size_t> solved_at;
    for (std::size_t c = 0; c < side_conditions.size(); ++c) {
        const auto& sc = side_conditions[c];
        if (!used.count(sc.solve_for)) {
            throw InvalidArgument("side condition solves for undeclared " + sc.solve_for);
        }
        if (solved_at.count(sc.solve_for)) {
            throw InvalidArgument(sc.solve_for + " is solved for twice");
        }
        solved_at[sc.solve_for] = c;
    }
    for (std::size_t c = 0; c < side_conditions.size(); ++c) {
        const auto& sc = side_conditions[c];
        bool mentions_target = false;
        for (const auto& t : sc.terms) {
            const auto k = std::count(t.factors.begin(), t.factors.end(), sc.solve_for);
            if (k > 1) throw InvalidArgument("side condition is not linear in " + sc.solve_for);
            mentions_target = mentions_target || k == 1;
            for (const auto& f : t.factors) {
                if (!used.count(f)) throw InvalidArgument("undeclared parameter " + f);
                auto s = solved_at.find(f);
                if (s != solved_at.end() && s->second > c) {
                    throw InvalidArgument(f + " is used before it is solved for");
                }
            }
        }
        if (!mentions_target) {
            throw InvalidArgument("side condition does not involve " + sc.solve_for);
        }
    }
}

Integer MatrixFamily::modulus() const { return pow(prime, exponent); }

Integer family_space_size(const MatrixFamily& family) {
    return CompiledFamily(family).space_size();
}

std::optional<GaloisElement> family_member(const MatrixFamily& family, const Integer& index) {
    const CompiledFamily compiled(family);
    if (index < 0 || index >= compiled.space_size()) {
        throw InvalidArgument("tuple index out of range");
    }
    std::vector<Integer> values(family.parameters.size());
    Integer rest = index;
    const auto& free = compiled.free_parameters();
    for (auto it = free.rbegin(); it != free.rend(); ++it) {
        const Domain& d = compiled.domain(*it);
        values[*it] = d.value(rest % d.size);
        rest /= d.size;
    }
    return compiled.build(values);
}

void enumerate_family(const MatrixFamily& family,
                      const std::function<void(const GaloisElement&)>& visit) {
    const CompiledFamily compiled(family);
    const Integer size = compiled.space_size();
    if (size > kExhaustiveLimit) {
        throw InvalidArgument("family has " + to_string(size) + " tuples, above the " +
                              "exhaustive limit");
    }
    const auto& free = compiled.free_parameters();
    std::vector<Integer> counters(free.size(), 0);
    std::vector<Integer> values(family.parameters.size());
    if (size == 0) return;
    for (;;) {
        for (std::size_t k = 0; k < free.size(); ++k) {
            values[free[k]] = compiled.domain(free[k]).value(counters[k]);
        }
        if (auto member = compiled.build(values)) visit(*member);
        std::size_t k = free.size();
        while (k > 0) {
            --k;
            if (++counters[k] < compiled.domain(free[k]).size) break;
            counters[k] = 0;
            if (k == 0) return;
        }
        if (free.empty()) return;
    }
}

std::vector<GaloisElement> sample_family(const MatrixFamily& family, std::uint64_t seed,
                                         std::size_t count, std::uint64_t first_index) {
    const CompiledFamily compiled(family);
    const auto& free = compiled.free_parameters();
    std::vector<std::uint64_t> sizes;
    for (auto p : free) {
        const Integer& s = compiled.domain(p).size;
        if (s == 0) throw UnsatisfiableFamily("parameter " + family.parameters[p].name +
                                              " has no admissible value");
        if (!fits_u64(s)) throw InvalidArgument("parameter range too large to sample");
        sizes.push_back(to_u64(s));
    }
    std::vector<GaloisElement> out;
    out.reserve(count);
    std::vector<Integer> values(family.parameters.size());
    for (std::size_t i = 0; i < count; ++i) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(first_index + i)));
        std::optional<GaloisElement> member;
        for (int attempt = 0; attempt < kMaxAttempts && !member; ++attempt) {
            for (std::size_t k = 0; k < free.size(); ++k) {
                const std::uint64_t pick = uniform_below(rng, sizes[k]);
                values[free[k]] = compiled.domain(free[k]).value(Integer(std::to_string(pick)));
            }
            member = compiled.build(values);
        }
        if (!member) {
            throw UnsatisfiableFamily("no family member found in " + std::to_string(kMaxAttempts) +
                                      " attempts");
        }
        out.push_back(std::move(*member));
    }
    return out;
}

bool family_contains(const MatrixFamily& family, const GaloisElement& element,
                     std::string* reason) {
    return CompiledFamily(family).contains(element, reason);
}

void merge_reports(ConjugationReport& earlier, const ConjugationReport& later) {
    earlier.checked += later.checked;
    earlier.failed += later.failed;
    if (!earlier.counterexample && later.counterexample) {
        earlier.counterexample = later.counterexample;
    }
}

ConjugationReport verify_image_shape(const MatrixFamily& family, const LatticeMatrix& lattice,
                                     const MatrixFamily& target, std::uint64_t seed,
                                     std::size_t count, SampleMode mode, unsigned threads) {
    const CompiledFamily source(family);
    const CompiledFamily shape(target);
    if (family.n != lattice.dimension() || target.n != family.n) {
        throw DimensionMismatch("family, lattice and target must share the dimension");
    }
    if (family.prime != target.prime) throw InvalidArgument("family and target primes differ");
    const unsigned long out = target.exponent;
    const unsigned long needed = required_precision(lattice, family.prime, out);
    if (family.exponent < needed) {
        throw InsufficientPrecision("family precision exponent " + std::to_string(family.exponent) +
                                    " is below the required " + std::to_string(needed));
    }

    const Integer space = source.space_size();
    bool exhaustive = mode == SampleMode::exhaustive ||
                      (mode == SampleMode::automatic && space <= kExhaustiveLimit);
    if (exhaustive && !fits_u64(space)) throw InvalidArgument("family too large to enumerate");
    const std::uint64_t total = exhaustive ? to_u64(space) : count;
    const Conjugator conjugator(lattice, family.prime, out);

    const ConjugationReport blank{family, lattice, target, exhaustive, 0, 0, std::nullopt};

    auto check = [&](const GaloisElement& sigma, ConjugationReport& report) {
        ++report.checked;
        std::string why;
        try {
            GaloisElement image = conjugator(sigma);
            if (shape.contains(image, &why)) return;
            ++report.failed;
            if (!report.counterexample) report.counterexample = Counterexample{sigma, image, why};
        } catch (const NotStable& e) {
            ++report.failed;
            if (!report.counterexample) {
                report.counterexample = Counterexample{sigma, std::nullopt, e.what()};
            }
        }
    };

    auto run_range = [&](std::uint64_t begin, std::uint64_t end, ConjugationReport& report) {
        if (exhaustive) {
            std::vector<Integer> values(family.parameters.size());
            const auto& free = source.free_parameters();
            for (std::uint64_t idx = begin; idx < end; ++idx) {
                Integer rest(std::to_string(idx));
                for (auto it = free.rbegin(); it != free.rend(); ++it) {
                    const Domain& d = source.domain(*it);
                    values[*it] = d.value(rest % d.size);
                    rest /= d.size;
                }
                if (auto member = source.build(values)) check(*member, report);
            }
        } else {
            for (const auto& sigma : sample_family(family, seed, end - begin, begin)) {
                check(sigma, report);
            }
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t chunks = std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, total / 256));
    std::vector<ConjugationReport> partial(chunks, blank);
    std::vector<std::exception_ptr> errors(chunks);
    std::vector<std::thread> workers;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        const std::uint64_t begin = total * c / chunks;
        const std::uint64_t end = total * (c + 1) / chunks;
        workers.emplace_back([&, c, begin, end] {
            try {
                run_range(begin, end, partial[c]);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    ConjugationReport report = blank;
    for (const auto& p : partial) merge_reports(report, p);
    return report;
}

}  // namespace isolattice
