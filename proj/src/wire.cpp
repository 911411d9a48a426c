#include "isolattice/wire.hpp"

#include <limits>

namespace isolattice::wire {

namespace {

[[noreturn]] void fail(const std::string& at, const std::string& reason) {
    throw ParseError(reason, 0, 0, at.empty() ? "/" : at);
}

const Json& field(const Json& obj, const char* name, const std::string& at) {
    if (!obj.is_object()) fail(at, "expected an object");
    auto it = obj.find(name);
    if (it == obj.end()) fail(at, std::string("missing field \"") + name + "\"");
    return *it;
}

const Json* optional_field(const Json& obj, const char* name, const std::string& at) {
    if (!obj.is_object()) fail(at, "expected an object");
    auto it = obj.find(name);
    return it == obj.end() ? nullptr : &*it;
}

std::string child(const std::string& at, const std::string& key) { return at + "/" + key; }
std::string child(const std::string& at, std::size_t i) { return at + "/" + std::to_string(i); }

std::size_t decode_size(const Json& j, const std::string& at) {
    const Integer v = decode_integer(j, at);
    if (v < 0 || v > Integer(std::to_string(std::numeric_limits<std::uint32_t>::max()))) {
        fail(at, "size out of range");
    }
    return v.get_ui();
}

const Json& array_of(const Json& j, const std::string& at, bool allow_empty) {
    if (!j.is_array()) fail(at, "expected an array");
    if (!allow_empty && j.empty()) fail(at, "expected a non-empty array");
    return j;
}

template <typename T, typename Decode>
Matrix<T> decode_matrix(const Json& j, const std::string& at, Decode decode) {
    array_of(j, at, false);
    const auto& first = array_of(j[0], child(at, 0), false);
    Matrix<T> m(j.size(), first.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& row = array_of(j[i], child(at, i), false);
        if (row.size() != m.cols()) fail(child(at, i), "ragged matrix row");
        for (std::size_t k = 0; k < row.size(); ++k) m(i, k) = decode(row[k], child(child(at, i), k));
    }
    return m;
}

Json encode_parameter(const FamilyParameter& p) {
    return Json{{"name", p.name}, {"residue", encode(p.residue)}, {"level", p.level},
                {"unit", p.unit}};
}

}  // namespace

WireDocument parse_document(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string reason = e.what();
        if (auto pos = reason.find("syntax error"); pos != std::string::npos) reason = reason.substr(pos);
        throw ParseError(reason, line, column);
    }
    const Json& kind = field(j, "kind", "");
    if (!kind.is_string()) fail("/kind", "kind must be a string");
    return {kind.get<std::string>(), field(j, "payload", "")};
}

std::string emit_document(const WireDocument& doc) {
    const Json j{{"kind", doc.kind}, {"payload", doc.payload}};
    return j.dump(2) + "\n";
}

WireDocument parse_document_of_kind(std::string_view text, std::string_view kind) {
    WireDocument doc = parse_document(text);
    if (doc.kind != kind) {
        fail("/kind", "expected a " + std::string(kind) + " document, got " + doc.kind);
    }
    return doc;
}

Json encode(const Integer& value) {
    if (value.fits_slong_p()) return Json(static_cast<std::int64_t>(value.get_si()));
    return Json(to_string(value));
}

Json encode(const ResidueInt& value) {
    return Json{{"value", encode(value.value())}, {"modulus", encode(value.modulus())}};
}

Json encode(const RatMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json encode(const IntMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(encode(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json encode(const LatticeMatrix& lattice) {
    return Json{{"n", lattice.dimension()}, {"matrix", encode(lattice.matrix())}};
}

Json encode(const KernelData& kernel) {
    Json gens = Json::array();
    for (const auto& g : kernel.generators) {
        Json v = Json::array();
        for (const auto& x : g) v.push_back(encode(x));
        gens.push_back(std::move(v));
    }
    return Json{{"n", kernel.n}, {"modulus", encode(kernel.modulus)}, {"generators", gens}};
}

Json encode(const GaloisElement& sigma) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < sigma.dimension(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < sigma.dimension(); ++j)
            row.push_back(encode(ResidueInt(sigma(i, j), sigma.modulus())));
        rows.push_back(std::move(row));
    }
    return Json{{"prime", encode(sigma.prime())}, {"exponent", sigma.exponent()}, {"matrix", rows}};
}

Json encode(const MatrixFamily& family) {
    Json params = Json::array();
    for (const auto& p : family.parameters) params.push_back(encode_parameter(p));
    Json entries = Json::array();
    for (const auto& row : family.entries) {
        Json r = Json::array();
        for (const auto& e : row) {
            if (const auto* c = std::get_if<Integer>(&e)) {
                r.push_back(encode(*c));
            } else {
                r.push_back(std::get<std::string>(e));
            }
        }
        entries.push_back(std::move(r));
    }
    Json conditions = Json::array();
    for (const auto& c : family.side_conditions) {
        Json terms = Json::array();
        for (const auto& t : c.terms) {
            terms.push_back(Json{{"coefficient", encode(t.coefficient)}, {"factors", t.factors}});
        }
        conditions.push_back(Json{{"solve_for", c.solve_for}, {"terms", terms}});
    }
    return Json{{"n", family.n},
                {"prime", encode(family.prime)},
                {"exponent", family.exponent},
                {"parameters", params},
                {"entries", entries},
                {"side_conditions", conditions}};
}

Json encode(const PolarizationDesc& pol) {
    Json type = Json::array();
    for (const auto& d : pol.type()) type.push_back(encode(d));
    return Json{{"g", pol.g()}, {"type", type}, {"gram", encode(pol.gram())}};
}

Json encode(const AbelianGroupInvariants& group) {
    Json factors = Json::array();
    for (const auto& d : group.factors) factors.push_back(encode(d));
    Json gens = Json::array();
    for (const auto& g : group.generators) {
        Json v = Json::array();
        for (const auto& x : g) v.push_back(encode(x));
        gens.push_back(std::move(v));
    }
    return Json{{"factors", factors},
                {"order", encode(group.order())},
                {"modulus", encode(group.modulus)},
                {"generators", gens}};
}

Json encode(const ConjugationReport& report) {
    Json j{{"family", encode(report.family)},
           {"lattice", encode(report.lattice)},
           {"target", encode(report.target)},
           {"mode", report.exhaustive ? "exhaustive" : "sampled"},
           {"checked", report.checked},
           {"failed", report.failed},
           {"ok", report.ok()}};
    if (report.counterexample) {
        Json c{{"sample", encode(report.counterexample->sample)},
               {"reason", report.counterexample->reason}};
        if (report.counterexample->image) c["image"] = encode(*report.counterexample->image);
        j["counterexample"] = std::move(c);
    }
    return j;
}

Integer decode_integer(const Json& j, const std::string& at) {
    if (j.is_number_integer()) {
        if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()));
        return Integer(std::to_string(j.get<std::int64_t>()));
    }
    if (j.is_string()) {
        const Rational r = decode_rational(j, at);
        if (!is_integral(r)) fail(at, "expected an integer");
        return r.get_num();
    }
    if (j.is_number()) fail(at, "expected an integer (quote integers beyond 64 bits)");
    fail(at, "expected an integer");
}

Rational decode_rational(const Json& j, const std::string& at) {
    if (j.is_number_integer()) return Rational(decode_integer(j, at));
    if (!j.is_string()) fail(at, "expected a rational string \"p/q\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const InvalidArgument& e) {
        fail(at, e.what());
    }
}

RatMatrix decode_rat_matrix(const Json& j, const std::string& at) {
    return decode_matrix<Rational>(j, at, decode_rational);
}

IntMatrix decode_int_matrix(const Json& j, const std::string& at) {
    return decode_matrix<Integer>(j, at, decode_integer);
}

LatticeMatrix decode_lattice(const Json& payload, const std::string& at) {
    RatMatrix m = decode_rat_matrix(field(payload, "matrix", at), child(at, "matrix"));
    if (const Json* n = optional_field(payload, "n", at)) {
        if (decode_size(*n, child(at, "n")) != m.rows()) fail(child(at, "n"), "n does not match matrix");
    }
    try {
        return LatticeMatrix(std::move(m));
    } catch (const InputError& e) {
        fail(child(at, "matrix"), e.what());
    }
}

KernelData decode_kernel(const Json& payload, const std::string& at) {
    KernelData k;
    k.modulus = decode_integer(field(payload, "modulus", at), child(at, "modulus"));
    const auto& gens = array_of(field(payload, "generators", at), child(at, "generators"), true);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::string gat = child(child(at, "generators"), i);
        std::vector<Integer> v;
        for (std::size_t c = 0; c < array_of(gens[i], gat, false).size(); ++c) {
            v.push_back(decode_integer(gens[i][c], child(gat, c)));
        }
        k.generators.push_back(std::move(v));
    }
    if (const Json* n = optional_field(payload, "n", at)) {
        k.n = decode_size(*n, child(at, "n"));
    } else if (!k.generators.empty()) {
        k.n = k.generators.front().size();
    } else {
        fail(at, "kernel without generators needs \"n\"");
    }
    try {
        k.validate();
    } catch (const InputError& e) {
        fail(at, e.what());
    }
    return k;
}

GaloisElement decode_galois(const Json& payload, const std::string& at) {
    const Integer prime = decode_integer(field(payload, "prime", at), child(at, "prime"));
    const std::size_t exponent = decode_size(field(payload, "exponent", at), child(at, "exponent"));
    const std::string mat = child(at, "matrix");
    if (prime < 2) fail(child(at, "prime"), "prime must be at least 2");
    const Integer modulus = pow(prime, exponent);
    // Entries are integers or residue objects {"value", "modulus"} at l^N.
    IntMatrix m = decode_matrix<Integer>(field(payload, "matrix", at), mat,
                                         [&](const Json& e, const std::string& eat) {
                                             if (!e.is_object()) return decode_integer(e, eat);
                                             const Integer mod = decode_integer(
                                                 field(e, "modulus", eat), child(eat, "modulus"));
                                             if (mod != modulus) fail(eat, "residue modulus differs from prime^exponent");
                                             return decode_integer(field(e, "value", eat),
                                                                   child(eat, "value"));
                                         });
    try {
        return GaloisElement(prime, exponent, std::move(m));
    } catch (const InputError& e) {
        fail(at, e.what());
    }
}

MatrixFamily decode_family(const Json& payload, const std::string& at) {
    MatrixFamily f;
    f.prime = decode_integer(field(payload, "prime", at), child(at, "prime"));
    f.exponent = decode_size(field(payload, "exponent", at), child(at, "exponent"));
    const std::string pat = child(at, "parameters");
    const auto& params = array_of(field(payload, "parameters", at), pat, true);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const std::string here = child(pat, i);
        FamilyParameter p;
        const Json& name = field(params[i], "name", here);
        if (!name.is_string()) fail(child(here, "name"), "expected a string");
        p.name = name.get<std::string>();
        if (const Json* r = optional_field(params[i], "residue", here)) p.residue = decode_integer(*r, child(here, "residue"));
        if (const Json* l = optional_field(params[i], "level", here)) p.level = decode_size(*l, child(here, "level"));
        if (const Json* u = optional_field(params[i], "unit", here)) {
            if (!u->is_boolean()) fail(child(here, "unit"), "expected a boolean");
            p.unit = u->get<bool>();
        }
        f.parameters.push_back(std::move(p));
    }
    const std::string eat = child(at, "entries");
    const auto& rows = array_of(field(payload, "entries", at), eat, false);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<EntryPattern> row;
        const auto& r = array_of(rows[i], child(eat, i), false);
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r[k].is_string()) {
                row.emplace_back(r[k].get<std::string>());
            } else {
                row.emplace_back(decode_integer(r[k], child(child(eat, i), k)));
            }
        }
        f.entries.push_back(std::move(row));
    }
    f.n = f.entries.size();
    if (const Json* n = optional_field(payload, "n", at)) {
        if (decode_size(*n, child(at, "n")) != f.n) fail(child(at, "n"), "n does not match entries");
    }
    if (const Json* conds = optional_field(payload, "side_conditions", at)) {
        const std::string cat = child(at, "side_conditions");
        array_of(*conds, cat, true);
        for (std::size_t c = 0; c < conds->size(); ++c) {
            const std::string here = child(cat, c);
            SideCondition sc;
            const Json& target = field((*conds)[c], "solve_for", here);
            if (!target.is_string()) fail(child(here, "solve_for"), "expected a string");
            sc.solve_for = target.get<std::string>();
            const auto& terms = array_of(field((*conds)[c], "terms", here), child(here, "terms"), false);
            for (std::size_t t = 0; t < terms.size(); ++t) {
                const std::string tat = child(child(here, "terms"), t);
                Monomial m;
                m.coefficient = decode_integer(field(terms[t], "coefficient", tat), child(tat, "coefficient"));
                const auto& factors = array_of(field(terms[t], "factors", tat), child(tat, "factors"), true);
                for (const auto& name : factors) {
                    if (!name.is_string()) fail(child(tat, "factors"), "factor names must be strings");
                    m.factors.push_back(name.get<std::string>());
                }
                sc.terms.push_back(std::move(m));
            }
            f.side_conditions.push_back(std::move(sc));
        }
    }
    try {
        f.validate();
    } catch (const InputError& e) {
        fail(at, e.what());
    }
    return f;
}

PolarizationDesc decode_polarization(const Json& payload, const std::string& at) {
    std::optional<std::vector<Integer>> type;
    if (const Json* t = optional_field(payload, "type", at)) {
        const std::string tat = child(at, "type");
        array_of(*t, tat, false);
        type.emplace();
        for (std::size_t i = 0; i < t->size(); ++i) type->push_back(decode_integer((*t)[i], child(tat, i)));
    }
    try {
        if (const Json* gram = optional_field(payload, "gram", at)) {
            PolarizationDesc pol =
                PolarizationDesc::from_gram(decode_int_matrix(*gram, child(at, "gram")));
            if (type && *type != pol.type()) fail(child(at, "type"), "type does not match the Gram matrix");
            return pol;
        }
        if (!type) fail(at, "polarization needs \"type\" or \"gram\"");
        return PolarizationDesc::from_type(*type);
    } catch (const BadType& e) {
        fail(at, e.what());
    }
}

}  // namespace isolattice::wire
