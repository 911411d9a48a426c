// Python surface: matrices are lists of rows whose entries may be int,
// fractions.Fraction or "p/q" strings; results come back as Fractions.
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "isolattice/cli.hpp"
#include "isolattice/scenarios.hpp"

namespace py = pybind11;
using namespace isolattice;

namespace {

Rational to_rational_entry(const py::handle& x) {
    return parse_rational(py::str(x).cast<std::string>());
}

Integer to_integer_entry(const py::handle& x) {
    const Rational r = to_rational_entry(x);
    if (!is_integral(r)) throw InvalidArgument("expected an integer entry");
    return r.get_num();
}

RatMatrix rat_matrix(const py::sequence& rows) {
    if (py::len(rows) == 0) throw DimensionMismatch("matrix must be non-empty");
    const std::size_t n = py::len(rows);
    const std::size_t m = py::len(rows[0]);
    RatMatrix out(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        const py::sequence row = rows[i];
        if (py::len(row) != m) throw DimensionMismatch("ragged matrix");
        for (std::size_t j = 0; j < m; ++j) out(i, j) = to_rational_entry(row[j]);
    }
    return out;
}

IntMatrix int_matrix(const py::sequence& rows) { return to_integer(rat_matrix(rows)); }

py::object fraction(const Rational& r) {
    static py::object cls = py::module_::import("fractions").attr("Fraction");
    return cls(to_string(r));
}

py::int_ py_int(const Integer& x) { return py::int_(py::str(x.get_str())); }

py::list py_matrix(const RatMatrix& m) {
    py::list rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        py::list row;
        for (std::size_t j = 0; j < m.cols(); ++j) row.append(fraction(m(i, j)));
        rows.append(row);
    }
    return rows;
}

py::list py_int_matrix(const IntMatrix& m) {
    py::list rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        py::list row;
        for (std::size_t j = 0; j < m.cols(); ++j) row.append(py_int(m(i, j)));
        rows.append(row);
    }
    return rows;
}

py::list py_ints(const std::vector<Integer>& xs) {
    py::list out;
    for (const auto& x : xs) out.append(py_int(x));
    return out;
}

std::vector<Integer> ints(const py::sequence& xs) {
    std::vector<Integer> out;
    for (const auto& x : xs) out.push_back(to_integer_entry(x));
    return out;
}

LatticeMatrix lattice(const py::sequence& rows) { return LatticeMatrix(rat_matrix(rows)); }

PolarizationDesc polarization(const py::object& type, const py::object& gram) {
    if (!gram.is_none()) return PolarizationDesc::from_gram(int_matrix(gram));
    if (!type.is_none()) return PolarizationDesc::from_type(ints(type));
    throw InvalidArgument("give either type or gram");
}

py::object from_json(const wire::Json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact lattice computations for isogenies of abelian varieties";

    static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
    static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InputError& e) {
            PyErr_SetString(input_error.ptr(), (std::string(e.code()) + ": " + e.what()).c_str());
        } catch (const DomainError& e) {
            PyErr_SetString(domain_error.ptr(), (std::string(e.code()) + ": " + e.what()).c_str());
        }
    });

    m.def(
        "lattice_from_kernel",
        [](const py::sequence& gens, const py::object& modulus, std::optional<std::size_t> n) {
            KernelData k;
            for (const auto& g : gens) k.generators.push_back(ints(g.cast<py::sequence>()));
            k.modulus = to_integer_entry(modulus);
            if (n) {
                k.n = *n;
            } else if (!k.generators.empty()) {
                k.n = k.generators.front().size();
            } else {
                throw InvalidArgument("n is required when there are no generators");
            }
            return py_matrix(lattice_from_kernel(k).matrix());
        },
        py::arg("gens"), py::arg("modulus"), py::arg("n") = py::none(),
        "Lattice of the isogeny whose kernel is generated by gens in (Z/modulus)^n.");

    m.def("canonicalize", [](const py::sequence& a) { return py_matrix(canonicalize(lattice(a)).matrix()); });
    m.def("contains", [](const py::sequence& outer, const py::sequence& inner) {
        return contains(lattice(outer), lattice(inner));
    });
    m.def("index_over_base", [](const py::sequence& a) { return fraction(index_over_base(lattice(a))); });
    m.def("kernel_structure", [](const py::sequence& a) {
        const auto k = kernel_structure(lattice(a));
        py::dict out;
        out["factors"] = py_ints(k.factors);
        out["order"] = py_int(k.order());
        out["modulus"] = py_int(k.modulus);
        py::list gens;
        for (const auto& g : k.generators) gens.append(py_ints(g));
        out["generators"] = gens;
        return out;
    });
    m.def("compose", [](const py::sequence& a, const py::sequence& b) {
        return py_matrix(compose(lattice(a), lattice(b)).matrix());
    });
    m.def("dual", [](const py::sequence& a) { return py_matrix(dual_isogeny(lattice(a)).matrix()); });

    m.def("gram_from_type", [](const py::sequence& type) { return py_int_matrix(gram_from_type(ints(type))); });
    m.def(
        "pullback",
        [](const py::sequence& f, const py::object& type, const py::object& gram) {
            return py_matrix(pullback(lattice(f), polarization(type, gram)).matrix());
        },
        py::arg("f"), py::arg("type") = py::none(), py::arg("gram") = py::none());
    m.def(
        "pushforward",
        [](const py::sequence& f, const py::object& type, const py::object& gram) -> py::object {
            const auto result = pushforward(lattice(f), polarization(type, gram));
            if (const auto* none = std::get_if<NoPushforward>(&result)) {
                py::dict out;
                out["reason"] = to_string(none->reason);
                out["detail"] = none->detail;
                return std::move(out);
            }
            const auto& p = std::get<Pushforward>(result);
            return py::make_tuple(py_int(p.d), py_matrix(p.lattice.matrix()));
        },
        py::arg("f"), py::arg("type") = py::none(), py::arg("gram") = py::none(),
        "(d, matrix) on success, otherwise a dict with the reason.");
    m.def("polarization_type", [](const py::sequence& a) { return py_ints(polarization_type(lattice(a))); });

    m.def(
        "required_precision",
        [](const py::sequence& a, const py::object& prime, unsigned long out_prec) {
            return required_precision(lattice(a), to_integer_entry(prime), out_prec);
        },
        py::arg("lattice"), py::arg("prime"), py::arg("out_prec") = 1);
    m.def(
        "conjugate",
        [](const py::sequence& sigma, const py::object& prime, unsigned long exponent,
           const py::sequence& a, unsigned long out_prec) {
            const GaloisElement g(to_integer_entry(prime), exponent, int_matrix(sigma));
            return py_int_matrix(conjugate(g, lattice(a), out_prec).matrix());
        },
        py::arg("sigma"), py::arg("prime"), py::arg("exponent"), py::arg("lattice"),
        py::arg("out_prec") = 1, "M^-1 sigma M reduced mod prime^out_prec.");

    m.def("list_scenarios", [] {
        py::list out;
        for (const auto& s : list_scenarios()) out.append(py::make_tuple(s.name, s.description));
        return out;
    });
    m.def(
        "run_scenario",
        [](const std::string& name, const py::object& l, std::optional<std::uint64_t> seed,
           std::optional<std::size_t> count, const std::string& mode) {
            ScenarioParams params;
            if (!l.is_none()) params.l = to_integer_entry(l);
            params.seed = seed;
            params.count = count;
            if (mode == "exhaustive") {
                params.mode = SampleMode::exhaustive;
            } else if (mode == "sampled") {
                params.mode = SampleMode::sampled;
            } else if (mode != "auto") {
                throw InvalidArgument("mode must be auto, exhaustive or sampled");
            }
            ScenarioReport report;
            {
                py::gil_scoped_release release;
                report = run_scenario(name, params);
            }
            return from_json(encode(report));
        },
        py::arg("name"), py::arg("l") = py::none(), py::arg("seed") = py::none(),
        py::arg("count") = py::none(), py::arg("mode") = "auto");

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli_dispatch(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        "Runs the command line tool in-process; returns (exit code, stdout, stderr).");
}
