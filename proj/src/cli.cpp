#include "isolattice/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "isolattice/scenarios.hpp"
#include "isolattice/wire.hpp"

namespace isolattice {

namespace {

using wire::Json;
using wire::WireDocument;

// Operands are file paths; text starting with '{' or '[' is taken inline.
std::string read_source(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return arg;
    std::ifstream in(arg, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read '" + arg + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LatticeMatrix read_lattice(const std::string& arg) {
    return wire::decode_lattice(wire::parse_document_of_kind(read_source(arg), "lattice").payload);
}

// A polarization operand is either a polarization document or the lattice of
// one (whose inverse must be an integral antisymmetric Gram matrix).
PolarizationDesc read_polarization(const std::string& arg) {
    const WireDocument doc = wire::parse_document(read_source(arg));
    if (doc.kind == "polarization") return wire::decode_polarization(doc.payload);
    if (doc.kind == "lattice") {
        const LatticeMatrix m = wire::decode_lattice(doc.payload);
        polarization_type(m);  // NotAPolarizationLattice if it is not one
        return PolarizationDesc::from_gram(to_integer(m.inverse()));
    }
    throw ParseError("expected a polarization or lattice document, got " + doc.kind, 0, 0, "/kind");
}

// Accepts a kernel document, a JSON array of vectors, or tuple text "[(1,0),(0,1)]".
std::vector<std::vector<Integer>> read_generators(const std::string& arg, std::optional<Integer>& modulus) {
    std::string text = read_source(arg);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        const KernelData k =
            wire::decode_kernel(wire::parse_document_of_kind(text, "kernel").payload);
        if (modulus && *modulus != k.modulus) {
            throw InvalidArgument("--modulus disagrees with the kernel document");
        }
        modulus = k.modulus;
        return k.generators;
    }
    for (char& c : text) {
        if (c == '(') c = '[';
        if (c == ')') c = ']';
    }
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error&) {
        throw ParseError("generators must be a list of integer vectors", 0, 0, "");
    }
    if (!j.is_array()) throw ParseError("generators must be a list", 0, 0, "");
    std::vector<std::vector<Integer>> gens;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string at = "/" + std::to_string(i);
        if (!j[i].is_array()) throw ParseError("generator must be a vector", 0, 0, at);
        std::vector<Integer> v;
        for (std::size_t k = 0; k < j[i].size(); ++k)
            v.push_back(wire::decode_integer(j[i][k], at + "/" + std::to_string(k)));
        gens.push_back(std::move(v));
    }
    return gens;
}

std::vector<Integer> parse_type_list(const std::string& text) {
    std::vector<Integer> type;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            type.emplace_back(item);
        } catch (const std::invalid_argument&) {
            throw BadType("type entry '" + item + "' is not an integer");
        }
    }
    return type;
}

Json integer_list(const std::vector<Integer>& xs) {
    Json out = Json::array();
    for (const auto& x : xs) out.push_back(wire::encode(x));
    return out;
}

SampleMode parse_mode(const std::string& text) {
    if (text == "exhaustive") return SampleMode::exhaustive;
    if (text == "sampled") return SampleMode::sampled;
    return SampleMode::automatic;
}

struct Outcome {
    WireDocument doc;
    int code = 0;
};

Outcome ok(std::string kind, Json payload) { return {{std::move(kind), std::move(payload)}, 0}; }

Outcome failure(const std::string& error, Json payload) {
    payload["error"] = error;
    return {{"report", std::move(payload)}, 1};
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact lattice computations for isogenies of abelian varieties", "isolattice"};
    app.require_subcommand(1);
    std::function<Outcome()> action;

    // lattice ---------------------------------------------------------------
    auto* lattice = app.add_subcommand("lattice", "Lattices attached to isogenies");
    lattice->require_subcommand(1);

    std::string gens_arg;
    std::optional<std::string> modulus_arg;
    std::optional<std::size_t> dim_arg;
    auto* from_kernel = lattice->add_subcommand("from-kernel", "Lattice of the isogeny with a given kernel");
    from_kernel->add_option("--modulus", modulus_arg, "Kernel lies in (Z/m)^n");
    from_kernel->add_option("--gens", gens_arg, "Generators: file, JSON or tuple text")->required();
    from_kernel->add_option("--dim", dim_arg, "Ambient rank n (needed for an empty list)");
    from_kernel->callback([&] {
        action = [&] {
            std::optional<Integer> modulus;
            if (modulus_arg) modulus = wire::decode_integer(Json(*modulus_arg), "--modulus");
            KernelData k;
            k.generators = read_generators(gens_arg, modulus);
            if (!modulus) throw InvalidArgument("--modulus is required");
            k.modulus = *modulus;
            if (dim_arg) {
                k.n = *dim_arg;
            } else if (!k.generators.empty()) {
                k.n = k.generators.front().size();
            } else {
                throw InvalidArgument("--dim is required when there are no generators");
            }
            return ok("lattice", wire::encode(lattice_from_kernel(k)));
        };
    });

    std::string file_a, file_b, file_c;
    auto* canon = lattice->add_subcommand("canon", "Canonical basis");
    canon->add_option("LATTICE", file_a)->required();
    canon->callback([&] {
        action = [&] { return ok("lattice", wire::encode(canonicalize(read_lattice(file_a)))); };
    });

    auto* contains_cmd = lattice->add_subcommand("contains", "Whether OUTER contains INNER");
    contains_cmd->add_option("OUTER", file_a)->required();
    contains_cmd->add_option("INNER", file_b)->required();
    contains_cmd->callback([&] {
        action = [&] {
            return ok("report", Json{{"contains", contains(read_lattice(file_a), read_lattice(file_b))}});
        };
    });

    auto* kernel_cmd = lattice->add_subcommand("kernel", "Structure of L / Z^n");
    kernel_cmd->add_option("LATTICE", file_a)->required();
    kernel_cmd->callback([&] {
        action = [&] { return ok("report", wire::encode(kernel_structure(read_lattice(file_a)))); };
    });

    auto* morphism = lattice->add_subcommand("morphism", "Morphism SOURCE -> TARGET if it exists");
    morphism->add_option("SOURCE", file_a)->required();
    morphism->add_option("TARGET", file_b)->required();
    morphism->callback([&] {
        action = [&] {
            const auto m = morphism_between(read_lattice(file_a), read_lattice(file_b));
            if (!m) {
                return failure("NoMorphism",
                               Json{{"message", "source lattice is not contained in the target"}});
            }
            return ok("lattice", wire::encode(LatticeMatrix(*m)));
        };
    });

    // isogeny ---------------------------------------------------------------
    auto* isogeny = app.add_subcommand("isogeny", "Operations on isogeny matrices");
    isogeny->require_subcommand(1);
    auto* compose_cmd = isogeny->add_subcommand("compose", "Composite: B is relative to A's basis");
    compose_cmd->add_option("A", file_a)->required();
    compose_cmd->add_option("B", file_b)->required();
    compose_cmd->callback([&] {
        action = [&] {
            return ok("lattice", wire::encode(compose(read_lattice(file_a), read_lattice(file_b))));
        };
    });
    auto* dual_cmd = isogeny->add_subcommand("dual", "Dual isogeny (transpose)");
    dual_cmd->add_option("A", file_a)->required();
    dual_cmd->callback([&] {
        action = [&] { return ok("lattice", wire::encode(dual_isogeny(read_lattice(file_a)))); };
    });

    // pol -------------------------------------------------------------------
    auto* pol = app.add_subcommand("pol", "Polarizations");
    pol->require_subcommand(1);
    std::string type_arg;
    auto* gram = pol->add_subcommand("gram", "Standard polarization of a given type");
    gram->add_option("--type", type_arg, "d1,...,dg")->required();
    gram->callback([&] {
        action = [&] {
            return ok("polarization", wire::encode(PolarizationDesc::from_type(parse_type_list(type_arg))));
        };
    });
    auto* pull = pol->add_subcommand("pullback", "Pullback of POL along F");
    pull->add_option("F", file_a)->required();
    pull->add_option("POL", file_b)->required();
    pull->callback([&] {
        action = [&] {
            return ok("lattice", wire::encode(pullback(read_lattice(file_a), read_polarization(file_b))));
        };
    });
    auto* push = pol->add_subcommand("pushforward", "Pushforward of POL along F");
    push->add_option("F", file_a)->required();
    push->add_option("POL", file_b)->required();
    push->callback([&] {
        action = [&] {
            const auto result = pushforward(read_lattice(file_a), read_polarization(file_b));
            if (const auto* none = std::get_if<NoPushforward>(&result)) {
                return failure("NoPushforward",
                               Json{{"reason", to_string(none->reason)}, {"message", none->detail}});
            }
            const auto& p = std::get<Pushforward>(result);
            return ok("report", Json{{"d", wire::encode(p.d)}, {"matrix", wire::encode(p.lattice.matrix())}});
        };
    });
    auto* type_cmd = pol->add_subcommand("type", "Type of a polarization lattice");
    type_cmd->add_option("LATTICE", file_a)->required();
    type_cmd->callback([&] {
        action = [&] {
            return ok("report", Json{{"type", integer_list(polarization_type(read_lattice(file_a)))}});
        };
    });

    // galois ----------------------------------------------------------------
    auto* galois = app.add_subcommand("galois", "Galois action on torsion");
    galois->require_subcommand(1);
    unsigned long out_prec = 1;
    auto* conj = galois->add_subcommand("conjugate", "Matrix of SIGMA in the basis of LATTICE");
    conj->add_option("SIGMA", file_a)->required();
    conj->add_option("LATTICE", file_b)->required();
    conj->add_option("--out-prec", out_prec, "Output exponent N (mod l^N)")->check(CLI::PositiveNumber);
    conj->callback([&] {
        action = [&] {
            const GaloisElement sigma = wire::decode_galois(
                wire::parse_document_of_kind(read_source(file_a), "galois-element").payload);
            return ok("galois-element", wire::encode(conjugate(sigma, read_lattice(file_b), out_prec)));
        };
    });

    std::uint64_t seed = 0;
    std::size_t count = 1000;
    std::string mode_arg = "auto";
    unsigned threads = 0;
    auto* verify = galois->add_subcommand("verify", "Check that FAMILY conjugates into TARGET");
    verify->add_option("FAMILY", file_a)->required();
    verify->add_option("LATTICE", file_b)->required();
    verify->add_option("TARGET", file_c)->required();
    verify->add_option("--seed", seed, "Sampler seed");
    verify->add_option("--count", count, "Number of samples");
    verify->add_option("--mode", mode_arg, "auto, exhaustive or sampled")
        ->check(CLI::IsMember({"auto", "exhaustive", "sampled"}));
    verify->add_option("--threads", threads, "Worker threads (0 = hardware)");
    verify->callback([&] {
        action = [&] {
            const auto family = wire::decode_family(
                wire::parse_document_of_kind(read_source(file_a), "family").payload);
            const auto target = wire::decode_family(
                wire::parse_document_of_kind(read_source(file_c), "family").payload);
            const SampleMode mode = parse_mode(mode_arg);
            const auto report =
                verify_image_shape(family, read_lattice(file_b), target, seed, count, mode, threads);
            return Outcome{{"report", wire::encode(report)}, report.ok() ? 0 : 1};
        };
    });

    // scenario --------------------------------------------------------------
    auto* scenario = app.add_subcommand("scenario", "Reproductions of worked examples");
    scenario->require_subcommand(1);
    auto* list = scenario->add_subcommand("list", "Registered scenarios");
    list->callback([&] {
        action = [&] {
            Json items = Json::array();
            for (const auto& s : list_scenarios())
                items.push_back(Json{{"name", s.name}, {"description", s.description}});
            return ok("report", Json{{"scenarios", items}});
        };
    });
    std::string scenario_name;
    std::optional<std::string> l_arg;
    std::optional<std::uint64_t> scenario_seed;
    std::optional<std::size_t> scenario_count;
    auto* run = scenario->add_subcommand("run", "Run one scenario");
    run->add_option("NAME", scenario_name)->required();
    run->add_option("--l", l_arg, "The prime l");
    run->add_option("--seed", scenario_seed, "Sampler seed");
    run->add_option("--count", scenario_count, "Number of samples");
    run->add_option("--mode", mode_arg, "auto, exhaustive or sampled")
        ->check(CLI::IsMember({"auto", "exhaustive", "sampled"}));
    run->callback([&] {
        action = [&] {
            ScenarioParams params;
            if (l_arg) params.l = wire::decode_integer(Json(*l_arg), "--l");
            params.seed = scenario_seed;
            params.count = scenario_count;
            params.mode = parse_mode(mode_arg);
            const ScenarioReport report = run_scenario(scenario_name, params);
            return Outcome{{"report", encode(report)}, report.pass() ? 0 : 1};
        };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        const Outcome outcome = action();
        out << wire::emit_document(outcome.doc);
        return outcome.code;
    } catch (const DomainError& e) {
        out << wire::emit_document({"report", Json{{"error", e.code()}, {"message", e.what()}}});
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.code() << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace isolattice
