#include "isolattice/scenarios.hpp"

#include <functional>
#include <map>

#include "isolattice/galois.hpp"
#include "isolattice/lattice.hpp"
#include "isolattice/normal_form.hpp"
#include "isolattice/polarization.hpp"

namespace isolattice {

namespace detail {
// Defined in the generated scenario_data.cpp.
std::string_view embedded_scenario(std::string_view name);
}  // namespace detail

using wire::Json;

namespace {

constexpr const char* kWorkedExample = "worked example";
constexpr const char* kDerived = "derived";
constexpr const char* kIdentity = "identity";

const std::vector<std::string> kScenarioNames = {"cyclic-elliptic", "elliptic-pol",
                                                 "surface-quotient"};

Json load_golden(std::string_view name) {
    return Json::parse(scenario_golden(name));
}

class Recorder {
public:
    explicit Recorder(ScenarioReport& report) : report_(report) {}

    bool check(std::string description, const char* source, Json computed, Json expected) {
        const bool pass = computed == expected;
        report_.steps.push_back({std::move(description), source, std::move(computed),
                                 std::move(expected), pass});
        return pass;
    }

    // For checks whose computed side is a summary rather than a value.
    void check_true(std::string description, const char* source, bool ok, Json detail = {}) {
        if (detail.is_null()) detail = Json::object();
        detail["ok"] = ok;
        report_.steps.push_back(
            {std::move(description), source, std::move(detail), Json{{"ok", true}}, ok});
    }

private:
    ScenarioReport& report_;
};

Json integers(const std::vector<Integer>& xs) {
    Json out = Json::array();
    for (const auto& x : xs) out.push_back(wire::encode(x));
    return out;
}

Json integer_rows(const std::vector<std::vector<Integer>>& rows) {
    Json out = Json::array();
    for (const auto& r : rows) out.push_back(integers(r));
    return out;
}

std::vector<Integer> evaluate_list(const Json& entries, const Integer& l) {
    std::vector<Integer> out;
    for (const auto& e : entries) out.push_back(evaluate_in_l(e.get<std::string>(), l).get_num());
    return out;
}

MatrixFamily golden_family(const Json& golden, const Integer& l,
                           std::optional<unsigned long> exponent = std::nullopt) {
    Json payload = golden;
    payload["prime"] = wire::encode(l);
    if (exponent) payload["exponent"] = *exponent;
    return wire::decode_family(payload, "/golden");
}

KernelData golden_kernel(const Json& gens, const Integer& modulus) {
    KernelData k;
    for (const auto& g : gens) {
        std::vector<Integer> v;
        for (const auto& x : g) v.push_back(wire::decode_integer(x, "/golden"));
        k.generators.push_back(std::move(v));
    }
    k.n = k.generators.front().size();
    k.modulus = modulus;
    return k;
}

// Visits family members exhaustively when small enough, otherwise `count`
// seeded samples; returns the number visited and whether it was exhaustive.
std::pair<std::uint64_t, bool> for_each_member(const MatrixFamily& family, SampleMode mode,
                                               std::uint64_t seed, std::size_t count,
                                               const std::function<void(const GaloisElement&)>& fn) {
    std::uint64_t visited = 0;
    if (mode == SampleMode::exhaustive ||
        (mode == SampleMode::automatic && family_space_size(family) <= kExhaustiveLimit)) {
        enumerate_family(family, [&](const GaloisElement& g) {
            ++visited;
            fn(g);
        });
        return {visited, true};
    }
    for (const auto& g : sample_family(family, seed, count)) {
        ++visited;
        fn(g);
    }
    return {visited, false};
}

// Running common fixed subspace of a stream of mod-l elements. Only elements
// that move some currently fixed vector are kept.
class FixedSubspaceTracker {
public:
    void add(const GaloisElement& g) {
        if (!witnesses_.empty() && fixes_all(g)) return;
        witnesses_.push_back(g);
        basis_ = fixed_subspace(witnesses_);
    }
    std::size_t dimension() const { return witnesses_.empty() ? 0 : basis_.size(); }

private:
    bool fixes_all(const GaloisElement& g) const {
        const std::size_t n = g.dimension();
        for (const auto& v : basis_)
            for (std::size_t i = 0; i < n; ++i) {
                Integer acc = -v[i];
                for (std::size_t j = 0; j < n; ++j) acc += g(i, j) * v[j];
                if (mod_nonneg(acc, g.prime()) != 0) return false;
            }
        return true;
    }

    std::vector<GaloisElement> witnesses_;
    std::vector<std::vector<Integer>> basis_;
};

Json verification_summary(const ConjugationReport& r) {
    Json j{{"mode", r.exhaustive ? "exhaustive" : "sampled"},
           {"checked", r.checked},
           {"failed", r.failed}};
    if (r.counterexample) {
        j["counterexample"] = wire::encode(r.counterexample->sample);
        j["reason"] = r.counterexample->reason;
    }
    return j;
}

struct Context {
    Json golden;
    Integer l;
    std::uint64_t seed;
    std::size_t count;
    SampleMode mode;
};

// ---------------------------------------------------------------------------

void run_cyclic_elliptic(const Context& ctx, Recorder& rec) {
    const Integer& l = ctx.l;
    const Json& g = ctx.golden;
    const Json l_json = wire::encode(l);

    const LatticeMatrix lattice = lattice_from_kernel(golden_kernel(g["kernel_generators"], l));
    const RatMatrix expected = evaluate_matrix_in_l(g["lattice"], l);
    rec.check("lattice of the kernel <(1,0)> mod l", kWorkedExample, wire::encode(lattice.matrix()),
              wire::encode(expected));
    rec.check("index over the base lattice", kWorkedExample,
              Json(to_string(index_over_base(lattice))),
              Json(to_string(evaluate_in_l(g["index"].get<std::string>(), l))));

    const AbelianGroupInvariants kernel = kernel_structure(lattice);
    rec.check("kernel invariant factors", kWorkedExample, integers(kernel.factors),
              integers(evaluate_list(g["kernel_factors"], l)));
    rec.check("kernel generator", kWorkedExample, integer_rows(kernel.generators),
              g["kernel_generator"]);

    rec.check("input precision needed for the mod-l conjugate", kWorkedExample,
              Json(required_precision(lattice, l, 1)), g["required_precision"]);

    // Conjugation law: M^-1 [[a, b], [c, d]] M = [[a, l b], [c / l, d]].
    const MatrixFamily borel = golden_family(g["borel_family"], l);
    std::uint64_t law_failures = 0;
    Json first_failure;
    for (const auto& sigma : sample_family(borel, ctx.seed, ctx.count)) {
        const GaloisElement image = conjugate(sigma, lattice, 1);
        IntMatrix law(2, 2);
        law(0, 0) = sigma(0, 0);
        law(0, 1) = l * sigma(0, 1);
        law(1, 0) = sigma(1, 0) / l;
        law(1, 1) = sigma(1, 1);
        const GaloisElement expected_image(l, 1, law);
        if (!(image == expected_image)) {
            if (first_failure.is_null()) first_failure = wire::encode(sigma);
            ++law_failures;
        }
    }
    rec.check("conjugates of " + std::to_string(ctx.count) +
                  " seeded Borel elements mod l^2 follow [[a, l b], [c/l, d]]",
              kWorkedExample,
              Json{{"checked", ctx.count}, {"failed", law_failures}, {"first_failure", first_failure}},
              Json{{"checked", ctx.count}, {"failed", 0}, {"first_failure", nullptr}});

    const MatrixFamily lower = golden_family(g["lower_triangular_shape"], l);
    const ConjugationReport shape = verify_image_shape(borel, lattice, lower, ctx.seed, ctx.count, ctx.mode);
    rec.check_true("mod-l image on the isogenous curve is lower triangular with 1 in the corner",
                   kWorkedExample, shape.ok(), verification_summary(shape));

    const GaloisElement swap(l, 2, wire::decode_int_matrix(g["swap"], "/golden/swap"));
    rec.check("swap matrix does not preserve the lattice", kDerived, Json(is_stable(swap, lattice)),
              Json(false));
    rec.check("identity preserves the lattice", kIdentity,
              Json(is_stable(GaloisElement::identity(2, l, 2), lattice)), Json(true));
}

void run_elliptic_pol(const Context& ctx, Recorder& rec) {
    const Integer& l = ctx.l;
    const Json& g = ctx.golden;
    const LatticeMatrix phi(evaluate_matrix_in_l(g["isogeny"], l));
    const PolarizationDesc principal = PolarizationDesc::from_type({1});

    rec.check("lattice of the principal polarization", kWorkedExample,
              wire::encode(lattice_of_polarization(principal).matrix()),
              wire::encode(evaluate_matrix_in_l(g["principal"], l)));

    const LatticeMatrix pulled = pullback(phi, principal);
    rec.check("pullback of the principal polarization", kWorkedExample,
              wire::encode(pulled.matrix()), wire::encode(evaluate_matrix_in_l(g["pullback"], l)));
    rec.check("pullback is l times a principal polarization", kWorkedExample,
              integers(polarization_type(pulled)), integers(evaluate_list(g["pullback_type"], l)));

    const auto pushed = pushforward(phi, principal);
    if (const auto* fail = std::get_if<NoPushforward>(&pushed)) {
        rec.check("pushforward exists", kWorkedExample, Json(fail->detail), Json("exists"));
        return;
    }
    const Pushforward& push = std::get<Pushforward>(pushed);
    rec.check("minimal d with ker(phi) inside ker(d lambda)", kWorkedExample,
              Json(to_string(push.d)),
              Json(to_string(evaluate_in_l(g["pushforward_d"].get<std::string>(), l))));
    rec.check("pushforward lattice", kWorkedExample, wire::encode(push.lattice.matrix()),
              wire::encode(evaluate_matrix_in_l(g["pushforward"], l)));
    rec.check("pushforward is principal", kWorkedExample, integers(polarization_type(push.lattice)),
              integers(evaluate_list(g["pushforward_type"], l)));

    // d lambda = phi^dual . phi_* lambda . phi
    rec.check("pulling the pushforward back gives l times the principal polarization", kDerived,
              wire::encode(pullback(phi, push.lattice).matrix()),
              wire::encode(evaluate_matrix_in_l(g["pullback"], l)));
}

void run_surface_quotient(const Context& ctx, Recorder& rec) {
    const Integer& l = ctx.l;
    const Json& g = ctx.golden;

    const LatticeMatrix from_kernel = lattice_from_kernel(golden_kernel(g["kernel_generators"], l));
    const LatticeMatrix quotient(evaluate_matrix_in_l(g["quotient_lattice"], l));
    rec.check("lattice of the kernel <(P, Q)> equals the quotient lattice (canonical forms)",
              kWorkedExample, wire::encode(from_kernel.matrix()),
              wire::encode(canonicalize(quotient).matrix()));
    const auto transition = morphism_between(from_kernel, quotient);
    rec.check_true("the two bases differ by a unimodular column change", kWorkedExample,
                   transition && abs(determinant(*transition)) == 1);
    rec.check("quotient index", kWorkedExample, Json(to_string(index_over_base(quotient))),
              Json(to_string(evaluate_in_l(g["quotient_index"].get<std::string>(), l))));
    rec.check("quotient kernel is cyclic of order l", kWorkedExample,
              integers(kernel_structure(quotient).factors),
              integers(evaluate_list(g["quotient_factors"], l)));

    const PolarizationDesc product = PolarizationDesc::principal_product(2);
    rec.check("lattice of l times the product polarization", kWorkedExample,
              wire::encode((make_rational(1, l) * lattice_of_polarization(product).matrix())),
              wire::encode(evaluate_matrix_in_l(g["scaled_product_polarization"], l)));

    const auto pushed = pushforward(quotient, product);
    if (const auto* fail = std::get_if<NoPushforward>(&pushed)) {
        rec.check("pushforward exists", kWorkedExample, Json(fail->detail), Json("exists"));
        return;
    }
    const Pushforward& push = std::get<Pushforward>(pushed);
    const LatticeMatrix& polarization = push.lattice;
    rec.check("minimal d for the pushforward", kWorkedExample, Json(to_string(push.d)),
              Json(to_string(evaluate_in_l(g["pushforward_d"].get<std::string>(), l))));
    rec.check("pushforward polarization lattice M_q^-1 M_(l lambda0) (M_q^T)^-1", kWorkedExample,
              wire::encode(polarization.matrix()),
              wire::encode(evaluate_matrix_in_l(g["polarization_lattice"], l)));
    rec.check("polarization type", kWorkedExample, integers(polarization_type(polarization)),
              integers(evaluate_list(g["polarization_type"], l)));
    const auto factors = invariant_factors(to_integer(polarization.inverse()));
    rec.check("Smith invariants of the inverse", kWorkedExample, integers(factors),
              integers(evaluate_list(g["polarization_factors"], l)));
    rec.check("kernel of the polarization has l^2 elements", kWorkedExample,
              Json(to_string(kernel_structure(polarization).order())),
              Json(to_string(evaluate_in_l(g["polarization_kernel_order"].get<std::string>(), l))));

    const LatticeMatrix dual = compose(quotient, polarization);
    rec.check("lattice of the dual inside the product", kWorkedExample,
              wire::encode(dual.matrix()), wire::encode(evaluate_matrix_in_l(g["dual_lattice"], l)));
    rec.check("required input precision", kDerived,
              Json{{"quotient", required_precision(quotient, l, 1)},
                   {"dual", required_precision(dual, l, 1)}},
              g["required_precision"]);

    const MatrixFamily family = golden_family(g["galois_family"], l);
    const MatrixFamily quotient_shape = golden_family(g["quotient_shape"], l);
    const MatrixFamily dual_shape = golden_family(g["dual_shape"], l);

    const ConjugationReport on_quotient =
        verify_image_shape(family, quotient, quotient_shape, ctx.seed, ctx.count, ctx.mode);
    rec.check_true("image on A[l] lies in the mod-l quotient shape", kWorkedExample,
                   on_quotient.ok(), verification_summary(on_quotient));
    const ConjugationReport on_dual =
        verify_image_shape(family, dual, dual_shape, ctx.seed, ctx.count, ctx.mode);
    rec.check_true("image on the dual's l-torsion lies in the mod-l dual shape", kWorkedExample,
                   on_dual.ok(), verification_summary(on_dual));

    // Read the dual-shape parameters back and test the determinant identity
    // z1 - z2 = b1 w1 - b2 w2 - d (x1 - x2) mod l.
    std::uint64_t identity_failures = 0;
    FixedSubspaceTracker quotient_images;
    FixedSubspaceTracker dual_images;
    const Conjugator to_quotient(quotient, l, 1);
    const Conjugator to_dual(dual, l, 1);
    const auto [visited, exhaustive] =
        for_each_member(family, ctx.mode, ctx.seed, ctx.count, [&](const GaloisElement& sigma) {
            const GaloisElement a = to_quotient(sigma);
            const GaloisElement ad = to_dual(sigma);
            const Integer d = ad(0, 0);
            const Integer b1 = -ad(1, 0);
            const Integer w1 = -ad(2, 1);
            const Integer w2 = -ad(2, 3);
            const Integer b2 = ad(3, 0);
            const Integer z_diff = ad(2, 0);
            const Integer x_diff = a(0, 2);
            if (mod_nonneg(z_diff - (b1 * w1 - b2 * w2 - d * x_diff), l) != 0) ++identity_failures;
            quotient_images.add(a);
            dual_images.add(ad);
        });
    rec.check("determinant identity on the dual's parameters", kWorkedExample,
              Json{{"checked", visited}, {"failed", identity_failures},
                   {"mode", exhaustive ? "exhaustive" : "sampled"}},
              Json{{"checked", visited}, {"failed", 0},
                   {"mode", exhaustive ? "exhaustive" : "sampled"}});

    // Conjugating in two steps agrees with conjugating by the product.
    const MatrixFamily deep = golden_family(g["galois_family"], l, 3);
    const std::size_t compat_count = std::min<std::size_t>(ctx.count, 2000);
    std::uint64_t compat_failures = 0;
    const Conjugator first_step(quotient, l, 2);
    const Conjugator second_step(polarization, l, 1);
    for (const auto& sigma : sample_family(deep, ctx.seed, compat_count)) {
        if (!(second_step(first_step(sigma)) == to_dual(sigma))) ++compat_failures;
    }
    rec.check("conjugating by M_q then M_lambda equals conjugating by M_q M_lambda", kDerived,
              Json{{"checked", compat_count}, {"failed", compat_failures}},
              Json{{"checked", compat_count}, {"failed", 0}});

    const Json& dims = g["fixed_dimension"];
    const Json dual_dim = l == 2 ? dims["dual_when_l_is_2"] : dims["dual"];
    std::vector<GaloisElement> shape_members;
    enumerate_family(quotient_shape, [&](const GaloisElement& x) { shape_members.push_back(x); });
    const auto quotient_fixed = fixed_subspace(shape_members);
    rec.check("vectors fixed by the whole quotient shape", kDerived, integer_rows(quotient_fixed),
              g["quotient_fixed_basis"]);
    shape_members.clear();
    enumerate_family(dual_shape, [&](const GaloisElement& x) { shape_members.push_back(x); });
    rec.check("dimension fixed by the whole dual shape", kDerived,
              Json(fixed_subspace(shape_members).size()), dual_dim);
    rec.check("fixed dimensions of the computed images (quotient, dual)", kDerived,
              Json::array({quotient_images.dimension(), dual_images.dimension()}),
              Json::array({dims["quotient"], dual_dim}));
}

using Runner = void (*)(const Context&, Recorder&);

Runner runner_for(std::string_view name) {
    if (name == "cyclic-elliptic") return run_cyclic_elliptic;
    if (name == "elliptic-pol") return run_elliptic_pol;
    if (name == "surface-quotient") return run_surface_quotient;
    throw UnknownScenario("unknown scenario '" + std::string(name) + "'");
}

}  // namespace

std::string_view scenario_golden(std::string_view name) {
    const std::string_view text = detail::embedded_scenario(name);
    if (text.empty()) throw UnknownScenario("unknown scenario '" + std::string(name) + "'");
    return text;
}

std::vector<ScenarioInfo> list_scenarios() {
    std::vector<ScenarioInfo> out;
    for (const auto& name : kScenarioNames) {
        out.push_back({name, load_golden(name)["description"].get<std::string>()});
    }
    return out;
}

bool ScenarioReport::pass() const {
    for (const auto& s : steps)
        if (!s.pass) return false;
    return true;
}

ScenarioReport run_scenario(std::string_view name, const ScenarioParams& params) {
    const Runner runner = runner_for(name);
    Context ctx;
    ctx.golden = load_golden(name);
    const Json& defaults = ctx.golden["defaults"];
    ctx.l = params.l.value_or(wire::decode_integer(defaults["l"], "/defaults/l"));
    ctx.seed = params.seed.value_or(defaults["seed"].get<std::uint64_t>());
    ctx.count = params.count.value_or(defaults["count"].get<std::size_t>());
    ctx.mode = params.mode;
    if (!is_probable_prime(ctx.l)) throw InvalidArgument("l = " + to_string(ctx.l) + " is not prime");

    ScenarioReport report;
    report.name = std::string(name);
    const char* mode_name = ctx.mode == SampleMode::exhaustive ? "exhaustive"
                            : ctx.mode == SampleMode::sampled  ? "sampled"
                                                               : "auto";
    report.parameters = Json{
        {"l", wire::encode(ctx.l)}, {"seed", ctx.seed}, {"count", ctx.count}, {"mode", mode_name}};
    Recorder rec(report);
    runner(ctx, rec);
    return report;
}

Json encode(const ScenarioReport& report) {
    Json steps = Json::array();
    for (const auto& s : report.steps) {
        steps.push_back(Json{{"description", s.description},
                             {"source", s.source},
                             {"computed", s.computed},
                             {"expected", s.expected},
                             {"pass", s.pass}});
    }
    return Json{{"name", report.name},
                {"parameters", report.parameters},
                {"steps", steps},
                {"pass", report.pass()}};
}

Rational evaluate_in_l(std::string_view entry, const Integer& l) {
    // coefficient [* l^k] | [-]l[^k]
    std::string text(entry);
    Rational coefficient = 1;
    std::string power_part;
    if (const auto star = text.find('*'); star != std::string::npos) {
        coefficient = parse_rational(text.substr(0, star));
        power_part = text.substr(star + 1);
    } else if (text.find('l') != std::string::npos) {
        if (!text.empty() && text.front() == '-') {
            coefficient = -1;
            text.erase(0, 1);
        }
        power_part = text;
    } else {
        return parse_rational(text);
    }
    if (power_part.empty() || power_part.front() != 'l') {
        throw InvalidArgument("bad golden entry '" + std::string(entry) + "'");
    }
    long exponent = 1;
    if (power_part.size() > 1) {
        if (power_part[1] != '^') throw InvalidArgument("bad golden entry '" + std::string(entry) + "'");
        exponent = std::stol(power_part.substr(2));
    }
    const Rational base = exponent >= 0 ? Rational(pow(l, exponent))
                                        : make_rational(1, pow(l, static_cast<unsigned long>(-exponent)));
    return coefficient * base;
}

RatMatrix evaluate_matrix_in_l(const Json& rows, const Integer& l) {
    RatMatrix m(rows.size(), rows.at(0).size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(i, j) = evaluate_in_l(rows[i][j].get<std::string>(), l);
    return m;
}

}  // namespace isolattice
