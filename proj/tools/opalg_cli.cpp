// Batch command-line front end for the operator-ring library: canonical
// forms, module actions, polarization, relator translation, Weyl algebra
// arithmetic, the generalization/specialization maps, and the seeded check
// suites. Exit codes: 0 success, 1 check failure, 2 usage or parse error.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opalg/checks.hpp"
#include "opalg/laws.hpp"

namespace {

using namespace opalg;

struct GlobalOpts {
    std::string ring = "id";
    std::string weight = "0";
    std::string init = "0";
    std::string format = "text";
    uint64_t seed = 20240101;
};

Variety parse_ring(const std::string& name) {
    if (name == "diff") return Variety::Diff;
    if (name == "rb") return Variety::RB;
    if (name == "drb") return Variety::DRB;
    if (name == "id") return Variety::ID;
    throw std::invalid_argument("unknown ring '" + name + "' (expected diff|rb|drb|id)");
}

RingSpec ring_spec(const GlobalOpts& g) {
    Variety v = parse_ring(g.ring);
    Rat w = parse_rat(g.weight);
    if (g.init == "generic") {
        if (v != Variety::ID) throw std::invalid_argument("--init generic requires --ring id");
        return RingSpec::make(v, w, CoeffStructure::generic_eps(w));
    }
    return RingSpec::make(v, w, CoeffStructure::poly_x(w, parse_rat(g.init)));
}

bool json_mode(const GlobalOpts& g) { return g.format == "json"; }

void print_expr(const GlobalOpts& g, const OpExpr& e, const RingSpec& spec) {
    if (json_mode(g))
        std::cout << to_json(e, spec).dump() << "\n";
    else
        std::cout << str(e) << "\n";
}

WeylBasis parse_basis(const std::string& name) {
    if (name == "b1") return WeylBasis::B1;
    if (name == "b2") return WeylBasis::B2;
    if (name == "b3") return WeylBasis::B3;
    throw std::invalid_argument("unknown basis '" + name + "' (expected b1|b2|b3)");
}

int report_outcome(const CheckReport& rep, const std::string& what) {
    if (rep.ok) {
        std::cout << what << ": ok (" << rep.checks << " checks)\n";
        return 0;
    }
    std::cout << what << ": FAIL after " << rep.checks << " checks\n" << rep.detail << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact operator-ring computations over polynomial coefficients"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOpts g;
    if (const char* env = std::getenv("OPRING_SEED")) g.seed = std::strtoull(env, nullptr, 10);
    app.add_option("--ring", g.ring, "operator ring: diff|rb|drb|id")->capture_default_str();
    app.add_option("--weight", g.weight, "weight as a rational p/q")->capture_default_str();
    app.add_option("--init", g.init, "integral initialization: a rational point or 'generic'")
        ->capture_default_str();
    app.add_option("--format", g.format, "output format: text|json")->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    app.add_option("--seed", g.seed, "seed for randomized checks")->capture_default_str();

    std::string expr_arg, rhs_arg, law_arg, mode_arg = "c";
    std::string from_basis = "b2", to_basis = "b2", mul_basis = "b2";
    std::string at_point = "0";
    std::vector<std::string> assigns;
    unsigned bound = 3;
    size_t samples = 100;

    auto* nf_cmd = app.add_subcommand("nf", "normal form of an operator expression");
    nf_cmd->add_option("expr", expr_arg, "operator expression")->required();

    auto* apply_cmd = app.add_subcommand("apply", "apply an operator expression to a polynomial");
    apply_cmd->add_option("expr", expr_arg, "operator expression")->required();
    apply_cmd->add_option("poly", rhs_arg, "polynomial argument")->required();

    auto* mul_cmd = app.add_subcommand("mul", "free product of two expressions (no rewriting)");
    mul_cmd->add_option("left", expr_arg)->required();
    mul_cmd->add_option("right", rhs_arg)->required();

    auto* pol_cmd = app.add_subcommand("polarize", "polarize a law (componentwise if inhomogeneous)");
    pol_cmd->add_option("law", law_arg, "law in the law syntax")->required();
    pol_cmd->add_option("--mode", mode_arg, "c (commutative) or nc")->check(CLI::IsMember({"c", "nc"}));

    auto* rel_cmd = app.add_subcommand("relator", "translate a standard law into an operator relator");
    rel_cmd->add_option("law", law_arg, "standard law with argument variable y0")->required();
    rel_cmd->add_option("--assign", assigns, "parameter assignment, e.g. --assign y1=x^2");

    auto* wmul_cmd = app.add_subcommand("weyl-mul", "multiply two Weyl algebra elements");
    wmul_cmd->add_option("left", expr_arg)->required();
    wmul_cmd->add_option("right", rhs_arg)->required();
    wmul_cmd->add_option("--basis", mul_basis, "input/output basis")->check(CLI::IsMember({"b1", "b2", "b3"}));

    auto* wconv_cmd = app.add_subcommand("weyl-convert", "convert a Weyl element between bases");
    wconv_cmd->add_option("expr", expr_arg)->required();
    wconv_cmd->add_option("--from", from_basis, "source basis")->check(CLI::IsMember({"b1", "b2", "b3"}));
    wconv_cmd->add_option("--to", to_basis, "target basis")->check(CLI::IsMember({"b1", "b2", "b3"}));

    auto* embed_cmd = app.add_subcommand("embed", "embed a DRB expression over k[x] into the generic id ring");
    embed_cmd->add_option("expr", expr_arg)->required();

    auto* spec_cmd = app.add_subcommand("specialize", "fix the integration constant of a DRB expression");
    spec_cmd->add_option("expr", expr_arg)->required();
    spec_cmd->add_option("--at", at_point, "integration constant")->capture_default_str();

    auto* check_cmd = app.add_subcommand("check", "seeded verification suites");
    check_cmd->require_subcommand(1);
    auto* conf_cmd = check_cmd->add_subcommand("confluence", "overlap ambiguities reduce consistently");
    conf_cmd->add_option("--samples", samples)->capture_default_str();
    auto* orac_cmd = check_cmd->add_subcommand("oracle", "rewriting preserves the module action");
    orac_cmd->add_option("--samples", samples)->capture_default_str();
    auto* inj_cmd = check_cmd->add_subcommand("injectivity", "embedding images are linearly independent");
    inj_cmd->add_option("--bound", bound)->capture_default_str();
    auto* bases_cmd = check_cmd->add_subcommand("bases", "basis round trips and the rewrite bridge");
    bases_cmd->add_option("--bound", bound)->capture_default_str();
    bases_cmd->add_option("--samples", samples)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*nf_cmd) {
            RingSpec spec = ring_spec(g);
            OpExpr e = parse_opexpr(expr_arg, ParseOptions::for_ring(spec));
            print_expr(g, normal_form(e, spec), spec);
        } else if (*apply_cmd) {
            RingSpec spec = ring_spec(g);
            OpExpr e = parse_opexpr(expr_arg, ParseOptions::for_ring(spec));
            Poly p = parse_poly(rhs_arg, spec.coeff.kind == CoeffKind::PolyXEps);
            Poly out = apply(e, p, ActionModel::of(spec));
            if (json_mode(g))
                std::cout << to_json(out).dump() << "\n";
            else
                std::cout << out.str() << "\n";
        } else if (*mul_cmd) {
            RingSpec spec = ring_spec(g);
            auto opts = ParseOptions::for_ring(spec);
            print_expr(g, mul(parse_opexpr(expr_arg, opts), parse_opexpr(rhs_arg, opts)), spec);
        } else if (*pol_cmd) {
            TermMode mode = mode_arg == "nc" ? TermMode::Noncommutative : TermMode::Commutative;
            LawExpr law = parse_law(law_arg, mode);
            auto parts = polarize_components(law);
            if (json_mode(g)) {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& p : parts) arr.push_back(to_json(p));
                std::cout << arr.dump() << "\n";
            } else {
                for (const auto& p : parts) std::cout << str(p) << "\n";
            }
        } else if (*rel_cmd) {
            RingSpec spec = ring_spec(g);
            LawExpr law = parse_law(law_arg, TermMode::Commutative);
            std::vector<std::string> params;
            for (const auto& v : variables(law))
                if (v != "y0") params.push_back(v);
            Assignment a;
            for (const auto& s : assigns) {
                auto eq = s.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("--assign expects name=polynomial, got '" + s + "'");
                a.emplace(s.substr(0, eq), parse_poly(s.substr(eq + 1)));
            }
            StandardLaw std_law(law, "y0", params);
            print_expr(g, translate_relator(std_law, a, spec), spec);
        } else if (*wmul_cmd) {
            WeylBasis basis = parse_basis(mul_basis);
            WeylElt a = convert(parse_weyl(expr_arg, basis), WeylBasis::B2);
            WeylElt b = convert(parse_weyl(rhs_arg, basis), WeylBasis::B2);
            WeylElt out = convert(weyl_mul(a, b), basis);
            if (json_mode(g))
                std::cout << to_json(out).dump() << "\n";
            else
                std::cout << str(out) << "\n";
        } else if (*wconv_cmd) {
            WeylElt e = parse_weyl(expr_arg, parse_basis(from_basis));
            WeylElt out = convert(e, parse_basis(to_basis));
            if (json_mode(g))
                std::cout << to_json(out).dump() << "\n";
            else
                std::cout << str(out) << "\n";
        } else if (*embed_cmd) {
            EmbeddingContext ctx = EmbeddingContext::standard();
            ParseOptions opts = ParseOptions::for_ring(ctx.source);
            OpExpr e = normal_form(parse_opexpr(expr_arg, opts), ctx.source);
            print_expr(g, embed_drb(e, ctx), ctx.target);
        } else if (*spec_cmd) {
            RingSpec drb = RingSpec::make(Variety::DRB, 0, CoeffStructure::poly_x(0, parse_rat(at_point)));
            OpExpr e = parse_opexpr(expr_arg, ParseOptions::for_ring(drb));
            RingSpec id_spec = RingSpec::make(Variety::ID, 0, drb.coeff);
            print_expr(g, specialize(e, parse_rat(at_point)), id_spec);
        } else if (*check_cmd) {
            if (*conf_cmd) return report_outcome(check_confluence(ring_spec(g), samples, g.seed), "confluence");
            if (*orac_cmd) return report_outcome(check_oracle(ring_spec(g), samples, g.seed), "oracle");
            if (*inj_cmd) return report_outcome(check_injectivity(bound), "injectivity");
            if (*bases_cmd) return report_outcome(check_bases(bound, samples, g.seed), "bases");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
