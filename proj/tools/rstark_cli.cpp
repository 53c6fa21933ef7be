// rstark: command-line front end of the verification engine.
// Exit codes: 0 all requested checks pass, 1 a check (or the input data) fails, 2 usage error.

#include "rstark/verify.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

struct Common {
    std::string field;
    unsigned precision = 100;
    std::string format = "text";
    std::string out;
};

void add_common(CLI::App* sub, Common& c, bool field_required) {
    auto* f = sub->add_option("--field", c.field, "field-instance JSON file");
    if (field_required) f->required();
    sub->add_option("--precision", c.precision, "working precision in decimal digits")
        ->check(CLI::Range(20u, 2000u))
        ->capture_default_str();
    sub->add_option("--format", c.format, "report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    sub->add_option("--out", c.out, "write the report to this file instead of stdout");
}

int emit(rstark::VerificationReport rep, const Common& c) {
    rep.input = c.field;
    const std::string body = c.format == "json" ? rep.to_json() : rep.to_text();
    if (c.out.empty()) {
        std::cout << body;
    } else {
        std::ofstream os(c.out, std::ios::binary);
        if (!os) {
            std::cerr << "rstark: cannot write '" << c.out << "'\n";
            return 2;
        }
        os << body;
    }
    return rep.passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rstark: numerical verification of the Rubin-Stark index formula over real abelian fields"};
    app.require_subcommand(1);

    Common cv, ci, cr, cs, cl, ct;
    std::int64_t conductor = 0;
    std::string character = "quadratic";

    auto* verify = app.add_subcommand("verify", "full report for one instance");
    add_common(verify, cv, true);
    auto* index = app.add_subcommand("index", "lattice indices of one instance");
    add_common(index, ci, true);
    auto* regulator = app.add_subcommand("regulator", "regulators, restriction identity, correction constants");
    add_common(regulator, cr, true);
    auto* stark = app.add_subcommand("stark", "Rubin-Stark elements with certificates");
    add_common(stark, cs, true);
    auto* lvalue = app.add_subcommand("lvalue", "leading L-values, for an instance or a single Dirichlet character");
    add_common(lvalue, cl, false);
    auto* cond = lvalue->add_option("--conductor", conductor, "modulus of the Dirichlet character");
    lvalue->add_option("--character", character, "'quadratic' or an index into the characters mod the conductor")
        ->capture_default_str()
        ->needs(cond);
    lvalue->callback([&] {
        if (cl.field.empty() == (conductor == 0))
            throw CLI::ValidationError("lvalue", "give exactly one of --field or --conductor");
    });
    auto* selftest = app.add_subcommand("selftest", "identities with trivially known values");
    add_common(selftest, ct, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    CLI::App* used = app.get_subcommands().front();
    const std::string cmd = used->get_name();
    Common& c = cmd == "verify" ? cv : cmd == "index" ? ci : cmd == "regulator" ? cr : cmd == "stark" ? cs
                                  : cmd == "lvalue"  ? cl : ct;
    if (!c.field.empty() && !std::filesystem::is_regular_file(c.field)) {
        std::cerr << "rstark: no such field-instance file '" << c.field << "'\n";
        return 2;
    }
    rstark::PrecisionContext ctx(c.precision);
    try {
        if (cmd == "lvalue" && c.field.empty()) {
            try {
                return emit(rstark::lvalue_report(conductor, character, ctx), c);
            } catch (const std::invalid_argument& e) {
                std::cerr << "rstark lvalue: " << e.what() << "\n";
                return 2;
            }
        }
        if (cmd == "selftest" && c.field.empty()) return emit(rstark::selftest_report(ctx), c);
        rstark::FieldInstance fi = rstark::load_field_instance(c.field, ctx);
        if (cmd == "selftest") return emit(rstark::selftest_report(ctx, &fi), c);
        return emit(rstark::partial_report(fi, cmd), c);
    } catch (const rstark::InstanceError& e) {
        // rejected input data is a failed verification, not a usage error
        std::cerr << "rstark " << cmd << ": instance rejected: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "rstark " << cmd << ": " << e.what() << "\n";
        return 1;
    }
}
