#include "artinperv/workspace.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

using artinperv::CliReport;
using artinperv::Workspace;

struct CommonArgs {
    std::vector<std::string> files;
    std::string out;
    bool pretty = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("files", args.files, "workspace documents (JSON)");
    cmd->add_option("--out", args.out, "write the JSON result document to this path");
    cmd->add_flag("--pretty", args.pretty, "print a plain-text table on stdout");
}

Workspace load_all(const CommonArgs& args) {
    Workspace ws;
    for (const std::string& f : args.files) artinperv::load_file(ws, f);
    return ws;
}

/* the JSON document goes to --out when given, else to stdout; --pretty
 * prints the table on stdout (identical inputs yield identical bytes) */
void emit(const CliReport& r, const CommonArgs& args) {
    std::string text = r.doc.dump(2) + "\n";
    if (!args.out.empty()) {
        std::ofstream out(args.out, std::ios::binary);
        if (!out) throw artinperv::parse_error("cannot write file '" + args.out + "'");
        out << text;
        if (!out) throw artinperv::parse_error("failed writing file '" + args.out + "'");
    }
    if (args.pretty)
        std::cout << r.pretty;
    else if (args.out.empty())
        std::cout << text;
}

artinperv::Coefficients coeff_arg(const std::string& text) {
    try {
        return artinperv::parse_coefficients(text);
    } catch (const artinperv::error& e) {
        throw artinperv::parse_error(e.what());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"artinperv: exact computations with perverse Artin motives on curves\n"
                 "(set ARTINPERV_SEED to reproduce randomized test suites)"};
    app.require_subcommand(1);

    CommonArgs vargs;
    std::string canonical_path;
    CLI::App* validate = app.add_subcommand("validate", "parse documents and run every validator");
    add_common(validate, vargs);
    validate->add_option("--canonical", canonical_path,
                         "write the canonicalized workspace document to this path");

    CommonArgs oargs;
    std::string o_geometry, o_coeff = "Z";
    int o_twist = 0;
    bool o_has_twist = false;
    CLI::App* omega0 = app.add_subcommand("omega0", "graded pushforward w0 f_* 1 over a field");
    omega0->add_option("geometry", o_geometry, "geometry id")->required();
    add_common(omega0, oargs);
    omega0->add_option("--coeff", o_coeff, "coefficients: Q | Z | Zp:<p> | Zmod:<n>");
    omega0->add_option("--twist", o_twist, "negative Tate twist m >= 1")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { o_has_twist = true; });

    CommonArgs sargs;
    std::string s_id, s_coeff = "Z";
    long s_shriek = 0;
    bool s_has_shriek = false;
    CLI::App* snc = app.add_subcommand("snc", "descent spectral sequence of an SNC configuration");
    snc->add_option("snc", s_id, "snc id")->required();
    add_common(snc, sargs);
    snc->add_option("--coeff", s_coeff, "coefficients: Q | Z | Zp:<p> | Zmod:<n>");
    snc->add_option("--shriek", s_shriek, "also emit the shriek colimit columns at twist r")
        ->each([&](const std::string&) { s_has_shriek = true; });

    CommonArgs cargs;
    std::string c_geometry, c_coeff = "Z";
    unsigned long c_ell = 0;
    long c_degree = 1;
    CLI::App* cone = app.add_subcommand("cone", "dimension-4 affine cone counterexample pipeline");
    cone->add_option("geometry", c_geometry, "exceptional-divisor geometry id")->required();
    add_common(cone, cargs);
    cone->add_option("--ell", c_ell, "the prime ell")->required();
    cone->add_option("--degree", c_degree, "embedding degree of the hyperplane class");
    cone->add_option("--coeff", c_coeff, "coefficients: Q | Z | Zp:<p> | Zmod:<n>");

    CommonArgs hargs;
    std::string h_sub, h_id;
    artinperv::HeartOptions hopt;
    CLI::App* heart = app.add_subcommand("heart", "operations in the heart N(C,R)");
    heart
        ->add_option("subcommand", h_sub,
                     "kernel | cokernel | image | iext | truncate | simple | series | realize")
        ->required();
    heart->add_option("id", h_id, "object id (morphism id for kernel/cokernel/image)")
        ->required();
    add_common(heart, hargs);
    heart->add_option("--shift", hopt.shift, "truncate the object shifted by [k]");
    heart->add_option("--ell", hopt.ell, "realize: the prime ell");

    try {
        app.parse(argc, argv);
        if (validate->parsed()) {
            Workspace ws = load_all(vargs);
            CliReport r = artinperv::run_validate(ws);
            if (!canonical_path.empty()) {
                std::ofstream out(canonical_path, std::ios::binary);
                if (!out)
                    throw artinperv::parse_error("cannot write file '" + canonical_path + "'");
                out << artinperv::serialize_workspace(ws);
            }
            emit(r, vargs);
            return r.ok ? 0 : 1;
        }
        if (omega0->parsed()) {
            Workspace ws = load_all(oargs);
            emit(artinperv::run_omega0(ws, o_geometry, coeff_arg(o_coeff),
                                       o_has_twist ? std::optional<int>(o_twist) : std::nullopt),
                 oargs);
            return 0;
        }
        if (snc->parsed()) {
            Workspace ws = load_all(sargs);
            emit(artinperv::run_snc(ws, s_id, coeff_arg(s_coeff),
                                    s_has_shriek ? std::optional<long>(s_shriek) : std::nullopt),
                 sargs);
            return 0;
        }
        if (cone->parsed()) {
            Workspace ws = load_all(cargs);
            emit(artinperv::run_cone(ws, c_geometry, c_ell, c_degree, coeff_arg(c_coeff)), cargs);
            return 0;
        }
        Workspace ws = load_all(hargs);
        emit(artinperv::run_heart(ws, h_sub, h_id, hopt), hargs);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const artinperv::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const artinperv::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
