#include "dginj/cli.hpp"

#include <fstream>

#include "CLI11.hpp"
#include "dginj/generators.hpp"
#include "dginj/suites.hpp"

namespace dginj {

int exit_code(const json& doc) { return doc.value("status", "fail") == "pass" ? 0 : 1; }

namespace {

std::string suite_help() {
    std::string s = "suite to run: all";
    for (auto& n : suite_names()) s += ", " + n;
    return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact verification of injective DG-modules over non-positive DG algebras", "dginj"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    std::string suite, field = "F32003", outpath;
    std::vector<std::string> gens, files;
    SuiteOptions o;
    app.add_option("--suite", suite, suite_help());
    app.add_option("--gen", gens, "generated instance, e.g. koszul:x4:x2, trivext:1:1, random:7, products with '*'");
    app.add_option("--file", files, "instance file in the .dga format");
    app.add_option("--field", field, "F<p> or Q (generated instances)");
    app.add_option("--seed", o.seed, "seed for all samplers");
    app.add_option("--samples", o.samples, "sampled modules per suite")->check(CLI::Range(1, 64));
    app.add_option("--floor", o.floor, "resolution depth for injective-dimension certificates")->check(CLI::Range(1, 16));
    app.add_option("--max-dim", o.max_dim, "dimension cap for instances and sampled modules")->check(CLI::Range(1, kMaxTotalDim));
    app.add_option("--out", outpath, "write the report here instead of stdout");

    auto* run = app.add_subcommand("suite", "run a suite and print a JSON report");
    std::string suite_pos;
    run->add_option("name", suite_pos, suite_help());
    auto* parse = app.add_subcommand("parse", "parse a .dga file and print its normalized form");
    std::string parse_path;
    parse->add_option("file", parse_path)->required();
    auto* gen = app.add_subcommand("generate", "print a generated instance in the .dga format");
    std::string gen_spec;
    gen->add_option("spec", gen_spec)->required();
    auto* list = app.add_subcommand("list", "list the suites");

    std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rev.begin(), rev.end());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    try {
        const Field f = Field::parse(field);
        if (*list) {
            out << "all\n";
            for (auto& n : suite_names()) out << n << "\n";
            return 0;
        }
        if (*parse) {
            try {
                out << print_presentation(read_presentation(parse_path));
            } catch (const ParseError& e) {
                err << parse_path << ":" << e.what() << "\n";
                return 2;
            }
            return 0;
        }
        if (*gen) {
            out << print_algebra(generate(gen_spec, f));
            return 0;
        }
        if (!suite_pos.empty()) suite = suite_pos;
        if (suite.empty()) {
            err << app.help();
            return 2;
        }
        if (suite != "all" && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
            err << "dginj: unknown suite '" << suite << "'\n";
            return 2;
        }
        if (gens.empty() && files.empty()) {
            err << "dginj: give at least one --gen or --file instance\n";
            return 2;
        }
        std::vector<Instance> insts;
        for (auto& g : gens) insts.push_back(make_instance(g, f, o.max_dim));
        for (auto& p : files) {
            try {
                insts.push_back(file_instance(p, o.max_dim));
            } catch (const ParseError& e) {
                err << p << ":" << e.what() << "\n";
                return 2;
            }
        }
        json doc = suite_document(suite, insts, o);
        std::string text = doc.dump(2) + "\n";
        if (outpath.empty()) {
            out << text;
        } else {
            std::ofstream fo(outpath);
            if (!fo) {
                err << "dginj: cannot write " << outpath << "\n";
                return 2;
            }
            fo << text;
        }
        return exit_code(doc);
    } catch (const Error& e) {
        err << "dginj: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace dginj
