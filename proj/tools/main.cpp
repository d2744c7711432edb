#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "tatereg/runners.hpp"

using namespace tatereg;

namespace {

int write_out(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return 0;
    }
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return 2;
    }
    out << text << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scenario-driven verification runner for p-adic theta "
                 "arithmetic, K2 symbols and Bloch-group regulators"};
    app.require_subcommand(1);

    std::string file, dir, out_path;
    long precision = 0, nu = 0;
    int jobs = 1;

    auto* run = app.add_subcommand("run", "run one scenario file");
    run->add_option("file", file, "scenario file")->required();
    run->add_option("--out", out_path, "write the report to a file");
    run->add_option("--precision", precision, "override working precision");
    run->add_option("--nu", nu, "override the p^nu exponent");

    auto* suite = app.add_subcommand("suite", "run a directory of scenarios");
    suite->add_option("dir", dir, "directory of .scn files")->required();
    suite->add_option("--jobs", jobs, "run scenarios concurrently");
    suite->add_option("--out", out_path, "write the aggregate report");
    suite->add_option("--precision", precision, "override working precision");
    suite->add_option("--nu", nu, "override the p^nu exponent");

    auto* kinds = app.add_subcommand("list-kinds", "list scenario kinds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            Report rep = run_scenario_file(file, precision, nu);
            int w = write_out(rep.to_json(), out_path);
            if (w != 0) return w;
            return rep.all_passed() ? 0 : 1;
        }
        if (suite->parsed()) {
            SuiteResult res = run_suite(dir, jobs, precision, nu);
            int w = write_out(res.to_json(), out_path);
            if (w != 0) return w;
            return res.ok() ? 0 : 1;
        }
        if (kinds->parsed()) {
            for (const auto& [k, doc] : scenario_kinds())
                std::cout << k << "\n    " << doc << "\n";
            return 0;
        }
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
