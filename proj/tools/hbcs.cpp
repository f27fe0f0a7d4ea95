// Command-line front end: regenerate figure data as CSV and run the
// verification suites.  Exit codes: 0 pass, 1 verification or numeric
// failure, 2 usage or configuration error.

#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "hbcs/run.hpp"

namespace {

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        return false;
    out << text;
    return static_cast<bool>(out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyper-Bessel coherent states: figure data and verification suites"};
    app.require_subcommand(1);

    hbcs::run::RunConfig cfg;
    std::string out_path;

    auto* fig = app.add_subcommand("figure", "write the CSV behind one figure");
    fig->add_option("--id", cfg.figure_id, "figure number (1..9)")
        ->required()
        ->check(CLI::Range(1, 9));
    fig->add_option("--r", cfg.r_values, "orders to tabulate (default 1,2,3)")
        ->delimiter(',');
    fig->add_option("--x-min", cfg.x_min, "left end of the grid");
    fig->add_option("--x-max", cfg.x_max, "right end of the grid");
    fig->add_option("--steps", cfg.steps, "grid points (per axis for figures 8 and 9)");
    fig->add_option("--out", out_path, "output CSV path")->required();

    auto* ver = app.add_subcommand("verify", "run a verification suite");
    ver->add_option("--suite", cfg.suite,
                    "eigen, state, statistics, moments, nonuniqueness or all")
        ->required();
    ver->add_option("--tail-tol", cfg.tail_tol, "truncation tolerance for state checks");
    ver->add_option("--contour-re", cfg.contour_re, "real part of the Mellin contour");
    ver->add_option("--im-cutoff", cfg.im_cutoff, "contour cutoff T (0 = automatic)");
    ver->add_option("--quad-step", cfg.quad_step, "contour step h (0 = automatic)");
    ver->add_option("--x-max-integration", cfg.x_max_integration,
                    "upper end of moment integrals (0 = automatic)");
    ver->add_option("--out", out_path, "report path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fig->parsed()) {
            cfg.command = hbcs::run::RunConfig::Command::figure;
            const std::string csv = hbcs::run::run_figure(cfg);
            if (!write_file(out_path, csv)) {
                std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
                return 2;
            }
            return 0;
        }
        cfg.command = hbcs::run::RunConfig::Command::verify;
        const auto report = hbcs::run::run_verify(cfg);
        if (!write_file(out_path, report.text)) {
            std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
            return 2;
        }
        std::printf("suite=%s checks=%d failures=%d\n", cfg.suite.c_str(), report.checks,
                    report.failures);
        return report.failures == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
