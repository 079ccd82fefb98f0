#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "traceform/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"arithmetic identity verification and spectral-average experiments"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file");
    // keep -h free: the sieve subcommand exposes the h-sum cutoff as --h
    app.set_help_flag("--help", "print usage");

    traceform::RunConfig cfg;
    app.add_option("--format", cfg.format, "output format: csv or jsonl")
        ->envname("TRACEFORM_FORMAT");
    app.add_option("--out", cfg.out, "write the report to this path instead of stdout")
        ->envname("TRACEFORM_OUT");
    app.add_option("--tolerance", cfg.tolerance, "override every suite's pass tolerance")
        ->envname("TRACEFORM_TOLERANCE");
    app.add_flag("--timings", cfg.timings, "add runtime_ms fields (breaks byte reproducibility)")
        ->envname("TRACEFORM_TIMINGS");
    app.add_option("--seed", cfg.seed, "base seed for all randomized checks")
        ->envname("TRACEFORM_SEED");

    auto* verify = app.add_subcommand("verify", "run every identity/inequality suite");
    verify->fallthrough();

    auto* moment = app.add_subcommand(
        "moment", "averaged fourth-power growth trend across prime levels (X = q^2)");
    moment->fallthrough();
    moment->add_option("--qmin", cfg.qmin, "lowest prime level")->envname("TRACEFORM_QMIN");
    moment->add_option("--qmax", cfg.qmax, "highest prime level")->envname("TRACEFORM_QMAX");
    moment->add_option("--k", cfg.k, "modular weight")->envname("TRACEFORM_K");

    auto* sieve = app.add_subcommand(
        "sieve", "spectral average vs Kloosterman-side main term at one prime level");
    sieve->fallthrough();
    sieve->set_help_flag("--help", "print usage");
    sieve->add_option("--q", cfg.q, "prime level")->envname("TRACEFORM_Q");
    sieve->add_option("--n", cfg.big_n, "coefficient window (N, 2N]")->envname("TRACEFORM_N");
    sieve->add_option("--h", cfg.h_cut, "h-sum cutoff H (1 <= H <= N/q)")->envname("TRACEFORM_H");
    sieve->add_option("--k", cfg.k, "modular weight")->envname("TRACEFORM_K");

    auto* voronoi = app.add_subcommand("voronoi", "divisor-sum transform corpus");
    voronoi->fallthrough();
    voronoi->add_flag("--corpus", "run the fixed 12-case corpus (the default and only mode)");

    auto* bessel = app.add_subcommand("bessel", "dual-route kernel evaluation table");
    bessel->fallthrough();
    bessel->add_option("--grid", cfg.grid, "'default' (50 log-spaced points) or lo:hi:n")
        ->envname("TRACEFORM_GRID");
    bessel->add_option("--kind", cfg.kind, "y0, k0, or j:<order>")->envname("TRACEFORM_KIND");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);                                     // prints the usage diagnostic
        return 2;
    }

    try {
        if (app.got_subcommand(verify)) return traceform::run_verify(cfg);
        if (app.got_subcommand(moment)) return traceform::run_moment(cfg);
        if (app.got_subcommand(sieve)) return traceform::run_sieve(cfg);
        if (app.got_subcommand(voronoi)) return traceform::run_voronoi(cfg);
        if (app.got_subcommand(bessel)) return traceform::run_bessel(cfg);
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
