#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "run.hpp"
#include "splinefit/errors.hpp"
#include "splinefit/version.hpp"

using splinefit::cli::RunConfig;

int main(int argc, char** argv) {
    CLI::App app{"Fit sampled signals with prototype-modulated fixed-knot splines"};
    app.set_version_flag("--version", splinefit::kVersion);
    app.fallthrough();
    app.set_config("--config", "", "key=value run configuration file");
    app.require_subcommand(1);

    RunConfig cfg;
    std::string omega_range_spec;
    std::string tau_range_spec;

    auto* input = app.add_option("--input", cfg.input_path, "input signal CSV (t,y)");
    auto* output =
        app.add_option("--output", cfg.output_dir, "output directory for reports and artifacts");
    app.add_option("--model", cfg.model, "approximation model (1 or 2)")
        ->check(CLI::IsMember({1, 2}));
    app.add_option("--degree", cfg.degree, "spline degree m")->check(CLI::PositiveNumber);
    app.add_option("--intervals", cfg.intervals, "number of equidistant subintervals")
        ->check(CLI::PositiveNumber);
    app.add_option("--knots", cfg.knots, "explicit knot chain a,b,c,...")->delimiter(',');
    app.add_option("--omega", cfg.omega, "prototype frequency");
    app.add_option("--tau", cfg.tau, "prototype phase (radians)");
    app.add_option("--omega-range", omega_range_spec, "frequency sweep W0:WF:STEP");
    app.add_option("--tau-range", tau_range_spec, "phase sweep T0:TF:STEP");
    app.add_option("--eps-zero", cfg.eps_zero, "relative prototype-zero threshold");
    app.add_option("--eps-rank", cfg.eps_rank, "relative numeric-rank threshold");
    app.add_flag("--no-normalize", [&cfg](std::int64_t) { cfg.normalize = false; },
                 "keep raw times (skip the [0,1] basis preconditioning)");
    app.add_flag("--parallel", cfg.parallel, "evaluate grid cells on multiple threads");
    app.add_option("--seed", cfg.seed, "noise seed for synth");

    app.add_option("--samples", cfg.samples, "synth: number of samples");
    app.add_option("--t-start", cfg.t_start, "synth: first sample time");
    app.add_option("--t-end", cfg.t_end, "synth: last sample time");
    app.add_option("--noise", cfg.noise, "synth: uniform noise amplitude");
    app.add_option("--coeffs", cfg.coeffs, "synth: modulated-spline coefficients")
        ->delimiter(',');
    app.add_option("--coeffs2", cfg.coeffs2, "synth: shift-spline coefficients (model 2)")
        ->delimiter(',');

    app.add_option("--prototype", cfg.prototype, "analyze: prototype kind (sinusoid|constant)")
        ->check(CLI::IsMember({"sinusoid", "constant"}));
    app.add_option("--constant", cfg.constant_value, "analyze: constant prototype value");
    app.add_option("--dump-matrix", cfg.dump_matrix_path,
                   "analyze: dump the assembled matrix (plain text, row-major)");

    auto* analyze = app.add_subcommand("analyze", "report the singularity verdict for a signal");
    auto* fit = app.add_subcommand("fit", "fit a signal, optionally sweeping (omega, tau)");
    auto* synth = app.add_subcommand("synth", "generate a synthetic signal CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!omega_range_spec.empty())
            cfg.omega_range = splinefit::cli::parse_range_spec(omega_range_spec);
        if (!tau_range_spec.empty())
            cfg.tau_range = splinefit::cli::parse_range_spec(tau_range_spec);
        cfg.output_given = output->count() > 0;
        if (cfg.output_dir.empty()) cfg.output_dir = ".";

        if (analyze->parsed() || fit->parsed()) {
            if (input->count() == 0) {
                std::fprintf(stderr, "error: %s needs --input\n",
                             analyze->parsed() ? "analyze" : "fit");
                return 1;
            }
        }
        if (analyze->parsed()) return splinefit::cli::cmd_analyze(cfg);
        if (fit->parsed()) return splinefit::cli::cmd_fit(cfg);
        return splinefit::cli::cmd_synth(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
