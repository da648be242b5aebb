#include "run.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "csv.hpp"
#include "splinefit/errors.hpp"
#include "splinefit/fitter.hpp"
#include "splinefit/version.hpp"

namespace splinefit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ModelKind model_kind(const RunConfig& cfg) {
    if (cfg.model == 1) return ModelKind::modulated;
    if (cfg.model == 2) return ModelKind::modulated_with_shift;
    throw invalid_input("model must be 1 or 2");
}

SplineSpec make_spec(const RunConfig& cfg, double t0, double t1) {
    if (!cfg.knots.empty()) return SplineSpec(cfg.degree, cfg.knots);
    return SplineSpec::equidistant(cfg.degree, cfg.intervals, t0, t1);
}

std::uint64_t fnv1a64(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_input("cannot open input file '" + path + "'");
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char chunk[4096];
    while (in.read(chunk, sizeof chunk) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(chunk[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

std::string hex64(std::uint64_t value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, value);
    return buf;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json verdict_json(const SingularityVerdict& verdict) {
    json intervals = json::array();
    for (const auto& d : verdict.intervals) {
        intervals.push_back({{"k", d.interval},
                             {"samples", d.samples},
                             {"zeros", d.zeros},
                             {"required", d.required},
                             {"margin", d.margin}});
    }
    json j{{"status", to_string(verdict.status)},
           {"method", to_string(verdict.method)},
           {"intervals", intervals}};
    if (!verdict.reason.empty()) j["reason"] = verdict.reason;
    if (verdict.rank) j["rank"] = *verdict.rank;
    return j;
}

json config_json(const RunConfig& cfg, const SplineSpec& spec) {
    json j{{"model", cfg.model},
           {"degree", cfg.degree},
           {"knots", spec.knots()},
           {"eps_zero", cfg.eps_zero},
           {"eps_rank", cfg.eps_rank},
           {"normalize", cfg.normalize}};
    if (cfg.omega_range)
        j["omega_range"] = *cfg.omega_range;
    else if (cfg.omega)
        j["omega"] = *cfg.omega;
    if (cfg.tau_range)
        j["tau_range"] = *cfg.tau_range;
    else if (cfg.tau)
        j["tau"] = *cfg.tau;
    return j;
}

json coefficients_json(const FitResult& fit) {
    json j;
    const Eigen::VectorXd x1 = fit.modulated_coeffs();
    j["modulated"] = std::vector<double>(x1.data(), x1.data() + x1.size());
    if (fit.model == ModelKind::modulated_with_shift) {
        const Eigen::VectorXd x2 = fit.shift_coeffs();
        j["shift"] = std::vector<double>(x2.data(), x2.data() + x2.size());
    }
    return j;
}

void write_report(const RunConfig& cfg, const json& report) {
    const fs::path path = fs::path(cfg.output_dir) / "report.json";
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot write '" + path.string() + "'");
    out << report.dump(2) << '\n';
}

void print_verdict(const SingularityVerdict& verdict) {
    std::printf("verdict: %s", to_string(verdict.status));
    if (verdict.method != CertMethod::none) std::printf(" (%s)", to_string(verdict.method));
    if (!verdict.reason.empty()) std::printf(" -- %s", verdict.reason.c_str());
    std::printf("\n");
    if (verdict.rank) std::printf("numeric rank: %lld\n", static_cast<long long>(*verdict.rank));
    std::printf("%4s %8s %8s %10s %8s\n", "k", "N_k", "Z_k", "required", "margin");
    for (const auto& d : verdict.intervals)
        std::printf("%4d %8zu %8zu %10zu %8td\n", d.interval, d.samples, d.zeros, d.required,
                    d.margin);
}

void ensure_output_dir(const RunConfig& cfg) {
    if (!cfg.output_dir.empty() && cfg.output_dir != ".") {
        std::error_code ec;
        fs::create_directories(cfg.output_dir, ec);
    }
}

}  // namespace

std::array<double, 3> parse_range_spec(const std::string& text) {
    std::array<double, 3> range{};
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw invalid_input("range must look like START:END:STEP, got '" + text + "'");
    try {
        range[0] = std::stod(text.substr(0, first));
        range[1] = std::stod(text.substr(first + 1, second - first - 1));
        range[2] = std::stod(text.substr(second + 1));
    } catch (const std::exception&) {
        throw invalid_input("range must look like START:END:STEP, got '" + text + "'");
    }
    return range;
}

int cmd_analyze(const RunConfig& cfg) {
    const Signal signal = read_signal_csv(cfg.input_path);
    const SplineSpec spec = make_spec(cfg, signal.grid.front(), signal.grid.back());
    const ModelKind model = model_kind(cfg);

    TimeMap map;
    TimeGrid grid = signal.grid;
    SplineSpec mapped_spec = spec;
    if (cfg.normalize) {
        map = normalization_map(signal.grid);
        auto mapped = apply_time_map(map, signal.grid, spec);
        grid = std::move(mapped.first);
        mapped_spec = std::move(mapped.second);
    }

    PrototypeFn proto;
    if (cfg.prototype == "constant") {
        proto = Constant{cfg.constant_value};
    } else if (cfg.prototype == "sinusoid") {
        if (!cfg.omega) throw invalid_input("analyze needs --omega (or a constant prototype)");
        proto = Sinusoid{*cfg.omega, cfg.tau.value_or(0.0)};
    } else {
        throw invalid_input("unknown prototype '" + cfg.prototype + "'");
    }
    const PrototypeSamples samples = sample(proto, signal.grid);

    const Tolerances tol{cfg.eps_zero, cfg.eps_rank};
    const SingularityVerdict verdict = analyze(model, mapped_spec, grid, samples, tol);
    print_verdict(verdict);

    if (!cfg.dump_matrix_path.empty()) {
        std::ofstream dump(cfg.dump_matrix_path);
        if (!dump) throw invalid_input("cannot write '" + cfg.dump_matrix_path + "'");
        dump_matrix(dump, build_design_matrix(model, mapped_spec, grid, samples).data());
    }

    if (cfg.output_given) {
        ensure_output_dir(cfg);
        json report{{"tool", {{"name", "splinefit"}, {"version", kVersion}}},
                    {"timestamp", utc_timestamp()},
                    {"command", "analyze"},
                    {"input",
                     {{"path", cfg.input_path},
                      {"digest", hex64(fnv1a64(cfg.input_path))},
                      {"samples", signal.size()}}},
                    {"config", config_json(cfg, spec)},
                    {"normalization", {{"offset", map.offset}, {"scale", map.scale}}},
                    {"verdict", verdict_json(verdict)}};
        write_report(cfg, report);
    }

    switch (verdict.status) {
        case RankStatus::certified_full_rank: return 0;
        case RankStatus::certified_deficient: return 2;
        case RankStatus::unknown: return 3;
    }
    return 1;
}

int cmd_fit(const RunConfig& cfg) {
    const Signal signal = read_signal_csv(cfg.input_path);
    const SplineSpec spec = make_spec(cfg, signal.grid.front(), signal.grid.back());
    const ModelKind model = model_kind(cfg);

    // Each leg independently: explicit range > fixed value > the default
    // sweep (omega 1..16 step 1, tau one full period step pi/8).
    GridConfig grid_cfg;
    const bool swept = !(cfg.omega.has_value() && cfg.tau.has_value()) ||
                       cfg.omega_range.has_value() || cfg.tau_range.has_value();
    if (cfg.omega_range) {
        grid_cfg.omega_start = (*cfg.omega_range)[0];
        grid_cfg.omega_end = (*cfg.omega_range)[1];
        grid_cfg.omega_step = (*cfg.omega_range)[2];
    } else if (cfg.omega) {
        grid_cfg.omega_start = grid_cfg.omega_end = *cfg.omega;
        grid_cfg.omega_step = 1.0;
    }
    if (cfg.tau_range) {
        grid_cfg.tau_start = (*cfg.tau_range)[0];
        grid_cfg.tau_end = (*cfg.tau_range)[1];
        grid_cfg.tau_step = (*cfg.tau_range)[2];
    } else if (cfg.tau) {
        grid_cfg.tau_start = grid_cfg.tau_end = *cfg.tau;
        grid_cfg.tau_step = 1.0;
    }

    FitOptions opts;
    opts.tolerances = Tolerances{cfg.eps_zero, cfg.eps_rank};
    opts.normalize_time = cfg.normalize;
    opts.parallel = cfg.parallel;

    const auto [best, table] = grid_search(model, signal, spec, grid_cfg, opts);

    ensure_output_dir(cfg);
    const fs::path out_dir(cfg.output_dir);
    write_fit_csv((out_dir / "fit.csv").string(), signal, best);
    if (swept) write_grid_csv((out_dir / "grid.csv").string(), table);

    json report{{"tool", {{"name", "splinefit"}, {"version", kVersion}}},
                {"timestamp", utc_timestamp()},
                {"command", "fit"},
                {"input",
                 {{"path", cfg.input_path},
                  {"digest", hex64(fnv1a64(cfg.input_path))},
                  {"samples", signal.size()}}},
                {"config", config_json(cfg, spec)},
                {"normalization",
                 {{"offset", best.time_map.offset}, {"scale", best.time_map.scale}}},
                {"verdict", verdict_json(best.verdict)},
                {"best",
                 {{"omega", best.omega},
                  {"tau", best.tau},
                  {"sse", best.sse},
                  {"solver", to_string(best.solution.method)},
                  {"fallback", best.solution.used_fallback}}},
                {"coefficients", coefficients_json(best)},
                {"cells", table.size()}};
    write_report(cfg, report);

    std::printf("best omega=%.17g tau=%.17g sse=%.17g (%s)\n", best.omega, best.tau, best.sse,
                to_string(best.solution.method));
    return 0;
}

int cmd_synth(const RunConfig& cfg) {
    if (cfg.samples < 2) throw invalid_input("synth needs at least two samples");
    if (!(cfg.t_start < cfg.t_end)) throw invalid_input("synth needs t-start < t-end");
    const ModelKind model = model_kind(cfg);

    std::vector<double> times(cfg.samples);
    for (std::size_t i = 0; i < cfg.samples; ++i)
        times[i] = cfg.t_start + (cfg.t_end - cfg.t_start) * static_cast<double>(i) /
                                     static_cast<double>(cfg.samples - 1);
    times.back() = cfg.t_end;
    TimeGrid grid(std::move(times));

    const SplineSpec spec = make_spec(cfg, cfg.t_start, cfg.t_end);
    if (cfg.coeffs.empty()) throw invalid_input("synth needs --coeffs (or coeffs= in the config)");
    if (static_cast<Eigen::Index>(cfg.coeffs.size()) != spec.basis_size())
        throw invalid_input("coeffs must have length " + std::to_string(spec.basis_size()));
    SplineCoeffs x1 = Eigen::Map<const Eigen::VectorXd>(cfg.coeffs.data(),
                                                        static_cast<Eigen::Index>(cfg.coeffs.size()));
    SplineCoeffs x2;
    if (model == ModelKind::modulated_with_shift) {
        if (static_cast<Eigen::Index>(cfg.coeffs2.size()) != spec.basis_size())
            throw invalid_input("model 2 synth needs --coeffs2 with length " +
                                std::to_string(spec.basis_size()));
        x2 = Eigen::Map<const Eigen::VectorXd>(cfg.coeffs2.data(),
                                               static_cast<Eigen::Index>(cfg.coeffs2.size()));
    }

    const double omega = cfg.omega.value_or(1.0);
    const double tau = cfg.tau.value_or(0.0);
    Eigen::VectorXd y = synthesize(model, spec, grid, x1, x2, omega, tau, cfg.normalize);

    if (cfg.noise > 0.0) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> u(-cfg.noise, cfg.noise);
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += u(rng);
    }

    ensure_output_dir(cfg);
    const fs::path path = fs::path(cfg.output_dir) / "signal.csv";
    write_signal_csv(path.string(), grid, y);
    std::printf("wrote %s\n", path.string().c_str());
    return 0;
}

}  // namespace splinefit::cli
