#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace splinefit::cli {

/// Everything a run needs, collected from flags and the optional
/// key=value config file (flags win).
struct RunConfig {
    std::string input_path;
    std::string output_dir;
    bool output_given = false;

    int model = 1;
    int degree = 4;
    int intervals = 5;
    std::vector<double> knots;  // overrides `intervals` when non-empty

    std::optional<double> omega;
    std::optional<double> tau;
    std::optional<std::array<double, 3>> omega_range;  // start, end, step
    std::optional<std::array<double, 3>> tau_range;

    double eps_zero = 1e-12;
    double eps_rank = 1e-10;
    bool normalize = true;
    bool parallel = false;

    // synth
    std::vector<double> coeffs;
    std::vector<double> coeffs2;
    std::size_t samples = 1000;
    double t_start = 0.0;
    double t_end = 10.0;
    double noise = 0.0;
    std::uint64_t seed = 0;

    // analyze
    std::string prototype = "sinusoid";  // sinusoid | constant
    double constant_value = 1.0;
    std::string dump_matrix_path;
};

/// Parse "start:end:step".
std::array<double, 3> parse_range_spec(const std::string& text);

int cmd_analyze(const RunConfig& cfg);  // exit 0 full rank, 2 deficient, 3 unknown, 1 error
int cmd_fit(const RunConfig& cfg);
int cmd_synth(const RunConfig& cfg);

}  // namespace splinefit::cli
