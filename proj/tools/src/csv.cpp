#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "splinefit/errors.hpp"

namespace splinefit::cli {

namespace {

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_field(const std::string& field, std::size_t line_no) {
    const std::string f = trimmed(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
    if (ec != std::errc() || ptr != f.data() + f.size())
        throw invalid_input("non-numeric field '" + f + "' at line " + std::to_string(line_no));
    if (!std::isfinite(value))
        throw invalid_input("non-finite value at line " + std::to_string(line_no));
    return value;
}

}  // namespace

Signal read_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open input file '" + path + "'");

    std::string line;
    if (!std::getline(in, line) || trimmed(line) != "t,y")
        throw invalid_input("missing 't,y' header in '" + path + "'");

    std::vector<double> times;
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = trimmed(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos)
            throw invalid_input("expected two comma-separated fields at line " +
                                std::to_string(line_no));
        times.push_back(parse_field(row.substr(0, comma), line_no));
        values.push_back(parse_field(row.substr(comma + 1), line_no));
    }
    if (times.size() < 2) throw invalid_input("signal needs at least two samples");

    Eigen::VectorXd y(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) y[static_cast<Eigen::Index>(i)] = values[i];
    return Signal(TimeGrid(std::move(times)), std::move(y));  // rejects nonmonotone times
}

void write_signal_csv(const std::string& path, const TimeGrid& grid, const Eigen::VectorXd& y) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot write '" + path + "'");
    out << "t,y\n";
    char buf[80];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", grid[i],
                      y[static_cast<Eigen::Index>(i)]);
        out << buf << '\n';
    }
}

void write_fit_csv(const std::string& path, const Signal& signal, const FitResult& fit) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot write '" + path + "'");
    out << "t,y,model_value,residual\n";
    char buf[160];
    for (std::size_t i = 0; i < signal.grid.size(); ++i) {
        const double t = signal.grid[i];
        const double y = signal.values[static_cast<Eigen::Index>(i)];
        const double model = fit.evaluate(t);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", t, y, model, y - model);
        out << buf << '\n';
    }
}

void write_grid_csv(const std::string& path, const std::vector<GridCell>& table) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot write '" + path + "'");
    out << "omega,tau,sse,solver_method\n";
    char buf[160];
    for (const auto& cell : table) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%s", cell.omega, cell.tau, cell.sse,
                      to_string(cell.method));
        out << buf << '\n';
    }
}

}  // namespace splinefit::cli
