#include "splinefit/fitter.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "splinefit/errors.hpp"

namespace splinefit {

namespace {

// Shared, (omega, tau)-independent state for a sweep.
struct FitContext {
    ModelKind model;
    const Signal* signal;
    TimeGrid grid;       // mapped domain
    SplineSpec spec;     // mapped domain
    TimeMap map;
    IntervalAssignment assignment;
    Eigen::MatrixXd basis;  // unmodulated truncated-power basis
    Tolerances tol;

    FitContext(ModelKind model_, const Signal& signal_, const SplineSpec& raw_spec,
               const FitOptions& opts)
        : model(model_),
          signal(&signal_),
          grid(signal_.grid),
          spec(raw_spec),
          map(opts.normalize_time ? normalization_map(signal_.grid) : TimeMap{}),
          assignment({signal_.size()}, signal_.size()),
          tol(opts.tolerances) {
        if (opts.normalize_time) {
            auto mapped = apply_time_map(map, signal_.grid, raw_spec);
            grid = std::move(mapped.first);
            spec = std::move(mapped.second);
        }
        require_bound(spec, grid);
        assignment = assign_intervals(grid, spec);
        for (int k = 1; k <= assignment.n_intervals(); ++k) {
            if (assignment.counts()[static_cast<std::size_t>(k) - 1] == 0)
                throw invalid_input("subinterval " + std::to_string(k) + " contains no samples");
        }
        basis = build_unmodulated_basis(spec, grid);
    }
};

struct CellFit {
    LsqSolution solution;
    SingularityVerdict verdict;
};

CellFit fit_cell(const FitContext& ctx, double omega, double tau) {
    // The prototype is evaluated on the raw time axis; only the spline
    // basis lives in the mapped domain.
    const PrototypeSamples samples = sample(Sinusoid{omega, tau}, ctx.signal->grid);
    const DesignMatrix dm =
        assemble_design_matrix(ctx.model, ctx.spec, ctx.basis, ctx.assignment, samples);

    SingularityVerdict verdict;
    if (ctx.model == ModelKind::modulated) {
        verdict = check_sample_counts(ctx.spec, ctx.assignment, samples, ctx.tol.eps_zero);
        verdict.tolerances = ctx.tol;
    } else {
        verdict = check_block_elimination(interleave_blocks(dm), ctx.spec, ctx.assignment,
                                          samples, ctx.tol)
                      .first;
    }
    return {dispatch_solve(dm.data(), ctx.signal->values, verdict, ctx.tol), std::move(verdict)};
}

FitResult make_result(const FitContext& ctx, double omega, double tau, CellFit&& cell) {
    const double sse = cell.solution.residual_sse;
    return FitResult{ctx.model, omega, tau, std::move(cell.solution), std::move(cell.verdict),
                     sse,       ctx.map,    ctx.spec};
}

}  // namespace

Signal::Signal(TimeGrid g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
    if (static_cast<std::size_t>(values.size()) != grid.size())
        throw invalid_input("signal values do not match the grid length");
}

void GridConfig::validate() const {
    if (!(omega_step > 0.0) || !(tau_step > 0.0))
        throw invalid_input("grid steps must be positive");
    if (omega_end < omega_start || tau_end < tau_start)
        throw invalid_input("grid range end must not precede its start");
}

std::size_t GridConfig::omega_count() const {
    return static_cast<std::size_t>(std::floor((omega_end - omega_start) / omega_step + 1e-9)) + 1;
}

std::size_t GridConfig::tau_count() const {
    return static_cast<std::size_t>(std::floor((tau_end - tau_start) / tau_step + 1e-9)) + 1;
}

Eigen::VectorXd FitResult::modulated_coeffs() const {
    return solution.coeffs.head(spec.basis_size());
}

Eigen::VectorXd FitResult::shift_coeffs() const {
    if (model == ModelKind::modulated) return Eigen::VectorXd();
    return solution.coeffs.tail(spec.basis_size());
}

double FitResult::evaluate(double t) const {
    const double u = time_map.apply(t);
    double value = eval_spline(spec, modulated_coeffs(), u) * std::sin(omega * t + tau);
    if (model == ModelKind::modulated_with_shift)
        value += eval_spline(spec, shift_coeffs(), u);
    return value;
}

FitResult fit_fixed(ModelKind model, const Signal& signal, const SplineSpec& spec, double omega,
                    double tau, const FitOptions& opts) {
    FitContext ctx(model, signal, spec, opts);
    return make_result(ctx, omega, tau, fit_cell(ctx, omega, tau));
}

std::pair<FitResult, std::vector<GridCell>> grid_search(ModelKind model, const Signal& signal,
                                                        const SplineSpec& spec,
                                                        const GridConfig& cfg,
                                                        const FitOptions& opts) {
    cfg.validate();
    FitContext ctx(model, signal, spec, opts);

    const std::size_t n_tau = cfg.tau_count();
    const std::size_t cells = cfg.cell_count();
    std::vector<GridCell> table(cells);

    auto eval_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const double omega = cfg.omega_at(idx / n_tau);
            const double tau = cfg.tau_at(idx % n_tau);
            CellFit cell = fit_cell(ctx, omega, tau);
            table[idx] = {omega, tau, cell.solution.residual_sse, cell.solution.method,
                          cell.solution.used_fallback};
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_workers = opts.parallel ? std::min<std::size_t>(hw, cells) : 1;
    if (n_workers <= 1) {
        eval_range(0, cells);
    } else {
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto guarded = [&](std::size_t begin, std::size_t end) {
            try {
                eval_range(begin, end);
            } catch (...) {
                const std::scoped_lock lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        };
        {
            std::vector<std::jthread> workers;
            workers.reserve(n_workers);
            const std::size_t chunk = (cells + n_workers - 1) / n_workers;
            for (std::size_t w = 0; w < n_workers; ++w) {
                const std::size_t begin = w * chunk;
                const std::size_t end = std::min(cells, begin + chunk);
                if (begin < end) workers.emplace_back(guarded, begin, end);
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    std::size_t best = 0;
    for (std::size_t idx = 1; idx < cells; ++idx)
        if (table[idx].sse < table[best].sse) best = idx;

    FitResult result =
        make_result(ctx, table[best].omega, table[best].tau,
                    fit_cell(ctx, table[best].omega, table[best].tau));
    return {std::move(result), std::move(table)};
}

Eigen::VectorXd synthesize(ModelKind model, const SplineSpec& spec, const TimeGrid& grid,
                           const SplineCoeffs& x1, const SplineCoeffs& x2, double omega,
                           double tau, bool normalize_time) {
    TimeMap map = normalize_time ? normalization_map(grid) : TimeMap{};
    TimeGrid mapped_grid = grid;
    SplineSpec mapped_spec = spec;
    if (normalize_time) {
        auto mapped = apply_time_map(map, grid, spec);
        mapped_grid = std::move(mapped.first);
        mapped_spec = std::move(mapped.second);
    }
    const bool with_shift = model == ModelKind::modulated_with_shift;
    if (with_shift && x2.size() != mapped_spec.basis_size())
        throw invalid_input("shift coefficients do not match the spline spec");

    Eigen::VectorXd y(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = mapped_grid[i];
        double value = eval_spline(mapped_spec, x1, u) * std::sin(omega * grid[i] + tau);
        if (with_shift) value += eval_spline(mapped_spec, x2, u);
        y[static_cast<Eigen::Index>(i)] = value;
    }
    return y;
}

}  // namespace splinefit
