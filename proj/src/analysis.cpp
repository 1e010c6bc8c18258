#include "solfv/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace solfv {

namespace {

std::size_t variable_index(Variable v) { return static_cast<std::size_t>(v); }
std::size_t region_index(Region r) { return static_cast<std::size_t>(r); }
std::size_t norm_index(Norm n) { return static_cast<std::size_t>(n); }

/// Discrete derivative of values restricted to one contiguous run: centered
/// in the interior, one-sided at the ends, zero for a one-cell run.
std::vector<double> run_derivative(const std::vector<double>& diff, double dx) {
    const std::size_t m = diff.size();
    std::vector<double> d(m, 0.0);
    if (m < 2) return d;
    d[0] = (diff[1] - diff[0]) / dx;
    d[m - 1] = (diff[m - 1] - diff[m - 2]) / dx;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        d[i] = (diff[i + 1] - diff[i - 1]) / (2.0 * dx);
    }
    return d;
}

struct NormPair {
    double l1 = 0.0;
    double sq = 0.0;
};

void accumulate(NormPair& acc, const std::vector<double>& values, double dx) {
    for (double v : values) {
        acc.l1 += std::abs(v) * dx;
        acc.sq += v * v * dx;
    }
}

}  // namespace

std::string variable_name(Variable v) {
    switch (v) {
        case Variable::N: return "N";
        case Variable::Gamma: return "Gamma";
        case Variable::DxN: return "dxN";
        case Variable::DxGamma: return "dxGamma";
    }
    return "?";
}

std::string region_name(Region r) {
    return r == Region::Plasma ? "plasma" : "limiter";
}

std::string norm_name(Norm n) { return n == Norm::L1 ? "L1" : "L2"; }

double ErrorReport::get(Variable v, Region r, Norm n) const {
    if (!has(r)) {
        throw std::invalid_argument("ErrorReport: empty region " +
                                    region_name(r));
    }
    return values[variable_index(v)][region_index(r)][norm_index(n)];
}

double& ErrorReport::at(Variable v, Region r, Norm n) {
    return values[variable_index(v)][region_index(r)][norm_index(n)];
}

bool ErrorReport::has(Region r) const {
    return r == Region::Plasma ? has_plasma : has_limiter;
}

ErrorReport error_norms(const FieldState& state, const ReferenceField& reference,
                        const Grid1D& grid, const RegionMask& mask,
                        const RegionSpec& region_spec) {
    const std::size_t n = grid.n_cells;
    if (state.size() != n || reference.N.size() != n ||
        reference.Gamma.size() != n || mask.chi.size() != n) {
        throw std::invalid_argument("error_norms: mesh size mismatch");
    }

    std::vector<bool> included(n, true);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.cell_center(i);
        for (const auto& [lo, hi] : region_spec.exclude) {
            if (x >= lo && x <= hi) {
                included[i] = false;
                break;
            }
        }
    }

    ErrorReport report;
    report.dx = grid.dx;
    report.t = state.t;
    NormPair acc[4][2];

    // Maximal runs of included cells in one region; stencils stay inside.
    std::size_t i = 0;
    while (i < n) {
        if (!included[i]) {
            ++i;
            continue;
        }
        const bool limiter = mask.chi[i] != 0.0;
        std::size_t j = i;
        while (j < n && included[j] && (mask.chi[j] != 0.0) == limiter) ++j;

        std::vector<double> diff_N(j - i), diff_G(j - i);
        for (std::size_t k = i; k < j; ++k) {
            diff_N[k - i] = state.N[k] - reference.N[k];
            diff_G[k - i] = state.Gamma[k] - reference.Gamma[k];
        }
        const std::size_t r = region_index(limiter ? Region::Limiter
                                                   : Region::Plasma);
        (limiter ? report.has_limiter : report.has_plasma) = true;
        accumulate(acc[variable_index(Variable::N)][r], diff_N, grid.dx);
        accumulate(acc[variable_index(Variable::Gamma)][r], diff_G, grid.dx);
        if (diff_N.size() >= 2) {
            accumulate(acc[variable_index(Variable::DxN)][r],
                       run_derivative(diff_N, grid.dx), grid.dx);
            accumulate(acc[variable_index(Variable::DxGamma)][r],
                       run_derivative(diff_G, grid.dx), grid.dx);
        }
        i = j;
    }

    const bool mask_has_limiter = mask.has_limiter();
    if (!report.has_plasma) {
        throw std::invalid_argument("error_norms: empty plasma region");
    }
    if (mask_has_limiter && !report.has_limiter) {
        throw std::invalid_argument("error_norms: limiter region emptied");
    }

    for (std::size_t v = 0; v < 4; ++v) {
        for (std::size_t r = 0; r < 2; ++r) {
            report.values[v][r][norm_index(Norm::L1)] = acc[v][r].l1;
            report.values[v][r][norm_index(Norm::L2)] = std::sqrt(acc[v][r].sq);
        }
    }
    return report;
}

ThicknessReport boundary_layer_thickness(const FieldState& state,
                                         const Grid1D& grid,
                                         const RegionMask& mask, double target) {
    const std::size_t n = grid.n_cells;
    if (state.size() != n || mask.chi.size() != n) {
        throw std::invalid_argument(
            "boundary_layer_thickness: mesh size mismatch");
    }
    std::size_t start = 0;
    while (start < n && mask.chi[start] == 0.0) ++start;
    if (start == n) {
        throw std::invalid_argument("boundary_layer_thickness: no limiter");
    }
    if (start == 0) {
        throw std::invalid_argument(
            "boundary_layer_thickness: no plasma cell before the limiter");
    }
    std::size_t end = start;
    while (end < n && mask.chi[end] != 0.0) ++end;

    const double interface_x = grid.x_min + static_cast<double>(start) * grid.dx;
    const double scale = 0.01 * std::abs(state.N[start - 1] - target);

    ThicknessReport report;
    for (std::size_t k = start; k < end; ++k) {
        if (std::abs(state.N[k] - target) < scale) {
            report.thickness = grid.cell_center(k) - interface_x;
            return report;
        }
    }
    report.saturated = true;
    report.thickness = static_cast<double>(end - start) * grid.dx;
    return report;
}

std::optional<BlowUpEvent> blow_up_detector(const FieldState& state,
                                            double threshold) {
    double worst = 0.0;
    std::size_t worst_cell = 0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (!std::isfinite(state.N[i]) || !std::isfinite(state.Gamma[i])) {
            return BlowUpEvent{state.t, i,
                               std::numeric_limits<double>::infinity()};
        }
        const double a = std::abs(state.M(i));
        if (a > worst) {
            worst = a;
            worst_cell = i;
        }
    }
    if (worst > threshold) return BlowUpEvent{state.t, worst_cell, worst};
    return std::nullopt;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
    RateFit fit;
    std::vector<std::pair<double, double>> logs;
    for (const auto& [eps, err] : points) {
        if (eps > 0.0 && err > 0.0 && std::isfinite(eps) && std::isfinite(err)) {
            logs.emplace_back(std::log(eps), std::log(err));
            fit.eps_used.push_back(eps);
        }
    }
    if (logs.size() < 3) {
        throw std::invalid_argument("fit_rate: needs at least 3 positive points");
    }
    const double m = static_cast<double>(logs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : logs) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) {
        throw std::invalid_argument("fit_rate: degenerate abscissae");
    }
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    double rss = 0.0;
    for (const auto& [x, y] : logs) {
        const double r = y - (fit.slope * x + fit.intercept);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / m);
    fit.n_used = logs.size();
    return fit;
}

}  // namespace solfv
